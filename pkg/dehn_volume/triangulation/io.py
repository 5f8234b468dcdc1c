"""
Versioned JSON documents for triangulations.

Top-level fields: ``format_version``, ``name``, ``tetrahedra``,
``face_gluings``, ``cusps``, optional ``short_edges`` (id -> reference
member, fixing the numbering and orientation of short-edge orbits), optional
``sigma_template`` (short-edge id -> monomial) and optional ``edge_classes``,
a derived section that is checked against the recomputed classes on load.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from dehn_volume.errors import ComplexError
from dehn_volume.triangulation.complex import (
    FaceGluing,
    FacePairingData,
    PeripheralCurves,
    TruncatedComplex,
    build_complex,
)

FORMAT_VERSION = 1


def complex_to_document(complex_: TruncatedComplex) -> dict[str, Any]:
    document: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "name": complex_.name,
        "tetrahedra": [
            {"index": i, "orientation": sign} for i, sign in enumerate(complex_.orientations)
        ],
        "face_gluings": [
            {
                "tet": g.tet,
                "face": g.face,
                "nbr_tet": g.nbr_tet,
                "nbr_face": g.nbr_face,
                "perm": list(g.perm),
            }
            for g in sorted(complex_.gluing.gluings, key=lambda g: (g.tet, g.face))
        ],
        "cusps": [
            {"index": c.index, "meridian": list(c.meridian), "longitude": list(c.longitude)}
            for c in complex_.cusps
        ],
        "edge_classes": [
            {"id": c.index, "members": [list(m) for m in c.members]}
            for c in complex_.edge_classes
        ],
        "short_edges": [
            {"id": s.index + 1, "key": list(s.members[0])} for s in complex_.short_edges
        ],
    }
    if complex_.sigma_template is not None:
        document["sigma_template"] = {
            str(i + 1): text for i, text in enumerate(complex_.sigma_template)
        }
    return document


def save_complex(complex_: TruncatedComplex) -> bytes:
    return json.dumps(complex_to_document(complex_), indent=2).encode("utf-8")


def _require(document: dict[str, Any], key: str) -> Any:
    if key not in document:
        raise ComplexError(f"Malformed triangulation document: missing '{key}'")
    return document[key]


def complex_from_document(document: Any) -> TruncatedComplex:
    """
    Raises:
        ComplexError: On a malformed document, a version mismatch or invalid combinatorics.
    """
    if not isinstance(document, dict):
        raise ComplexError("Malformed triangulation document: expected a JSON object")
    version = _require(document, "format_version")
    if version != FORMAT_VERSION:
        raise ComplexError(
            f"Unsupported triangulation format version {version} (expected {FORMAT_VERSION})"
        )
    try:
        tetrahedra = sorted(_require(document, "tetrahedra"), key=lambda t: int(t["index"]))
        if [int(t["index"]) for t in tetrahedra] != list(range(len(tetrahedra))):
            raise ComplexError("Tetrahedron indices must be 0..n-1 without gaps")
        orientations = [int(t["orientation"]) for t in tetrahedra]
        gluings = [
            FaceGluing(
                int(g["tet"]),
                int(g["face"]),
                int(g["nbr_tet"]),
                int(g["nbr_face"]),
                tuple(int(x) for x in g["perm"]),  # type: ignore[arg-type]
            )
            for g in _require(document, "face_gluings")
        ]
        cusps = sorted(_require(document, "cusps"), key=lambda c: int(c["index"]))
        peripheral = [
            PeripheralCurves(
                tuple(int(x) for x in c["meridian"]), tuple(int(x) for x in c["longitude"])
            )
            for c in cusps
        ]
        order = [
            tuple(int(x) for x in entry["key"])
            for entry in sorted(document.get("short_edges", []), key=lambda e: int(e["id"]))
        ]
        template = document.get("sigma_template")
        sigma = None
        if template is not None:
            sigma = [str(template[str(i)]) for i in range(1, len(template) + 1)]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ComplexError):
            raise
        raise ComplexError(f"Malformed triangulation document: {exc}") from exc

    complex_ = build_complex(
        FacePairingData(len(tetrahedra), gluings),
        peripheral,
        orientation_signs=orientations,
        name=str(document.get("name", "")),
        sigma_template=sigma,
        short_edge_order=order,  # type: ignore[arg-type]
    )

    declared = document.get("edge_classes")
    if declared is not None:
        ids = [int(c["id"]) for c in declared]
        if len(set(ids)) != len(ids):
            raise ComplexError(f"Duplicate long-edge class id in {ids}")
        computed = {c.index: [list(m) for m in c.members] for c in complex_.edge_classes}
        for entry in declared:
            if computed.get(int(entry["id"])) != [list(m) for m in entry["members"]]:
                raise ComplexError(
                    f"Long-edge class {entry['id']} does not match the face gluings"
                )
        if len(ids) != len(computed):
            raise ComplexError(
                f"Document declares {len(ids)} long-edge classes, gluings give {len(computed)}"
            )
    return complex_


def load_complex(data: Union[bytes, str]) -> TruncatedComplex:
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"Malformed triangulation document: {exc}") from exc
    return complex_from_document(document)


def read_complex(path: Union[str, Path]) -> TruncatedComplex:
    return load_complex(Path(path).read_bytes())


def write_complex(complex_: TruncatedComplex, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.write_bytes(save_complex(complex_))
    return target

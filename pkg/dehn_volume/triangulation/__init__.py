"""Ideal triangulations, their truncated combinatorics and cusp homology."""

from dehn_volume.triangulation.census import (
    FIGURE_EIGHT_REFERENCE,
    ReferenceFilling,
    census_figure_eight,
    load_census,
)
from dehn_volume.triangulation.complex import (
    FaceGluing,
    FacePairingData,
    PeripheralCurves,
    TruncatedComplex,
    build_complex,
)
from dehn_volume.triangulation.io import load_complex, read_complex, save_complex, write_complex

__all__ = [
    "FIGURE_EIGHT_REFERENCE",
    "FaceGluing",
    "FacePairingData",
    "PeripheralCurves",
    "ReferenceFilling",
    "TruncatedComplex",
    "build_complex",
    "census_figure_eight",
    "load_census",
    "load_complex",
    "read_complex",
    "save_complex",
    "write_complex",
]

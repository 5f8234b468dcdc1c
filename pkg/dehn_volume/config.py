"""
Run configuration.

A run is described by a ``RunConfig``: which triangulation, which filling,
optional explicit holonomy or branch overrides and solver settings. It can
be loaded from a JSON file (see ``run_config_template.json``) and every
field can be overridden from the command line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from dehn_volume.errors import ConfigError
from dehn_volume.peripheral.filling import DEFAULT_K_RANGE, FillingVector
from dehn_volume.ptolemy.solver import SolverSettings


@dataclass
class RunConfig:
    """Everything a volume, check or table run needs.

    Attributes:
        census: Name of a bundled triangulation (e.g. "fig8").
        triangulation: Path to a triangulation JSON document; wins over ``census``.
        filling: Filling string, ``r/s`` or ``inf`` per cusp, comma separated.
        holonomy: Explicit (M_j, L_j) per cusp instead of solving for them.
        uv: Branch overrides {cusp: (u, v)}.
        reference_uv: Use the reference (u, v) shipped with the census for this filling.
        starts: Random starts per Newton sweep.
        seed: Seed of the random starts and of the independence lifts.
        tolerance: Residual below which a Newton run counts as converged.
        holonomy_tolerance: Allowed |M^r L^s - 1| when choosing the peripheral log-data.
        k_range: Inclusive sweep of the winding integer on filled cusps.
        link_exterior: Report Chern-Simons modulo pi^2 instead of pi^2/2.
        trials: Number of lifts in the Psi independence check.
        debug_perturb_a: Add this multiple of pi*i to the first log-cocycle value.
        precision: Decimals in text output.
        json_output: Emit JSON instead of text.
        db_url: Results database URL.
        save: Persist the run in the results database.
    """

    census: Optional[str] = "fig8"
    triangulation: Optional[str] = None
    filling: str = "inf"
    holonomy: Optional[list[tuple[complex, complex]]] = None
    uv: dict[int, tuple[int, int]] = field(default_factory=dict)
    reference_uv: bool = False
    starts: int = 64
    seed: int = 0
    tolerance: float = 1e-12
    holonomy_tolerance: float = 1e-8
    k_range: tuple[int, int] = DEFAULT_K_RANGE
    link_exterior: bool = False
    trials: int = 10
    debug_perturb_a: Optional[float] = None
    precision: int = 9
    json_output: bool = False
    db_url: str = "sqlite:///dehn_volume.db"
    save: bool = False

    @property
    def filling_vector(self) -> FillingVector:
        return parse_filling(self.filling)

    @property
    def solver_settings(self) -> SolverSettings:
        return SolverSettings(starts=self.starts, seed=self.seed, tol=self.tolerance)

    @property
    def source(self) -> str:
        return self.triangulation or self.census or ""

    def validate(self) -> None:
        """
        Raises:
            ConfigError: On inconsistent values.
        """
        if not self.census and not self.triangulation:
            raise ConfigError("Either a census name or a triangulation file is required")
        parse_filling(self.filling)
        if self.starts < 1:
            raise ConfigError(f"starts must be positive, got {self.starts}")
        if self.k_range[0] > self.k_range[1]:
            raise ConfigError(f"Empty k range {self.k_range}")
        if self.precision < 0:
            raise ConfigError(f"precision must be >= 0, got {self.precision}")
        if self.holonomy_tolerance <= 0:
            raise ConfigError(
                f"holonomy_tolerance must be positive, got {self.holonomy_tolerance}"
            )
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "filling": self.filling,
            "holonomy": (
                [[[m.real, m.imag], [l.real, l.imag]] for m, l in self.holonomy]
                if self.holonomy
                else None
            ),
            "uv": {str(k): list(v) for k, v in self.uv.items()} or None,
            "reference_uv": self.reference_uv,
            "starts": self.starts,
            "seed": self.seed,
            "k_range": list(self.k_range),
            "link_exterior": self.link_exterior,
        }


# ---------------------------------------------------------------------------
# Parsers
# ---------------------------------------------------------------------------


def parse_filling(text: str) -> FillingVector:
    return FillingVector.parse(text)


def parse_uv(text: str) -> dict[int, tuple[int, int]]:
    """``"4,0"`` or ``"4,0;1,-1"`` (one ``u,v`` per cusp) -> {cusp: (u, v)}."""
    overrides: dict[int, tuple[int, int]] = {}
    for cusp, part in enumerate(text.split(";")):
        if not part.strip():
            continue
        try:
            u_text, v_text = part.split(",")
            overrides[cusp] = (int(u_text), int(v_text))
        except ValueError:
            raise ConfigError(
                f"Malformed (u, v) override '{part.strip()}': expected 'u,v'"
            ) from None
    return overrides


def parse_holonomy(text: str) -> list[tuple[complex, complex]]:
    """``"M,L"`` per cusp separated by ``;``; M and L are complex literals like ``0.84+0.01j``."""
    pairs = []
    for part in text.split(";"):
        try:
            m_text, l_text = part.split(",")
            pairs.append((complex(m_text.strip()), complex(l_text.strip())))
        except ValueError:
            raise ConfigError(f"Malformed holonomy '{part.strip()}': expected 'M,L'") from None
    return pairs


def _complex_value(raw: Any) -> complex:
    # [re, im] pairs in JSON, literals like "0.84+0.01j" otherwise
    if isinstance(raw, (list, tuple)):
        return complex(float(raw[0]), float(raw[1]))
    return complex(raw)


def parse_k_range(text: str) -> tuple[int, int]:
    """``"-8:8"`` -> (-8, 8)."""
    try:
        low, high = (int(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError(f"Malformed k range '{text}': expected 'low:high'") from None
    if low > high:
        raise ConfigError(f"Empty k range '{text}'")
    return low, high


def load_run_config(config_path: str | Path) -> RunConfig:
    """Load a RunConfig from a JSON file.

    Args:
        config_path: Path to the run config JSON file.

    Returns:
        A validated RunConfig.

    Raises:
        FileNotFoundError: If config_path does not exist.
        ConfigError: On malformed JSON, unknown keys or bad values.
    """
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Run config not found: {path}")
    try:
        raw: dict[str, Any] = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Malformed run config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"Run config {path} must be a JSON object")

    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(raw) - known - {"_comment"})
    if unknown:
        raise ConfigError(f"Unknown run config keys: {', '.join(unknown)}")

    values = {k: v for k, v in raw.items() if k in known}
    try:
        if isinstance(values.get("uv"), str):
            values["uv"] = parse_uv(values["uv"])
        elif isinstance(values.get("uv"), dict):
            values["uv"] = {int(k): (int(v[0]), int(v[1])) for k, v in values["uv"].items()}
        if isinstance(values.get("holonomy"), str):
            values["holonomy"] = parse_holonomy(values["holonomy"])
        elif values.get("holonomy") is not None:
            values["holonomy"] = [
                (_complex_value(m), _complex_value(l)) for m, l in values["holonomy"]
            ]
        if isinstance(values.get("k_range"), str):
            values["k_range"] = parse_k_range(values["k_range"])
        elif values.get("k_range") is not None:
            low, high = values["k_range"]
            values["k_range"] = (int(low), int(high))
    except (TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"Malformed run config {path}: {exc}") from exc

    config = RunConfig(**values)
    config.validate()
    return config

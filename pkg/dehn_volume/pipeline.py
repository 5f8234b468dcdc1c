"""
End-to-end volume computation.

    triangulation -> holonomy candidates -> geometric candidate -> b -> a
    -> flattenings -> checks -> Psi -> VolumeReport

``run_volume`` is what the ``volume`` and ``check`` commands call;
``run_table`` repeats it over a list of fillings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Sequence

from dehn_volume.cocycle.cocycle import PI_I, LogCocycle, PeripheralLog, lift_log_cocycle, select_b
from dehn_volume.config import RunConfig
from dehn_volume.dilog.volume import VolumeReport, complex_volume, psi
from dehn_volume.errors import ConfigError
from dehn_volume.flattening.conditions import (
    cusp_condition_check,
    dehn_filling_check,
    edge_condition_check,
    psi_independence_test,
)
from dehn_volume.flattening.flattening import FlatteningSet, build_flattenings
from dehn_volume.peripheral.filling import (
    FillingVector,
    HolonomyCandidate,
    candidates_at_holonomy,
    select_geometric,
    solve_filling,
)
from dehn_volume.ptolemy.natural import check_filling_representation, natural_cocycle
from dehn_volume.ptolemy.shapes import gluing_check
from dehn_volume.triangulation.census import FIGURE_EIGHT_REFERENCE, load_census
from dehn_volume.triangulation.complex import TruncatedComplex
from dehn_volume.triangulation.io import read_complex

logger = logging.getLogger(__name__)

TABLE_FILLINGS: tuple[str, ...] = ("1/5", "2/5", "3/5", "4/5")

# name -> tolerance, in the order the checks are reported
CHECK_TOLERANCES: dict[str, float] = {
    "ptolemy": 1e-12,
    "gluing": 1e-10,
    "hexagon": 1e-9,
    "flattening": 1e-10,
    "branch": 1e-6,
    "edge": 1e-9,
    "cusp": 1e-9,
    "filling": 1e-8,
    "dehn_filling": 1e-9,
    "psi_independence": 1e-8,
}

_REFERENCE_MANIFOLDS = ("fig8", "4_1", "figure-eight")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "tolerance": self.tolerance, "passed": self.passed}


@dataclass
class VolumeResult:
    """
    Everything one run produced.

    Usage:
        result = run_volume(RunConfig(census="fig8", filling="1/5", link_exterior=True))
        result.report.psi
        result.passed
    """

    config: RunConfig
    manifold: str
    filling: FillingVector
    candidates: list[HolonomyCandidate]
    selected: HolonomyCandidate
    peripheral: PeripheralLog
    flattenings: FlatteningSet
    report: VolumeReport
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "input": {**self.config.to_dict(), "manifold": self.manifold},
            "candidates": [c.to_dict() for c in self.candidates],
            "selected": {
                "M": [[m.real, m.imag] for m, _ in self.selected.targets],
                "L": [[l.real, l.imag] for _, l in self.selected.targets],
                "k": list(self.selected.windings),
                "uv": [list(uv) for uv in self.peripheral.uv],
                "psi": [self.report.psi.real, self.report.psi.imag],
                "volume": self.report.volume,
                "cs": self.report.cs,
                "modulus": self.report.modulus.value,
            },
            "flattenings": [t.to_dict() for t in self.flattenings],
            "checks": {check.name: check.to_dict() for check in self.checks},
            "passed": self.passed,
        }


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def load_triangulation(config: RunConfig) -> TruncatedComplex:
    """
    Raises:
        ConfigError: On an unknown census name or an unreadable triangulation file.
    """
    if config.triangulation:
        try:
            return read_complex(config.triangulation)
        except FileNotFoundError:
            raise ConfigError(f"Triangulation file not found: {config.triangulation}") from None
    return load_census(config.census or "")


def resolve_overrides(
    config: RunConfig, complex_: TruncatedComplex, filling: FillingVector
) -> dict[int, tuple[int, int]]:
    """
    Explicit ``uv`` overrides, or the reference ones for the figure-eight with ``reference_uv``.

    Raises:
        ConfigError: On an override for a nonexistent cusp, or no reference values.
    """
    overrides = dict(config.uv)
    if config.reference_uv:
        if complex_.name not in _REFERENCE_MANIFOLDS:
            raise ConfigError(f"No reference (u, v) values for manifold '{complex_.name}'")
        slope = filling.slopes[0]
        if slope is None or slope not in FIGURE_EIGHT_REFERENCE:
            raise ConfigError(
                f"No reference (u, v) for filling {filling}; "
                f"known: {', '.join(f'{r}/{s}' for r, s in sorted(FIGURE_EIGHT_REFERENCE))}"
            )
        overrides.setdefault(0, FIGURE_EIGHT_REFERENCE[slope].uv)
    for cusp in overrides:
        if not 0 <= cusp < complex_.cusp_count:
            raise ConfigError(
                f"(u, v) override for cusp {cusp}; the triangulation has "
                f"{complex_.cusp_count} cusps"
            )
    return overrides


def perturb(a: LogCocycle, multiple: float) -> LogCocycle:
    """Shift the first short-edge value by ``multiple * pi * i``."""
    values = list(a.values)
    values[0] += multiple * PI_I
    return LogCocycle(tuple(values))


def run_checks(
    complex_: TruncatedComplex,
    filling: FillingVector,
    selected: HolonomyCandidate,
    a: LogCocycle,
    b: PeripheralLog,
    flattenings: FlatteningSet,
    config: RunConfig,
) -> list[CheckResult]:
    c, sigma = selected.assignment, selected.sigma
    phi = natural_cocycle(c, sigma, complex_)
    cusp_residual = max(
        abs(cusp_condition_check(flattenings, a, complex_, cusp.index, path))
        for cusp in complex_.cusps
        for path in (cusp.meridian, cusp.longitude)
    )
    filling_checks = check_filling_representation(c, sigma, complex_, filling.slopes, phi=phi)
    independence = psi_independence_test(
        c, sigma, b, complex_, trials=config.trials, seed=config.seed
    )
    values = {
        "ptolemy": c.residual,
        "gluing": gluing_check(selected.shapes or [], complex_),
        "hexagon": max(phi.hexagon_defect(), phi.triangle_defect(), phi.gluing_defect()),
        "flattening": flattenings.max_sum,
        "branch": flattenings.max_branch_residual,
        "edge": edge_condition_check(flattenings, complex_),
        "cusp": cusp_residual,
        "filling": max(check.residual for check in filling_checks),
        "dehn_filling": max(dehn_filling_check(flattenings, complex_, filling.slopes)),
        "psi_independence": independence.spread,
    }
    checks = [CheckResult(name, float(values[name]), tol) for name, tol in CHECK_TOLERANCES.items()]
    for check in checks:
        if not check.passed:
            logger.warning(
                "Check %s failed: %.3g > %.3g", check.name, check.value, check.tolerance
            )
    return checks


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def run_volume(config: RunConfig, complex_: Optional[TruncatedComplex] = None) -> VolumeResult:
    """
    Complex volume of the geometric filling described by ``config``.

    Raises:
        ConfigError: On invalid input.
        NumericalError: When no candidate is found or a branch is not integral.
        ComplexError: On a malformed triangulation.
    """
    config.validate()
    complex_ = complex_ or load_triangulation(config)
    filling = config.filling_vector
    if len(filling.slopes) != complex_.cusp_count:
        raise ConfigError(
            f"Filling {filling} has {len(filling.slopes)} slopes, "
            f"the triangulation has {complex_.cusp_count} cusps"
        )
    overrides = resolve_overrides(config, complex_, filling)
    logger.info("Solving %s filled along %s", complex_.name or config.source, filling)

    if config.holonomy:
        candidates = candidates_at_holonomy(
            complex_, config.holonomy, filling, config.solver_settings
        )
    else:
        candidates = solve_filling(complex_, filling, config.k_range, config.solver_settings)
    selected = select_geometric(candidates)
    logger.info("Selected holonomy %s (volume %.9f)", selected.targets, selected.volume)

    b = select_b(selected.sigma, filling.slopes, overrides, tol=config.holonomy_tolerance)
    a = lift_log_cocycle(selected.sigma, b, complex_)
    strict = True
    if config.debug_perturb_a is not None:
        logger.warning("Perturbing the log-cocycle by %g * pi*i", config.debug_perturb_a)
        a = perturb(a, config.debug_perturb_a)
        strict = False
    flattenings = build_flattenings(selected.assignment, a, selected.sigma, complex_, strict)
    checks = run_checks(complex_, filling, selected, a, b, flattenings, config)

    report = complex_volume(
        psi(flattenings),
        link_exterior=config.link_exterior,
        diagnostics={check.name: check.value for check in checks},
    )
    logger.info("Psi = %s", report.psi)
    return VolumeResult(
        config=config,
        manifold=complex_.name or config.source,
        filling=filling,
        candidates=candidates,
        selected=selected,
        peripheral=b,
        flattenings=flattenings,
        report=report,
        checks=checks,
    )


def run_table(
    config: RunConfig, fillings: Sequence[str] = TABLE_FILLINGS
) -> list[VolumeResult]:
    """``run_volume`` for each filling, sharing the triangulation."""
    complex_ = load_triangulation(config)
    results = []
    for filling in fillings:
        results.append(run_volume(replace(config, filling=filling), complex_))
    return results

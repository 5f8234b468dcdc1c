"""
Edge, cusp and Dehn-filling conditions on flattenings, and independence of Psi
from the choice of log-cocycle.

The log-parameter of a tetrahedron at its edge {i, j} is alpha0 on edges 03
and 12, alpha1 on 02 and 13 and alpha2 on 01 and 23. Around a long-edge
class the parameters are summed with the tetrahedron orientation signs. A
normal path on a cusp picks up +epsilon * alpha at corners on its left and
-epsilon * alpha at corners on its right; for a path pushed off a closed
edge path gamma the total is 2 * b(gamma).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from dehn_volume.cocycle.cocycle import (
    PI_I,
    LogCocycle,
    MultiplicativeCocycle,
    PeripheralLog,
    Slope,
    lift_log_cocycle,
)
from dehn_volume.dilog.volume import psi, psi_difference
from dehn_volume.flattening.flattening import FlatteningSet, build_flattenings
from dehn_volume.ptolemy.shapes import EDGE_PARAMETER
from dehn_volume.ptolemy.system import PtolemyAssignment
from dehn_volume.triangulation.complex import EDGE_INDEX, TruncatedComplex
from dehn_volume.triangulation.paths import CornerPass, normal_path

logger = logging.getLogger(__name__)


def edge_sums(flattenings: FlatteningSet, complex_: TruncatedComplex) -> list[complex]:
    sums = []
    for cls in complex_.edge_classes:
        total = 0j
        for tet, edge, _ in cls.members:
            flat = flattenings.tetrahedra[tet]
            total += flat.epsilon * flat.alpha[EDGE_PARAMETER[edge]]
        sums.append(total)
    return sums


def edge_condition_check(flattenings: FlatteningSet, complex_: TruncatedComplex) -> float:
    """Largest |sum of log-parameters| around a long-edge class."""
    return max((abs(s) for s in edge_sums(flattenings, complex_)), default=0.0)


def path_sum(flattenings: FlatteningSet, passes: Sequence[CornerPass]) -> complex:
    """Signed sum of log-parameters picked up by a normal path."""
    total = 0j
    for step in passes:
        flat = flattenings.tetrahedra[step.tet]
        edge = EDGE_INDEX[tuple(sorted((step.vertex, step.corner)))]  # type: ignore[index]
        total += step.side * flat.epsilon * flat.alpha[EDGE_PARAMETER[edge]]
    return total


def cusp_condition_check(
    flattenings: FlatteningSet,
    a: LogCocycle,
    complex_: TruncatedComplex,
    cusp: int,
    path: Sequence[int],
) -> complex:
    """
    Path sum of the normal path pushed off ``path`` minus 2 * b(path).

    Raises:
        ComplexError: If the path is not closed on ``cusp`` or not normal.
    """
    complex_.validate_path(cusp, path)
    passes = normal_path(complex_, path)
    return path_sum(flattenings, passes) - 2 * a.along(path)


def peripheral_sums(
    flattenings: FlatteningSet, complex_: TruncatedComplex, cusp: int
) -> tuple[complex, complex]:
    cusp_data = complex_.cusps[cusp]
    return (
        path_sum(flattenings, normal_path(complex_, cusp_data.meridian)),
        path_sum(flattenings, normal_path(complex_, cusp_data.longitude)),
    )


def dehn_filling_check(
    flattenings: FlatteningSet, complex_: TruncatedComplex, slopes: Sequence[Slope]
) -> list[float]:
    """
    Per cusp: |r S(mu) + s S(lambda)| for a filled cusp, max(|S(mu)|, |S(lambda)|)
    for an unfilled one, S being the path sum.
    """
    residuals = []
    for cusp, slope in zip(complex_.cusps, slopes):
        s_mu, s_lambda = peripheral_sums(flattenings, complex_, cusp.index)
        if slope is None:
            residuals.append(max(abs(s_mu), abs(s_lambda)))
        else:
            r, s = slope
            residuals.append(abs(r * s_mu + s * s_lambda))
    return residuals


def random_lift(
    sigma: MultiplicativeCocycle,
    b: PeripheralLog,
    complex_: TruncatedComplex,
    rng: np.random.Generator,
) -> LogCocycle:
    """A lift on random spanning trees, shifted by a random pi*i-valued gauge."""
    a = lift_log_cocycle(sigma, b, complex_, rng=rng)
    theta = {
        vertex: complex(int(rng.integers(-2, 3))) * PI_I
        for cusp in complex_.cusps
        for vertex in cusp.vertices
    }
    return a.gauge(complex_, theta)


@dataclass
class IndependenceResult:
    values: list[complex] = field(default_factory=list)
    spread: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "trials": len(self.values),
            "spread": self.spread,
            "psi": [[v.real, v.imag] for v in self.values],
        }


def psi_independence_test(
    c: PtolemyAssignment,
    sigma: MultiplicativeCocycle,
    b: PeripheralLog,
    complex_: TruncatedComplex,
    trials: int = 10,
    seed: Optional[int] = 0,
) -> IndependenceResult:
    """
    Psi for ``trials`` different lifts with the same peripheral data.

    ``spread`` is the largest pairwise distance of the values modulo pi^2.
    """
    rng = np.random.default_rng(seed)
    values = [psi(build_flattenings(c, lift_log_cocycle(sigma, b, complex_), sigma, complex_))]
    for _ in range(max(trials - 1, 0)):
        a = random_lift(sigma, b, complex_, rng)
        values.append(psi(build_flattenings(c, a, sigma, complex_)))
    spread = max(
        (psi_difference(x, y) for i, x in enumerate(values) for y in values[i + 1 :]),
        default=0.0,
    )
    logger.debug("Psi over %d lifts, spread %.3g", len(values), spread)
    return IndependenceResult(values, spread)

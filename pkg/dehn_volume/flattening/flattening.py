"""
Flattenings of a Ptolemy assignment twisted by a log-cocycle.

For every tetrahedron the three terms D, A, B of its Ptolemy equation get
logarithms built from the principal logs of the edge values and the
log-cocycle on the short edges of the coefficients:

    log D = log c02 + log c13 + a(1;3,0) - a(3;0,1)
    log A = log c03 + log c12 + a(1;2,0) - a(2;0,1) - a(0;2,3)
    log B = log c01 + log c23 + a(0;1,2) + a(2;3,0) - a(3;0,2)

and the log-parameters are (log D - log B, log B - log A, log A - log D).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterator

from dehn_volume.cocycle.cocycle import PI_I, LogCocycle, MultiplicativeCocycle, principal_log
from dehn_volume.errors import NumericalError
from dehn_volume.ptolemy.shapes import Shape, cross_ratios
from dehn_volume.ptolemy.system import COEFFICIENT_FACTORS, TERM_EDGES, PtolemyAssignment
from dehn_volume.triangulation.complex import TruncatedComplex

logger = logging.getLogger(__name__)

BRANCH_TOLERANCE = 1e-6


@dataclass(frozen=True)
class TetrahedronFlattening:
    tet: int
    shape: Shape
    alpha: tuple[complex, complex, complex]
    p: int
    q: int
    epsilon: int
    branch_residual: float = 0.0

    @property
    def z(self) -> complex:
        return self.shape.z

    def to_dict(self) -> dict[str, Any]:
        return {
            "tet": self.tet,
            "z": [self.z.real, self.z.imag],
            "p": self.p,
            "q": self.q,
            "epsilon": self.epsilon,
        }


@dataclass
class FlatteningSet:
    """
    Flattening (z; p, q) and log-parameters of every tetrahedron.

    Usage:
        flattenings = build_flattenings(c, a, sigma, complex_)
        psi(flattenings)
    """

    tetrahedra: list[TetrahedronFlattening] = field(default_factory=list)

    def __iter__(self) -> Iterator[TetrahedronFlattening]:
        return iter(self.tetrahedra)

    def __len__(self) -> int:
        return len(self.tetrahedra)

    @property
    def max_sum(self) -> float:
        """Largest |alpha0 + alpha1 + alpha2|."""
        return max((abs(sum(t.alpha)) for t in self.tetrahedra), default=0.0)

    @property
    def max_branch_residual(self) -> float:
        return max((t.branch_residual for t in self.tetrahedra), default=0.0)


def log_terms(
    c: PtolemyAssignment, a: LogCocycle, complex_: TruncatedComplex, tet: int
) -> dict[str, complex]:
    logs = {}
    for name, ((i, j), (k, l)) in TERM_EDGES.items():
        value = principal_log(c.edge(complex_, tet, i, j)) + principal_log(
            c.edge(complex_, tet, k, l)
        )
        for vertex, tail, head, power in COEFFICIENT_FACTORS[name]:
            value += power * a.at(complex_, tet, vertex, tail, head)
        logs[name] = value
    return logs


def _branch(value: complex, tet: int, what: str, strict: bool) -> tuple[int, float]:
    ratio = value / PI_I
    nearest = round(ratio.real)
    off = abs(ratio - nearest)
    if off > BRANCH_TOLERANCE and strict:
        raise NumericalError(
            f"Tetrahedron {tet}: {what} = {ratio:.9g} is not an integer; "
            "the log-cocycle is not a lift of sigma"
        )
    return int(nearest), off


def build_flattenings(
    c: PtolemyAssignment,
    a: LogCocycle,
    sigma: MultiplicativeCocycle,
    complex_: TruncatedComplex,
    strict: bool = True,
) -> FlatteningSet:
    """
    Args:
        strict: Raise when a branch integer is off by more than 1e-6. With False the
            nearest integer is kept and the distance recorded as ``branch_residual``.

    Raises:
        NumericalError: On a degenerate shape or a non-integral branch.
    """
    shapes = cross_ratios(c, sigma, complex_)
    result = FlatteningSet()
    for tet, shape in enumerate(shapes):
        logs = log_terms(c, a, complex_, tet)
        alpha = (
            logs["D"] - logs["B"],
            logs["B"] - logs["A"],
            logs["A"] - logs["D"],
        )
        p, off_p = _branch(alpha[0] - principal_log(shape.z), tet, "p", strict)
        q, off_q = _branch(alpha[1] + principal_log(1 - shape.z), tet, "q", strict)
        result.tetrahedra.append(
            TetrahedronFlattening(
                tet, shape, alpha, p, q, complex_.orientations[tet], max(off_p, off_q)
            )
        )
    logger.debug("Flattenings: %s", [(t.p, t.q) for t in result.tetrahedra])
    return result

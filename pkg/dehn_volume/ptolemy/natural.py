"""
The natural SL(2, C) cocycle of a Ptolemy assignment.

Long edges carry counter-diagonal matrices ((0, -1/c), (c, 0)) and short
edges upper-triangular ones ((sigma, x), (0, 1/sigma)) where the short-edge
parameter x at vertex v from corner a to corner b is

    x(v; a, b) = -sigma(a; b, v) / sigma(b; v, a) * c(b -> a) / (c(a -> v) c(v -> b)).

Products are taken left to right along a path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional, Sequence

import numpy as np

from dehn_volume.cocycle.cocycle import MultiplicativeCocycle, Slope
from dehn_volume.errors import ComplexError
from dehn_volume.ptolemy.system import PtolemyAssignment
from dehn_volume.triangulation.complex import TruncatedComplex, decode_signed_id

logger = logging.getLogger(__name__)

ShortEdgeKey = tuple[int, int, int, int]

FILLING_TOLERANCE = 1e-8

IDENTITY = np.eye(2, dtype=complex)


def long_matrix(value: complex) -> np.ndarray:
    return np.array([[0, -1 / value], [value, 0]], dtype=complex)


def short_matrix(sigma_value: complex, parameter: complex) -> np.ndarray:
    return np.array([[sigma_value, parameter], [0, 1 / sigma_value]], dtype=complex)


def short_edge_params(
    c: PtolemyAssignment, sigma: MultiplicativeCocycle, complex_: TruncatedComplex
) -> dict[ShortEdgeKey, complex]:
    """Parameter of every oriented short edge of every tetrahedron."""
    params: dict[ShortEdgeKey, complex] = {}
    for tet in range(complex_.tetrahedron_count):
        for vertex, a, b in permutations(range(4), 3):
            params[(tet, vertex, a, b)] = (
                -sigma.at(complex_, tet, a, b, vertex)
                / sigma.at(complex_, tet, b, vertex, a)
                * c.edge(complex_, tet, b, a)
                / (c.edge(complex_, tet, a, vertex) * c.edge(complex_, tet, vertex, b))
            )
    return params


@dataclass
class NaturalCocycle:
    """
    Matrices of the natural cocycle on long and short edges.

    Usage:
        phi = natural_cocycle(c, sigma, complex_)
        phi.along(cusp.meridian)
    """

    complex_: TruncatedComplex
    c: PtolemyAssignment
    sigma: MultiplicativeCocycle
    params: dict[ShortEdgeKey, complex] = field(default_factory=dict)

    def long(self, tet: int, i: int, j: int) -> np.ndarray:
        return long_matrix(self.c.edge(self.complex_, tet, i, j))

    def short(self, tet: int, vertex: int, a: int, b: int) -> np.ndarray:
        return short_matrix(
            self.sigma.at(self.complex_, tet, vertex, a, b), self.params[(tet, vertex, a, b)]
        )

    def edge(self, signed_id: int) -> np.ndarray:
        orbit, sign = decode_signed_id(signed_id)
        tet, vertex, a, b = self.complex_.short_edges[orbit].members[0]
        return self.short(tet, vertex, a, b) if sign > 0 else self.short(tet, vertex, b, a)

    def along(self, path: Sequence[int]) -> np.ndarray:
        result = IDENTITY.copy()
        for signed_id in path:
            result = result @ self.edge(signed_id)
        return result

    def hexagon_defect(self) -> float:
        """Largest deviation from I of the product around a hexagonal face."""
        worst = 0.0
        for tet in range(self.complex_.tetrahedron_count):
            for v, a, b in permutations(range(4), 3):
                product = (
                    self.long(tet, a, v)
                    @ self.short(tet, v, a, b)
                    @ self.long(tet, v, b)
                    @ self.short(tet, b, v, a)
                    @ self.long(tet, b, a)
                    @ self.short(tet, a, b, v)
                )
                worst = max(worst, float(np.max(np.abs(product - IDENTITY))))
        return worst

    def triangle_defect(self) -> float:
        """Largest |phi(v; a, b) phi(v; b, d) - phi(v; a, d)| over cut triangles."""
        worst = 0.0
        for tet in range(self.complex_.tetrahedron_count):
            for v, a, b in permutations(range(4), 3):
                d = 6 - v - a - b
                product = self.short(tet, v, a, b) @ self.short(tet, v, b, d)
                worst = max(worst, float(np.max(np.abs(product - self.short(tet, v, a, d)))))
        return worst

    def gluing_defect(self) -> float:
        """Largest disagreement between the parameters of identified short edges."""
        worst = 0.0
        for orbit in self.complex_.short_edges:
            values = [self.params[member] for member in orbit.members]
            worst = max(worst, max(abs(x - values[0]) for x in values))
        return worst


def natural_cocycle(
    c: PtolemyAssignment, sigma: MultiplicativeCocycle, complex_: TruncatedComplex
) -> NaturalCocycle:
    return NaturalCocycle(complex_, c, sigma, short_edge_params(c, sigma, complex_))


def holonomy(phi: NaturalCocycle, path: Sequence[int]) -> np.ndarray:
    return phi.along(path)


# ---------------------------------------------------------------------------
# Filling check
# ---------------------------------------------------------------------------


@dataclass
class FillingCheck:
    cusp: int
    slope: Slope
    passed: bool
    residual: float
    trace_meridian: complex
    trace_longitude: complex

    def to_dict(self) -> dict:
        return {
            "cusp": self.cusp,
            "slope": "inf" if self.slope is None else f"{self.slope[0]}/{self.slope[1]}",
            "passed": self.passed,
            "residual": self.residual,
            "trace_meridian": [self.trace_meridian.real, self.trace_meridian.imag],
            "trace_longitude": [self.trace_longitude.real, self.trace_longitude.imag],
        }


def _power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    base = matrix if exponent >= 0 else np.linalg.inv(matrix)
    return np.linalg.matrix_power(base, abs(exponent))


def peripheral_matrices(
    phi: NaturalCocycle, complex_: TruncatedComplex, cusp: int
) -> tuple[np.ndarray, np.ndarray]:
    """Holonomy of meridian and longitude, the longitude rebased to the meridian's start."""
    cusp_data = complex_.cusps[cusp]
    if not cusp_data.meridian or not cusp_data.longitude:
        raise ComplexError(f"Cusp {cusp} has no peripheral curves")
    tree = complex_.spanning_trees[cusp]
    base = complex_.endpoints(cusp_data.meridian[0])[0]
    start = complex_.endpoints(cusp_data.longitude[0])[0]
    connector = tree.path_between(base, start)
    meridian = phi.along(cusp_data.meridian)
    longitude = phi.along(connector + cusp_data.longitude + _reverse(connector))
    return meridian, longitude


def _reverse(path: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(path))


def check_filling_representation(
    c: PtolemyAssignment,
    sigma: MultiplicativeCocycle,
    complex_: TruncatedComplex,
    slopes: Sequence[Slope],
    tol: float = FILLING_TOLERANCE,
    phi: Optional[NaturalCocycle] = None,
) -> list[FillingCheck]:
    """
    Whether the holonomy factors through the filling.

    A filled cusp passes when the holonomy of mu^r lambda^s is +-I; an unfilled
    cusp passes when meridian and longitude have trace +-2.
    """
    phi = phi or natural_cocycle(c, sigma, complex_)
    checks = []
    for cusp, slope in zip(complex_.cusps, slopes):
        meridian, longitude = peripheral_matrices(phi, complex_, cusp.index)
        tr_m, tr_l = complex(np.trace(meridian)), complex(np.trace(longitude))
        if slope is None:
            residual = max(min(abs(tr_m - 2), abs(tr_m + 2)), min(abs(tr_l - 2), abs(tr_l + 2)))
        else:
            r, s = slope
            killed = _power(meridian, r) @ _power(longitude, s)
            residual = float(
                min(np.max(np.abs(killed - IDENTITY)), np.max(np.abs(killed + IDENTITY)))
            )
        passed = residual < tol
        if not passed:
            logger.info("Filling check failed on cusp %d (residual %.3g)", cusp.index, residual)
        checks.append(FillingCheck(cusp.index, slope, passed, float(residual), tr_m, tr_l))
    return checks

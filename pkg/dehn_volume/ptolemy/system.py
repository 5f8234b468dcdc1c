"""
The sigma-deformed Ptolemy system.

With c_ij the value of the oriented edge i -> j of a tetrahedron, every
tetrahedron contributes

    g_D c02 c13 - g_A c03 c12 - g_B c01 c23 = 0

where the coefficients are quotients of sigma values on short edges
(sigma(v; a, b) is the short edge at vertex v from corner a to corner b):

    g_D = sigma(1;3,0) / sigma(3;0,1)
    g_A = sigma(1;2,0) / (sigma(2;0,1) sigma(0;2,3))
    g_B = sigma(0;1,2) sigma(2;3,0) / sigma(3;0,2)

Trivial sigma gives the classical Ptolemy relation. The system is evaluated
in batches of points so that many Newton starts run as one numpy computation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from dehn_volume.cocycle.cocycle import MultiplicativeCocycle
from dehn_volume.cocycle.monomial import Monomial
from dehn_volume.errors import ComplexError, NumericalError
from dehn_volume.triangulation.complex import TruncatedComplex

logger = logging.getLogger(__name__)

# (vertex, tail, head) factors of each coefficient with their exponent
COEFFICIENT_FACTORS: dict[str, tuple[tuple[int, int, int, int], ...]] = {
    "D": ((1, 3, 0, 1), (3, 0, 1, -1)),
    "A": ((1, 2, 0, 1), (2, 0, 1, -1), (0, 2, 3, -1)),
    "B": ((0, 1, 2, 1), (2, 3, 0, 1), (3, 0, 2, -1)),
}

# long edges multiplied in each term
TERM_EDGES: dict[str, tuple[tuple[int, int], tuple[int, int]]] = {
    "D": ((0, 2), (1, 3)),
    "A": ((0, 3), (1, 2)),
    "B": ((0, 1), (2, 3)),
}

_TERM_SIGNS = {"D": 1, "A": -1, "B": -1}


def coefficient(
    sigma: MultiplicativeCocycle, complex_: TruncatedComplex, tet: int, term: str
) -> complex:
    value = 1 + 0j
    for vertex, tail, head, power in COEFFICIENT_FACTORS[term]:
        value *= sigma.at(complex_, tet, vertex, tail, head) ** power
    return value


def coefficient_monomial(
    sigma: MultiplicativeCocycle, complex_: TruncatedComplex, tet: int, term: str
) -> Monomial:
    assert sigma.monomials is not None
    result = Monomial.one(complex_.cusp_count)
    for vertex, tail, head, power in COEFFICIENT_FACTORS[term]:
        orbit, sign = complex_.short_edge(tet, vertex, tail, head)
        factor = sigma.monomials[orbit]
        if sign * power < 0:
            factor = factor.inverse()
        result = result * factor
    return result


@dataclass(frozen=True)
class PtolemyTerm:
    """``coefficient * c[classes[0]] * c[classes[1]]``, signs of the edges included."""

    coefficient: complex
    classes: tuple[int, int]
    sign: int
    exponents: Optional[tuple[int, ...]] = None  # (M0, L0, M1, L1, ...)


@dataclass(frozen=True)
class PtolemyEquation:
    tet: int
    terms: tuple[PtolemyTerm, ...]


@dataclass(frozen=True)
class PtolemyAssignment:
    """
    A point c of the deformed Ptolemy variety, one value per long-edge class.

    Usage:
        c = solve(build_system(complex_, sigma))[0]
        c.edge(complex_, 0, 0, 2)
    """

    values: tuple[complex, ...]
    sigma: MultiplicativeCocycle
    residual: float = 0.0

    def edge(self, complex_: TruncatedComplex, tet: int, i: int, j: int) -> complex:
        """Value of the oriented tetrahedron edge i -> j; reversing an edge negates it."""
        cls, sign = complex_.edge_class(tet, i, j)
        return sign * self.values[cls]

    def gauge(
        self, complex_: TruncatedComplex, tau: Mapping[int, complex]
    ) -> PtolemyAssignment:
        """c(l) -> tau(tail) tau(head) c(l); sigma is transformed alongside."""
        sigma = self.sigma.gauge(complex_, tau)
        values = tuple(
            value * complex(tau.get(2 * k, 1)) * complex(tau.get(2 * k + 1, 1))
            for k, value in enumerate(self.values)
        )
        return PtolemyAssignment(values, sigma, self.residual)


@dataclass
class PtolemySystem:
    """
    Deformed Ptolemy equations of a complex for a fixed sigma.

    Terms also carry the exponents of their coefficient in the holonomy
    variables when sigma is given by monomials, which lets the filling
    solver treat (log M_j, log L_j) as unknowns.
    """

    complex_: TruncatedComplex
    sigma: MultiplicativeCocycle
    equations: list[PtolemyEquation] = field(default_factory=list)
    gauge_classes: tuple[int, ...] = ()

    @property
    def class_count(self) -> int:
        return len(self.complex_.edge_classes)

    @property
    def has_monomials(self) -> bool:
        return self.sigma.monomials is not None

    def _terms(self) -> list[tuple[int, PtolemyTerm]]:
        return [(row, term) for row, eq in enumerate(self.equations) for term in eq.terms]

    def _effective(self, logs: Optional[np.ndarray], batch: int) -> list[np.ndarray]:
        coefficients = []
        for _, term in self._terms():
            if logs is None:
                coefficients.append(np.full(batch, term.coefficient, dtype=complex))
            else:
                assert term.exponents is not None
                exponents = np.asarray(term.exponents, dtype=float)
                coefficients.append(term.sign * np.exp(logs @ exponents))
        return coefficients

    def residuals(self, c: np.ndarray, logs: Optional[np.ndarray] = None) -> np.ndarray:
        """
        Batched equation values.

        Args:
            c: (batch, classes) class values.
            logs: Optional (batch, 2h) values of (log M_j, log L_j); when given the
                coefficients are the sigma monomials evaluated there.
        """
        batch = c.shape[0]
        out = np.zeros((batch, len(self.equations)), dtype=complex)
        for (row, term), coef in zip(self._terms(), self._effective(logs, batch)):
            k1, k2 = term.classes
            out[:, row] += coef * c[:, k1] * c[:, k2]
        return out

    def jacobian(
        self, c: np.ndarray, logs: Optional[np.ndarray] = None
    ) -> tuple[np.ndarray, Optional[np.ndarray]]:
        """(d/dc, d/dlogs) of the residuals; the second is None without ``logs``."""
        batch = c.shape[0]
        d_c = np.zeros((batch, len(self.equations), self.class_count), dtype=complex)
        d_logs = None
        if logs is not None:
            d_logs = np.zeros((batch, len(self.equations), logs.shape[1]), dtype=complex)
        for (row, term), coef in zip(self._terms(), self._effective(logs, batch)):
            k1, k2 = term.classes
            d_c[:, row, k1] += coef * c[:, k2]
            d_c[:, row, k2] += coef * c[:, k1]
            if d_logs is not None:
                value = coef * c[:, k1] * c[:, k2]
                d_logs[:, row, :] += value[:, None] * np.asarray(term.exponents, dtype=float)
        return d_c, d_logs

    def max_residual(self, values: Sequence[complex]) -> float:
        point = np.asarray([values], dtype=complex)
        return float(np.max(np.abs(self.residuals(point)))) if self.equations else 0.0

    def describe(self) -> list[str]:
        """Human-readable equations in the class variables c0, c1, ..."""
        lines = []
        for eq in self.equations:
            parts = []
            for term in eq.terms:
                k1, k2 = term.classes
                factor = f"c{k1}^2" if k1 == k2 else f"c{k1}*c{k2}"
                parts.append(f"({term.coefficient:.6g})*{factor}")
            lines.append(f"T{eq.tet}: " + " + ".join(parts) + " = 0")
        return lines


def gauge_classes(complex_: TruncatedComplex) -> tuple[int, ...]:
    """Least long-edge class incident to each cusp, never reusing a class."""
    chosen: list[int] = []
    for cusp in complex_.cusps:
        incident = sorted({vertex // 2 for vertex in cusp.vertices} - set(chosen))
        if not incident:
            raise ComplexError(f"No free long-edge class to normalize on cusp {cusp.index}")
        chosen.append(incident[0])
    return tuple(chosen)


def build_system(complex_: TruncatedComplex, sigma: MultiplicativeCocycle) -> PtolemySystem:
    """
    Raises:
        ComplexError: If sigma does not cover every short edge.
        NumericalError: If a coefficient vanishes.
    """
    if len(sigma.values) != len(complex_.short_edges):
        raise ComplexError(
            f"Sigma has {len(sigma.values)} values, the complex has "
            f"{len(complex_.short_edges)} short edges"
        )
    equations = []
    for tet in range(complex_.tetrahedron_count):
        terms = []
        for name in ("D", "A", "B"):
            value = coefficient(sigma, complex_, tet, name)
            if value == 0 or not np.isfinite(value):
                raise NumericalError(f"Degenerate {name} coefficient on tetrahedron {tet}")
            (i, j), (k, l) = TERM_EDGES[name]
            cls1, s1 = complex_.edge_class(tet, i, j)
            cls2, s2 = complex_.edge_class(tet, k, l)
            sign = _TERM_SIGNS[name] * s1 * s2
            exponents = None
            if sigma.monomials is not None:
                monomial = coefficient_monomial(sigma, complex_, tet, name)
                sign *= monomial.sign
                exponents = tuple(
                    x for pair in zip(monomial.meridian, monomial.longitude) for x in pair
                )
            scaled = value * _TERM_SIGNS[name] * s1 * s2
            terms.append(PtolemyTerm(scaled, (cls1, cls2), sign, exponents))
        equations.append(PtolemyEquation(tet, tuple(terms)))
    system = PtolemySystem(complex_, sigma, equations, gauge_classes(complex_))
    logger.debug(
        "Built %d Ptolemy equations, gauge classes %s", len(equations), system.gauge_classes
    )
    return system

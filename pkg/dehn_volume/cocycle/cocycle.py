"""
Boundary cocycles: multiplicative sigma, additive log-cocycles and peripheral log-data.

Values are stored per short-edge orbit in the orbit's reference orientation;
a reversed edge carries the inverse (multiplicative) or the negative
(additive). Gauge transformations act on cusp vertices.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from dehn_volume.cocycle.monomial import Monomial
from dehn_volume.dilog.functions import principal_log
from dehn_volume.errors import ComplexError, ConfigError, NumericalError
from dehn_volume.triangulation.complex import TruncatedComplex, decode_signed_id
from dehn_volume.triangulation.homology import SpanningTree, spanning_tree

logger = logging.getLogger(__name__)

PI_I = complex(0, cmath.pi)

HOLONOMY_TOLERANCE = 1e-8
CONGRUENCE_TOLERANCE = 1e-9

Slope = Optional[tuple[int, int]]


def _require_nonzero(tau: Mapping[int, complex]) -> None:
    for vertex, value in tau.items():
        if value == 0:
            raise ConfigError(f"Gauge value at cusp vertex {vertex} is zero")


# ---------------------------------------------------------------------------
# Cocycle types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicativeCocycle:
    """
    A C*-valued 1-cocycle on the cusp triangulation.

    Usage:
        sigma = sigma_from_holonomy(complex_, [(m, l)])
        sigma.at(complex_, 0, 2, 0, 1)
    """

    values: tuple[complex, ...]
    targets: tuple[tuple[complex, complex], ...]
    monomials: Optional[tuple[Monomial, ...]] = None

    def value(self, signed_id: int) -> complex:
        orbit, sign = decode_signed_id(signed_id)
        return self.values[orbit] if sign > 0 else 1 / self.values[orbit]

    def at(
        self, complex_: TruncatedComplex, tet: int, vertex: int, tail: int, head: int
    ) -> complex:
        """Value on the short edge at ``vertex`` of ``tet`` from corner ``tail`` to ``head``."""
        return self.value(complex_.signed_short_edge(tet, vertex, tail, head))

    def along(self, path: Sequence[int]) -> complex:
        result = 1 + 0j
        for signed_id in path:
            result *= self.value(signed_id)
        return result

    def triangle_defects(self, complex_: TruncatedComplex) -> list[float]:
        return [
            abs(self.along(complex_.triangle_boundary(tet, vertex)) - 1)
            for cusp in complex_.cusps
            for tet, vertex in cusp.triangles
        ]

    def gauge(
        self, complex_: TruncatedComplex, tau: Mapping[int, complex]
    ) -> MultiplicativeCocycle:
        _require_nonzero(tau)
        values = tuple(
            value * complex(tau.get(edge.head, 1)) / complex(tau.get(edge.tail, 1))
            for value, edge in zip(self.values, complex_.short_edges)
        )
        return MultiplicativeCocycle(values, self.targets)


@dataclass(frozen=True)
class LogCocycle:
    """Additive lift of sigma: a(e) = log sigma(e) mod pi*i, summing to 0 around triangles."""

    values: tuple[complex, ...]

    def value(self, signed_id: int) -> complex:
        orbit, sign = decode_signed_id(signed_id)
        return self.values[orbit] * sign

    def at(
        self, complex_: TruncatedComplex, tet: int, vertex: int, tail: int, head: int
    ) -> complex:
        return self.value(complex_.signed_short_edge(tet, vertex, tail, head))

    def along(self, path: Sequence[int]) -> complex:
        return sum((self.value(signed_id) for signed_id in path), 0j)

    def triangle_defects(self, complex_: TruncatedComplex) -> list[float]:
        return [
            abs(self.along(complex_.triangle_boundary(tet, vertex)))
            for cusp in complex_.cusps
            for tet, vertex in cusp.triangles
        ]

    def congruence_residues(self, sigma: MultiplicativeCocycle) -> list[float]:
        """Distance of (a(e) - log sigma(e)) / (pi*i) from the nearest integer, per orbit."""
        residues = []
        for a, s in zip(self.values, sigma.values):
            ratio = (a - principal_log(s)) / PI_I
            residues.append(abs(ratio - round(ratio.real)))
        return residues

    def gauge(self, complex_: TruncatedComplex, tau: Mapping[int, complex]) -> LogCocycle:
        values = tuple(
            value + complex(tau.get(edge.head, 0)) - complex(tau.get(edge.tail, 0))
            for value, edge in zip(self.values, complex_.short_edges)
        )
        return LogCocycle(values)


@dataclass(frozen=True)
class CuspLog:
    """Peripheral log-data of one cusp: b(mu) = log M + u*pi*i, b(lambda) = log L + v*pi*i."""

    log_meridian: complex
    log_longitude: complex
    u: int
    v: int
    slope: Slope = None

    @property
    def meridian(self) -> complex:
        return self.log_meridian + self.u * PI_I

    @property
    def longitude(self) -> complex:
        return self.log_longitude + self.v * PI_I

    def evaluate(self, n_mu: int, n_lambda: int) -> complex:
        return n_mu * self.meridian + n_lambda * self.longitude


@dataclass(frozen=True)
class PeripheralLog:
    cusps: tuple[CuspLog, ...] = field(default_factory=tuple)

    @property
    def uv(self) -> tuple[tuple[int, int], ...]:
        """(u_j, v_j) per cusp."""
        return tuple((c.u, c.v) for c in self.cusps)

    def with_uv(self, cusp: int, u: int, v: int) -> PeripheralLog:
        entries = list(self.cusps)
        old = entries[cusp]
        entries[cusp] = CuspLog(old.log_meridian, old.log_longitude, u, v, old.slope)
        return PeripheralLog(tuple(entries))


# ---------------------------------------------------------------------------
# Construction of sigma
# ---------------------------------------------------------------------------


def sigma_monomials(complex_: TruncatedComplex) -> tuple[Monomial, ...]:
    """
    Monomial of every short-edge orbit in the holonomy variables.

    Uses the complex's sigma template when present. Otherwise spanning-tree
    edges get 1 and every other edge gets the homology class of its
    fundamental cycle.

    Raises:
        ComplexError: If a template does not define a cocycle with the right holonomy.
    """
    h = complex_.cusp_count
    if complex_.sigma_template is not None:
        monomials = tuple(Monomial.parse(text, h) for text in complex_.sigma_template)
        _check_template(complex_, monomials)
        return monomials

    monomials_list = [Monomial.one(h)] * len(complex_.short_edges)
    for cusp, tree in zip(complex_.cusps, complex_.spanning_trees):
        homology = complex_.homology[cusp.index]
        for orbit in cusp.edges:
            if orbit in tree.tree_edges:
                continue
            n_mu, n_lambda = homology.coordinates(tree.fundamental_cycle(complex_, orbit))
            meridian = [0] * h
            longitude = [0] * h
            meridian[cusp.index] = n_mu
            longitude[cusp.index] = n_lambda
            monomials_list[orbit] = Monomial(1, tuple(meridian), tuple(longitude))
    return tuple(monomials_list)


def _path_monomial(monomials: Sequence[Monomial], path: Sequence[int], h: int) -> Monomial:
    result = Monomial.one(h)
    for signed_id in path:
        orbit, sign = decode_signed_id(signed_id)
        result = result * (monomials[orbit] if sign > 0 else monomials[orbit].inverse())
    return result


def _check_template(complex_: TruncatedComplex, monomials: Sequence[Monomial]) -> None:
    h = complex_.cusp_count
    one = Monomial.one(h)
    for cusp in complex_.cusps:
        for tet, vertex in cusp.triangles:
            product = _path_monomial(monomials, complex_.triangle_boundary(tet, vertex), h)
            if product != one:
                raise ComplexError(
                    f"Sigma template is not a cocycle: triangle at vertex {vertex} of "
                    f"tetrahedron {tet} has product {product}"
                )
        for label, path, slot in (("meridian", cusp.meridian, 0), ("longitude", cusp.longitude, 1)):
            expected = [[0] * h, [0] * h]
            expected[slot][cusp.index] = 1
            want = Monomial(1, tuple(expected[0]), tuple(expected[1]))
            got = _path_monomial(monomials, path, h)
            if got != want:
                raise ComplexError(
                    f"Sigma template gives {got} on the {label} of cusp {cusp.index}, "
                    f"expected {want}"
                )


def sigma_from_holonomy(
    complex_: TruncatedComplex,
    targets: Sequence[tuple[complex, complex]],
    use_template: bool = True,
) -> MultiplicativeCocycle:
    """
    Sigma cocycle whose induced homomorphism sends (mu_j, lambda_j) to (M_j, L_j).

    Raises:
        ConfigError: On a zero target or a wrong number of targets.
        ComplexError: If the template is inconsistent.
    """
    if len(targets) != complex_.cusp_count:
        raise ConfigError(
            f"Expected {complex_.cusp_count} holonomy targets, got {len(targets)}"
        )
    pairs = tuple((complex(m), complex(l)) for m, l in targets)
    for j, (m, l) in enumerate(pairs):
        if m == 0 or l == 0:
            raise ConfigError(f"Holonomy target of cusp {j} is zero: M={m}, L={l}")
    if use_template:
        monomials = sigma_monomials(complex_)
    else:
        monomials = sigma_monomials(_without_template(complex_))
    values = tuple(m.evaluate(pairs) for m in monomials)
    return MultiplicativeCocycle(values, pairs, monomials)


def _without_template(complex_: TruncatedComplex) -> TruncatedComplex:
    if complex_.sigma_template is None:
        return complex_
    return replace(complex_, sigma_template=None)


def trivial_cocycle(complex_: TruncatedComplex) -> MultiplicativeCocycle:
    """sigma = 1 everywhere; its Ptolemy variety is the undeformed one."""
    return sigma_from_holonomy(complex_, [(1, 1)] * complex_.cusp_count, use_template=False)


def induced_hom(
    cocycle: MultiplicativeCocycle | LogCocycle,
    complex_: TruncatedComplex,
    cusp: int,
    path: Sequence[int],
) -> complex:
    """
    Product (sigma) or sum (log-cocycle) of the values along a closed path on ``cusp``.

    Raises:
        ComplexError: If the path is not closed or leaves the cusp.
    """
    complex_.validate_path(cusp, path)
    return cocycle.along(path)


# ---------------------------------------------------------------------------
# Peripheral log-data
# ---------------------------------------------------------------------------


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_x, x = x, old_x - quotient * x
        old_y, y = y, old_y - quotient * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def minimal_solution(r: int, s: int, rhs: int) -> tuple[int, int]:
    """
    Integer (u, v) with r*u + s*v = rhs minimizing |u| + |v|, ties to the smaller u.

    Raises:
        ConfigError: If gcd(r, s) != 1.
    """
    g, x, y = extended_gcd(r, s)
    if g != 1:
        raise ConfigError(f"Filling slope ({r}, {s}) is not primitive (gcd {g})")
    u0, v0 = rhs * x, rhs * y
    # solutions are (u0 + s*t, v0 - r*t); the cost is convex in t
    centres: list[float] = []
    if s:
        centres.append(-u0 / s)
    if r:
        centres.append(v0 / r)
    low = int(np.floor(min(centres))) - 1
    high = int(np.ceil(max(centres))) + 1
    best: Optional[tuple[int, int, int]] = None
    for t in range(low, high + 1):
        u, v = u0 + s * t, v0 - r * t
        key = (abs(u) + abs(v), u, v)
        if best is None or key < best:
            best = key
    assert best is not None
    return best[1], best[2]


def _nearest_integer(value: complex, tol: float, what: str) -> int:
    nearest = round(value.real)
    if abs(value - nearest) > tol:
        raise NumericalError(f"{what} = {value:.10g} is not an integer")
    return int(nearest)


def select_b(
    sigma: MultiplicativeCocycle,
    slopes: Sequence[Slope],
    overrides: Optional[Mapping[int, tuple[int, int]]] = None,
    tol: float = HOLONOMY_TOLERANCE,
) -> PeripheralLog:
    """
    Choose peripheral log-data compatible with the filling.

    A filled cusp gets b(mu^r lambda^s) = 0 with the (u, v) of least |u| + |v|;
    an unfilled cusp gets b(mu) = b(lambda) = 0. ``overrides`` replaces the
    choice on a cusp by a given admissible (u, v).

    Raises:
        ConfigError: On a non-primitive slope or an inadmissible override.
        NumericalError: If the holonomy violates the filling equation.
    """
    if len(slopes) != len(sigma.targets):
        raise ConfigError(f"Expected {len(sigma.targets)} filling slopes, got {len(slopes)}")
    overrides = dict(overrides or {})
    entries: list[CuspLog] = []
    for j, ((m, l), slope) in enumerate(zip(sigma.targets, slopes)):
        log_m, log_l = principal_log(m), principal_log(l)
        if slope is None:
            if min(abs(m - 1), abs(m + 1)) > tol or min(abs(l - 1), abs(l + 1)) > tol:
                raise NumericalError(
                    f"Unfilled cusp {j} needs parabolic holonomy M, L = +-1; got M={m}, L={l}"
                )
            u = _nearest_integer(-log_m / PI_I, tol, f"-log M/(pi i) on cusp {j}")
            v = _nearest_integer(-log_l / PI_I, tol, f"-log L/(pi i) on cusp {j}")
            if j in overrides and overrides[j] != (u, v):
                raise ConfigError(
                    f"Override {overrides[j]} on unfilled cusp {j} must equal ({u}, {v})"
                )
        else:
            r, s = slope
            if gcd(r, s) != 1:
                raise ConfigError(f"Filling slope ({r}, {s}) is not primitive")
            residual = abs(m**r * l**s - 1)
            if residual > tol:
                raise NumericalError(
                    f"Holonomy of cusp {j} violates M^{r} L^{s} = 1 (residual {residual:.3g})"
                )
            k = _nearest_integer(
                (r * log_m + s * log_l) / (2 * PI_I), tol, f"Winding number on cusp {j}"
            )
            if j in overrides:
                u, v = overrides[j]
                if r * u + s * v != -2 * k:
                    raise ConfigError(
                        f"Override ({u}, {v}) on cusp {j} violates {r}u + {s}v = {-2 * k}"
                    )
            else:
                u, v = minimal_solution(r, s, -2 * k)
        entries.append(CuspLog(log_m, log_l, u, v, slope))
        logger.debug("Cusp %d: slope=%s (u, v)=(%d, %d)", j, slope, u, v)
    return PeripheralLog(tuple(entries))


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------


def _check_compatible(
    sigma: MultiplicativeCocycle, b: PeripheralLog, complex_: TruncatedComplex
) -> None:
    for cusp, entry in zip(complex_.cusps, b.cusps):
        for label, path, value in (
            ("meridian", cusp.meridian, entry.meridian),
            ("longitude", cusp.longitude, entry.longitude),
        ):
            held = sigma.along(path)
            ratio = (value - principal_log(held)) / PI_I
            if abs(ratio - round(ratio.real)) > CONGRUENCE_TOLERANCE:
                raise NumericalError(
                    f"Peripheral log-data on the {label} of cusp {cusp.index} is not a "
                    f"logarithm of its holonomy {held:.10g}"
                )


def lift_log_cocycle(
    sigma: MultiplicativeCocycle,
    b: PeripheralLog,
    complex_: TruncatedComplex,
    rng: Optional[np.random.Generator] = None,
) -> LogCocycle:
    """
    Lift sigma to a log-cocycle whose peripheral data is ``b``.

    Tree edges get the principal log of sigma; each other edge closes its
    fundamental cycle so the cycle sums to b of the cycle's class. With
    ``rng`` the spanning trees are random.

    Raises:
        NumericalError: If b is not a logarithm of sigma's holonomy mod pi*i.
    """
    if len(b.cusps) != complex_.cusp_count:
        raise ConfigError(f"Expected peripheral data for {complex_.cusp_count} cusps")
    _check_compatible(sigma, b, complex_)
    values: list[complex] = [0j] * len(complex_.short_edges)
    for cusp, entry in zip(complex_.cusps, b.cusps):
        tree: SpanningTree = (
            complex_.spanning_trees[cusp.index]
            if rng is None
            else spanning_tree(complex_, cusp.index, rng)
        )
        for orbit in tree.tree_edges:
            values[orbit] = principal_log(sigma.values[orbit])
        tree_log = LogCocycle(tuple(values))
        homology = complex_.homology[cusp.index]
        for orbit in cusp.edges:
            if orbit in tree.tree_edges:
                continue
            edge = complex_.short_edges[orbit]
            n_mu, n_lambda = homology.coordinates(tree.fundamental_cycle(complex_, orbit))
            values[orbit] = (
                entry.evaluate(n_mu, n_lambda)
                - tree_log.along(tree.path_from_root(edge.tail))
                + tree_log.along(tree.path_from_root(edge.head))
            )
    logger.debug("Lifted sigma to a log-cocycle over %d short edges", len(values))
    return LogCocycle(tuple(values))


def peripheral_of(
    a: LogCocycle, sigma: MultiplicativeCocycle, complex_: TruncatedComplex
) -> PeripheralLog:
    """Restriction of a log-cocycle to the peripheral curves, written as (u, v) per cusp."""
    entries = []
    for cusp, (m, l) in zip(complex_.cusps, sigma.targets):
        log_m, log_l = principal_log(m), principal_log(l)
        b_mu = induced_hom(a, complex_, cusp.index, cusp.meridian)
        b_lambda = induced_hom(a, complex_, cusp.index, cusp.longitude)
        u = _nearest_integer((b_mu - log_m) / PI_I, CONGRUENCE_TOLERANCE, "u")
        v = _nearest_integer((b_lambda - log_l) / PI_I, CONGRUENCE_TOLERANCE, "v")
        entries.append(CuspLog(log_m, log_l, u, v))
    return PeripheralLog(tuple(entries))


# ---------------------------------------------------------------------------
# Gauge action
# ---------------------------------------------------------------------------


def act_tau(obj: Any, complex_: TruncatedComplex, tau: Mapping[int, complex]) -> Any:
    """
    Gauge transform by ``tau`` (cusp vertex -> value, missing vertices act trivially).

    Works on sigma cocycles, log-cocycles (additive tau) and Ptolemy points.

    Raises:
        ConfigError: On a zero value of a multiplicative tau.
    """
    return obj.gauge(complex_, tau)


def diagonal_tau(complex_: TruncatedComplex, per_cusp: Sequence[complex]) -> dict[int, complex]:
    """Gauge constant on the vertices of each cusp."""
    return {
        vertex: complex(per_cusp[cusp.index]) for cusp in complex_.cusps for vertex in cusp.vertices
    }

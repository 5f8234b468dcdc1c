"""
Boundary holonomy compatible with a Dehn filling.

The Ptolemy equations are solved jointly with the holonomy logarithms
m_j = log M_j and l_j = log L_j. A filled cusp adds r m + s l = 2 pi i k for
every k in the sweep range; an unfilled cusp pins (m, l) to one of the four
parabolic lifts in {0, pi i}^2.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from dehn_volume.cocycle.cocycle import (
    PI_I,
    MultiplicativeCocycle,
    Slope,
    lift_log_cocycle,
    principal_log,
    select_b,
    sigma_from_holonomy,
)
from dehn_volume.dilog.volume import psi, volume_bw
from dehn_volume.errors import ConfigError, NumericalError
from dehn_volume.flattening.flattening import build_flattenings
from dehn_volume.ptolemy.natural import check_filling_representation
from dehn_volume.ptolemy.shapes import Shape, cross_ratios
from dehn_volume.ptolemy.solver import (
    SolverSettings,
    deduplicate,
    full_rank,
    gauss_newton,
    random_coordinates,
    solve,
)
from dehn_volume.ptolemy.system import PtolemyAssignment, PtolemySystem, build_system
from dehn_volume.triangulation.complex import TruncatedComplex

logger = logging.getLogger(__name__)

DEFAULT_K_RANGE = (-8, 8)
TIE_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FillingVector:
    """
    Per-cusp filling slopes; None leaves a cusp unfilled.

    Usage:
        FillingVector.parse("1/5")
        FillingVector.parse("inf,2/3")
    """

    slopes: tuple[Slope, ...]

    @classmethod
    def parse(cls, text: str) -> FillingVector:
        """
        Raises:
            ConfigError: On malformed or non-primitive slopes.
        """
        slopes: list[Slope] = []
        for part in text.split(","):
            token = part.strip().lower()
            if token in ("inf", "infinity", "∞"):
                slopes.append(None)
                continue
            try:
                r_text, s_text = token.split("/")
                r, s = int(r_text), int(s_text)
            except ValueError:
                raise ConfigError(
                    f"Malformed filling '{part.strip()}': expected 'r/s' or 'inf'"
                ) from None
            if math.gcd(r, s) != 1:
                raise ConfigError(f"Filling slope {r}/{s} is not primitive (gcd(r, s) != 1)")
            slopes.append((r, s))
        return cls(tuple(slopes))

    @classmethod
    def unfilled(cls, cusp_count: int) -> FillingVector:
        return cls((None,) * cusp_count)

    def __str__(self) -> str:
        return ",".join("inf" if s is None else f"{s[0]}/{s[1]}" for s in self.slopes)


@dataclass
class HolonomyCandidate:
    """One solution of the filled system: holonomy, Ptolemy point and shapes."""

    targets: tuple[tuple[complex, complex], ...]
    windings: tuple[Optional[int], ...]
    assignment: PtolemyAssignment
    sigma: MultiplicativeCocycle
    shapes: Optional[list[Shape]] = None
    volume: Optional[float] = None
    psi: Optional[complex] = None

    @property
    def degenerate(self) -> bool:
        return self.shapes is None

    def rounded_meridians(self, digits: int = 8) -> tuple[float, ...]:
        return tuple(
            x
            for m, _ in self.targets
            for x in (round(m.real, digits) + 0.0, round(m.imag, digits) + 0.0)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "holonomy": [
                {"M": [m.real, m.imag], "L": [l.real, l.imag]} for m, l in self.targets
            ],
            "k": list(self.windings),
            "volume": self.volume,
            "psi": None if self.psi is None else [self.psi.real, self.psi.imag],
            "degenerate": self.degenerate,
        }


def _windings(
    targets: Sequence[tuple[complex, complex]], slopes: Sequence[Slope]
) -> tuple[Optional[int], ...]:
    windings: list[Optional[int]] = []
    for (m, l), slope in zip(targets, slopes):
        if slope is None:
            windings.append(None)
            continue
        r, s = slope
        k = (r * principal_log(m) + s * principal_log(l)) / (2 * PI_I)
        windings.append(int(round(k.real)))
    return tuple(windings)


def _make_candidate(
    complex_: TruncatedComplex,
    targets: tuple[tuple[complex, complex], ...],
    c_values: np.ndarray,
    slopes: Sequence[Slope],
) -> HolonomyCandidate:
    sigma = sigma_from_holonomy(complex_, targets)
    system = build_system(complex_, sigma)
    values = tuple(complex(v) for v in c_values)
    assignment = PtolemyAssignment(values, sigma, system.max_residual(values))
    candidate = HolonomyCandidate(targets, _windings(targets, slopes), assignment, sigma)
    try:
        candidate.shapes = cross_ratios(assignment, sigma, complex_)
    except NumericalError as exc:
        logger.warning("Degenerate candidate at %s: %s", targets, exc)
        return candidate
    candidate.volume = volume_bw(
        (shape.z, eps) for shape, eps in zip(candidate.shapes, complex_.orientations)
    )
    return candidate


def _estimate_psi(
    complex_: TruncatedComplex, candidate: HolonomyCandidate, slopes: Sequence[Slope]
) -> Optional[complex]:
    """Psi with the default peripheral log-data, or None when no flattening is found."""
    try:
        b = select_b(candidate.sigma, slopes)
        a = lift_log_cocycle(candidate.sigma, b, complex_)
        return psi(build_flattenings(candidate.assignment, a, candidate.sigma, complex_))
    except NumericalError as exc:
        logger.debug("No Psi estimate at %s: %s", candidate.targets, exc)
        return None


def _passes_filling(
    complex_: TruncatedComplex, candidate: HolonomyCandidate, slopes: Sequence[Slope]
) -> bool:
    checks = check_filling_representation(
        candidate.assignment, candidate.sigma, complex_, slopes
    )
    return all(check.passed for check in checks)


class _FilledSystem:
    """Residuals and Jacobian of the Ptolemy system with holonomy unknowns."""

    def __init__(
        self,
        system: PtolemySystem,
        slopes: Sequence[Slope],
        windings: Sequence[Optional[int]],
        lifts: Sequence[Optional[tuple[complex, complex]]],
    ) -> None:
        self.system = system
        self.n = system.class_count
        self.h = len(slopes)
        rows: list[np.ndarray] = []
        rhs: list[complex] = []
        for j, (slope, k, lift) in enumerate(zip(slopes, windings, lifts)):
            if slope is not None:
                row = np.zeros(2 * self.h, dtype=complex)
                row[2 * j], row[2 * j + 1] = slope
                rows.append(row)
                rhs.append(2 * PI_I * k)
            else:
                assert lift is not None
                for offset, value in enumerate(lift):
                    row = np.zeros(2 * self.h, dtype=complex)
                    row[2 * j + offset] = 1
                    rows.append(row)
                    rhs.append(value)
        self.constraints = np.array(rows, dtype=complex)
        self.rhs = np.array(rhs, dtype=complex)

    def split(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return x[:, : self.n], x[:, self.n :]

    def residual(self, x: np.ndarray) -> np.ndarray:
        c, logs = self.split(x)
        gauges = list(self.system.gauge_classes)
        return np.concatenate(
            [
                self.system.residuals(c, logs),
                c[:, gauges] - 1,
                logs @ self.constraints.T - self.rhs,
            ],
            axis=1,
        )

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        c, logs = self.split(x)
        batch = x.shape[0]
        d_c, d_logs = self.system.jacobian(c, logs)
        assert d_logs is not None
        gauge = np.zeros((batch, len(self.system.gauge_classes), x.shape[1]), dtype=complex)
        for i, cls in enumerate(self.system.gauge_classes):
            gauge[:, i, cls] = 1
        linear = np.zeros((batch, len(self.rhs), x.shape[1]), dtype=complex)
        linear[:, :, self.n :] = self.constraints
        return np.concatenate([np.concatenate([d_c, d_logs], axis=2), gauge, linear], axis=1)


def _sweep(
    slopes: Sequence[Slope], k_range: tuple[int, int]
) -> list[tuple[tuple[Optional[int], ...], tuple[Optional[tuple[complex, complex]], ...]]]:
    options = []
    ks = range(k_range[0], k_range[1] + 1)
    parabolic = [(a, b) for a in (0j, PI_I) for b in (0j, PI_I)]
    for slope in slopes:
        if slope is None:
            options.append([(None, lift) for lift in parabolic])
        else:
            options.append([(k, None) for k in ks])
    return [
        (tuple(k for k, _ in combo), tuple(lift for _, lift in combo))
        for combo in itertools.product(*options)
    ]


def solve_filling(
    complex_: TruncatedComplex,
    filling: FillingVector,
    k_range: tuple[int, int] = DEFAULT_K_RANGE,
    settings: Optional[SolverSettings] = None,
) -> list[HolonomyCandidate]:
    """
    Holonomy candidates of the filled triangulation, deduplicated and sorted.

    Raises:
        ConfigError: If the filling does not match the cusps.
        NumericalError: If no candidate is found in the sweep.
    """
    settings = settings or SolverSettings()
    if len(filling.slopes) != complex_.cusp_count:
        raise ConfigError(
            f"Filling {filling} has {len(filling.slopes)} slopes, "
            f"the triangulation has {complex_.cusp_count} cusps"
        )
    if k_range[0] > k_range[1]:
        raise ConfigError(f"Empty k range {k_range}")
    template_sigma = sigma_from_holonomy(complex_, [(1, 1)] * complex_.cusp_count)
    system = build_system(complex_, template_sigma)
    rng = np.random.default_rng(settings.seed)
    h = complex_.cusp_count

    found: list[np.ndarray] = []
    singular = 0
    for windings, lifts in _sweep(filling.slopes, k_range):
        problem = _FilledSystem(system, filling.slopes, windings, lifts)
        c0 = random_coordinates(rng, settings.starts, system.class_count)
        logs0 = np.empty((settings.starts, 2 * h), dtype=complex)
        for j, lift in enumerate(lifts):
            if lift is None:
                logs0[:, 2 * j] = rng.uniform(-0.5, 0.5, settings.starts) + 1j * rng.uniform(
                    -np.pi, np.pi, settings.starts
                )
                logs0[:, 2 * j + 1] = rng.uniform(-0.5, 0.5, settings.starts) + 1j * rng.uniform(
                    -np.pi, np.pi, settings.starts
                )
            else:
                logs0[:, 2 * j], logs0[:, 2 * j + 1] = lift
        points, residuals = gauss_newton(
            problem.residual, problem.jacobian, np.concatenate([c0, logs0], axis=1), settings
        )
        for point, value in zip(points, residuals):
            if value >= settings.tol or np.any(point[: system.class_count] == 0):
                continue
            if not full_rank(problem.jacobian(point[None, :])[0]):
                singular += 1
                continue
            found.append(point)
        logger.debug("Sweep k=%s lifts=%s: %d points so far", windings, lifts, len(found))
    if singular:
        logger.warning("Dropped %d candidates with a singular Jacobian", singular)
    if not found:
        raise NumericalError(
            f"No holonomy candidate for filling {filling} with k in "
            f"[{k_range[0]}, {k_range[1]}]"
        )

    # compare in exponentiated coordinates: different k can give the same (M, L)
    keyed = [
        np.concatenate([p[: system.class_count], np.exp(p[system.class_count :])]) for p in found
    ]
    unique = deduplicate(keyed, settings.dedupe_tol)
    candidates = []
    rejected = 0
    for point in unique:
        exp_logs = point[system.class_count :]
        targets = tuple(
            (complex(exp_logs[2 * j]), complex(exp_logs[2 * j + 1])) for j in range(h)
        )
        candidate = _make_candidate(
            complex_, targets, point[: system.class_count], filling.slopes
        )
        # the holonomy equations alone also admit points whose representation
        # does not kill the filling slope, e.g. the complete structure
        if not _passes_filling(complex_, candidate, filling.slopes):
            rejected += 1
            continue
        if not candidate.degenerate:
            candidate.psi = _estimate_psi(complex_, candidate, filling.slopes)
        candidates.append(candidate)
    if rejected:
        logger.info(
            "Filling %s: dropped %d candidates failing the filling check", filling, rejected
        )
    if not candidates:
        raise NumericalError(
            f"No holonomy candidate for filling {filling} passes the filling check"
        )
    logger.info("Filling %s: %d holonomy candidates", filling, len(candidates))
    return candidates


def _score(candidate: HolonomyCandidate, by_psi: bool) -> float:
    if by_psi:
        assert candidate.psi is not None
        return candidate.psi.imag
    assert candidate.volume is not None
    return candidate.volume


def select_geometric(candidates: Sequence[HolonomyCandidate]) -> HolonomyCandidate:
    """
    The candidate of largest volume; near-ties go to the lexicographically
    least rounded meridian holonomy, so (M, L) wins over (1/M, 1/L) when |M| < 1.

    Volume is Im Psi when every usable candidate carries a Psi estimate and
    the sum of epsilon * D(z) otherwise. Away from parabolic holonomy the
    latter depends on the decoration, Im Psi does not.

    Raises:
        NumericalError: If there is no non-degenerate candidate.
    """
    usable = [c for c in candidates if c.volume is not None]
    if not usable:
        raise NumericalError("No non-degenerate holonomy candidate to select from")
    by_psi = all(c.psi is not None for c in usable)
    best = max(_score(c, by_psi) for c in usable)
    tied = [c for c in usable if best - _score(c, by_psi) <= TIE_TOLERANCE]
    return min(tied, key=lambda c: c.rounded_meridians())


def candidates_at_holonomy(
    complex_: TruncatedComplex,
    targets: Sequence[tuple[complex, complex]],
    filling: FillingVector,
    settings: Optional[SolverSettings] = None,
) -> list[HolonomyCandidate]:
    """
    Candidates for a holonomy given up front: one per Ptolemy solution at that sigma.

    Raises:
        ConfigError: If the holonomy does not match the cusps.
        NumericalError: If the Ptolemy system has no solution there.
    """
    if len(targets) != complex_.cusp_count:
        raise ConfigError(
            f"Expected holonomy for {complex_.cusp_count} cusps, got {len(targets)}"
        )
    fixed = tuple((complex(m), complex(l)) for m, l in targets)
    sigma = sigma_from_holonomy(complex_, fixed)
    points = solve(build_system(complex_, sigma), settings)
    return [
        _make_candidate(complex_, fixed, np.array(p.values), filling.slopes) for p in points
    ]

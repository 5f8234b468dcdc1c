"""
Multistart Gauss-Newton over C.

All starts advance together as one batch: each step solves the stacked
least-squares problems J dx = F with numpy's batched pseudo-inverse, so
square and overdetermined consistent systems are handled alike.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from dehn_volume.errors import NumericalError
from dehn_volume.ptolemy.system import PtolemyAssignment, PtolemySystem

logger = logging.getLogger(__name__)

ResidualFn = Callable[[np.ndarray], np.ndarray]
JacobianFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SolverSettings:
    starts: int = 64
    seed: int = 0
    tol: float = 1e-12
    max_iterations: int = 200
    step_tol: float = 1e-14
    dedupe_tol: float = 1e-8


def random_coordinates(rng: np.random.Generator, batch: int, size: int) -> np.ndarray:
    """Complex points with log-uniform modulus in [0.1, 10] and uniform phase."""
    modulus = 10.0 ** rng.uniform(-1.0, 1.0, size=(batch, size))
    phase = rng.uniform(-np.pi, np.pi, size=(batch, size))
    return modulus * np.exp(1j * phase)


def gauss_newton(
    residual: ResidualFn,
    jacobian: JacobianFn,
    x0: np.ndarray,
    settings: SolverSettings,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Run Gauss-Newton from every row of ``x0``.

    Returns:
        (points, residuals): final points and their max-abs residuals; rows
        that diverged carry an infinite residual.
    """
    x = np.array(x0, dtype=complex)
    active = np.ones(x.shape[0], dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(settings.max_iterations):
            if not active.any():
                break
            indices = np.flatnonzero(active)
            f = residual(x[indices])
            j = jacobian(x[indices])
            finite = np.all(np.isfinite(f), axis=1) & np.all(np.isfinite(j), axis=(1, 2))
            active[indices[~finite]] = False
            indices, f, j = indices[finite], f[finite], j[finite]
            if not indices.size:
                break
            step = (np.linalg.pinv(j) @ f[..., None])[..., 0]
            x[indices] -= step
            size = np.max(np.abs(step), axis=1)
            done = (np.max(np.abs(f), axis=1) < settings.tol) & (size < settings.step_tol)
            broken = ~np.all(np.isfinite(x[indices]), axis=1)
            active[indices[done | broken]] = False
        final = np.max(np.abs(residual(x)), axis=1)
    final[~np.all(np.isfinite(x), axis=1)] = np.inf
    final[~np.isfinite(final)] = np.inf
    return x, final


def full_rank(jacobian: np.ndarray) -> bool:
    return int(np.linalg.matrix_rank(jacobian)) == jacobian.shape[1]


def _sort_key(values: np.ndarray) -> tuple[float, ...]:
    # + 0.0 folds -0.0 into 0.0
    return tuple(x for v in values for x in (round(v.real, 8) + 0.0, round(v.imag, 8) + 0.0))


def deduplicate(points: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """Drop points within ``tol`` (max-abs) of an earlier one, then sort deterministically."""
    kept: list[np.ndarray] = []
    for point in points:
        if all(np.max(np.abs(point - other)) >= tol for other in kept):
            kept.append(point)
    return sorted(kept, key=_sort_key)


def _gauge_rows(system: PtolemySystem, batch: int) -> np.ndarray:
    rows = np.zeros((batch, len(system.gauge_classes), system.class_count), dtype=complex)
    for i, cls in enumerate(system.gauge_classes):
        rows[:, i, cls] = 1
    return rows


def solve(
    system: PtolemySystem, settings: Optional[SolverSettings] = None
) -> list[PtolemyAssignment]:
    """
    Solutions of the Ptolemy system for a fixed sigma, one per diagonal-action class.

    One long-edge class per cusp is normalized to 1.

    Raises:
        NumericalError: If no start converges.
    """
    settings = settings or SolverSettings()
    rng = np.random.default_rng(settings.seed)
    gauges = list(system.gauge_classes)

    def residual(c: np.ndarray) -> np.ndarray:
        return np.concatenate([system.residuals(c), c[:, gauges] - 1], axis=1)

    def jacobian(c: np.ndarray) -> np.ndarray:
        d_c, _ = system.jacobian(c)
        return np.concatenate([d_c, _gauge_rows(system, c.shape[0])], axis=1)

    x0 = random_coordinates(rng, settings.starts, system.class_count)
    points, residuals = gauss_newton(residual, jacobian, x0, settings)

    converged: list[np.ndarray] = []
    for point, value in zip(points, residuals):
        if value >= settings.tol or np.any(point == 0):
            continue
        if not full_rank(jacobian(point[None, :])[0]):
            logger.warning("Dropping a singular Ptolemy solution %s", np.round(point, 6))
            continue
        converged.append(point)
    if not converged:
        raise NumericalError(
            f"Ptolemy solver: none of {settings.starts} starts converged below {settings.tol:g}"
        )
    unique = deduplicate(converged, settings.dedupe_tol)
    logger.info("Ptolemy solver: %d converged starts, %d solutions", len(converged), len(unique))
    return [
        PtolemyAssignment(
            tuple(complex(v) for v in point), system.sigma, system.max_residual(point)
        )
        for point in unique
    ]

"""Dehn-filling holonomy, candidate selection and the exact eliminant."""

from dehn_volume.peripheral.apoly import (
    a_polynomial,
    factor_at_meridian,
    format_polynomial,
    reduced_quadratics,
    resultant_quadratics,
)
from dehn_volume.peripheral.filling import (
    DEFAULT_K_RANGE,
    FillingVector,
    HolonomyCandidate,
    candidates_at_holonomy,
    select_geometric,
    solve_filling,
)

__all__ = [
    "DEFAULT_K_RANGE",
    "FillingVector",
    "HolonomyCandidate",
    "a_polynomial",
    "candidates_at_holonomy",
    "factor_at_meridian",
    "format_polynomial",
    "reduced_quadratics",
    "resultant_quadratics",
    "select_geometric",
    "solve_filling",
]

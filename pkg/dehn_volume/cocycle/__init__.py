"""Boundary cocycles, peripheral log-data and the gauge action."""

from dehn_volume.cocycle.cocycle import (
    CuspLog,
    LogCocycle,
    MultiplicativeCocycle,
    PeripheralLog,
    act_tau,
    diagonal_tau,
    induced_hom,
    lift_log_cocycle,
    peripheral_of,
    principal_log,
    select_b,
    sigma_from_holonomy,
    sigma_monomials,
    trivial_cocycle,
)
from dehn_volume.cocycle.monomial import Monomial

__all__ = [
    "CuspLog",
    "LogCocycle",
    "Monomial",
    "MultiplicativeCocycle",
    "PeripheralLog",
    "act_tau",
    "diagonal_tau",
    "induced_hom",
    "lift_log_cocycle",
    "peripheral_of",
    "principal_log",
    "select_b",
    "sigma_from_holonomy",
    "sigma_monomials",
    "trivial_cocycle",
]

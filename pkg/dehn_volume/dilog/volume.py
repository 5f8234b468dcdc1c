"""
Assembly of Psi and its reduction to a complex volume report.

i*Vol_C = Psi, hence Vol = Im Psi and CS = -Re Psi, the latter only defined
modulo pi^2/2 in general and modulo pi^2 for link exteriors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Iterable

from dehn_volume.dilog.functions import PI_SQUARED, bloch_wigner, rogers_extended

if TYPE_CHECKING:
    from dehn_volume.flattening.flattening import FlatteningSet


class Modulus(Enum):
    HALF_PI_SQUARED = "half_pi_squared"
    PI_SQUARED = "pi_squared"

    @property
    def value_real(self) -> float:
        return PI_SQUARED / 2 if self is Modulus.HALF_PI_SQUARED else PI_SQUARED


def reduce_real(value: float, modulus: float) -> float:
    """Representative of value in [0, modulus)."""
    reduced = math.fmod(value, modulus)
    if reduced < 0:
        reduced += modulus
    # fmod can land exactly on the modulus after the shift
    if reduced >= modulus:
        reduced -= modulus
    return reduced


def reduce_psi(value: complex, modulus: float = PI_SQUARED) -> complex:
    return complex(reduce_real(value.real, modulus), value.imag)


def psi_difference(first: complex, second: complex, modulus: float = PI_SQUARED) -> float:
    """Distance between two Psi values in C / modulus*Z."""
    delta = reduce_real(first.real - second.real, modulus)
    delta = min(delta, modulus - delta)
    return math.hypot(delta, first.imag - second.imag)


@dataclass
class VolumeReport:
    """Complex volume of a representation, with the modulus it is defined in."""

    psi: complex
    volume: float
    cs: float
    modulus: Modulus
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "psi": [self.psi.real, self.psi.imag],
            "volume": self.volume,
            "cs": self.cs,
            "modulus": self.modulus.value,
            "diagnostics": self.diagnostics,
        }

    def summary(self, precision: int = 9) -> str:
        sign = "+" if self.psi.imag >= 0 else "-"
        return (
            f"Psi = {self.psi.real:.{precision}f} {sign} {abs(self.psi.imag):.{precision}f} i  "
            f"Vol = {self.volume:.{precision}f}  CS = {self.cs:.{precision}f} "
            f"(mod {'pi^2' if self.modulus is Modulus.PI_SQUARED else 'pi^2/2'})"
        )


def psi(flattenings: FlatteningSet) -> complex:
    """
    Sum of epsilon_j * R(z_j; p_j, q_j), real part reduced into [0, pi^2).

    Raises:
        NumericalError: If some shape is degenerate.
    """
    total = 0j
    for tet in flattenings.tetrahedra:
        total += tet.epsilon * rogers_extended(tet.z, tet.p, tet.q)
    return reduce_psi(total, PI_SQUARED)


def complex_volume(
    psi_value: complex,
    link_exterior: bool = False,
    diagnostics: dict[str, Any] | None = None,
) -> VolumeReport:
    """
    Turn Psi into Vol and CS.

    Args:
        psi_value: i times the complex volume, any representative.
        link_exterior: Report CS modulo pi^2 instead of pi^2/2.
        diagnostics: Residuals to carry along in the report.
    """
    modulus = Modulus.PI_SQUARED if link_exterior else Modulus.HALF_PI_SQUARED
    period = modulus.value_real
    value = complex(psi_value)
    return VolumeReport(
        psi=reduce_psi(value, period),
        volume=value.imag,
        cs=reduce_real(-value.real, period),
        modulus=modulus,
        diagnostics=dict(diagnostics or {}),
    )


def volume_bw(shapes: Iterable[tuple[complex, int]]) -> float:
    """Sum of epsilon_j * D(z_j) over (z_j, epsilon_j) pairs."""
    return sum(epsilon * bloch_wigner(z) for z, epsilon in shapes)

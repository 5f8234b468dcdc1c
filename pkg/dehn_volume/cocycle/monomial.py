"""
Signed Laurent monomials in the boundary holonomy variables.

Text form: ``"1"``, ``"M"``, ``"L^-1"``, ``"-L*M^2"``, ``"M1^3*L0"``. Plain
``M`` and ``L`` refer to cusp 0; ``Mj`` and ``Lj`` to cusp j.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass
from typing import Sequence

from dehn_volume.errors import ComplexError

_FACTOR = re.compile(r"^([ML])(\d*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Monomial:
    """
    ``sign * prod_j M_j^meridian[j] * L_j^longitude[j]``.

    Usage:
        m = Monomial.parse("L*M^2")
        m.evaluate([(0.84 + 0.01j, -0.84 - 0.61j)])
    """

    sign: int
    meridian: tuple[int, ...]
    longitude: tuple[int, ...]

    @classmethod
    def one(cls, cusp_count: int) -> Monomial:
        return cls(1, (0,) * cusp_count, (0,) * cusp_count)

    @classmethod
    def parse(cls, text: str, cusp_count: int = 1) -> Monomial:
        """
        Raises:
            ComplexError: On a malformed factor or a cusp index out of range.
        """
        body = text.replace(" ", "")
        sign = 1
        if body.startswith("-"):
            sign, body = -1, body[1:]
        meridian = [0] * cusp_count
        longitude = [0] * cusp_count
        if not body:
            raise ComplexError(f"Malformed sigma monomial '{text}'")
        if body == "1":
            return cls(sign, tuple(meridian), tuple(longitude))
        for factor in body.split("*"):
            match = _FACTOR.match(factor)
            if match is None:
                raise ComplexError(f"Malformed sigma monomial '{text}' at '{factor}'")
            letter, cusp_text, power_text = match.groups()
            cusp = int(cusp_text) if cusp_text else 0
            if cusp >= cusp_count:
                raise ComplexError(
                    f"Sigma monomial '{text}' names cusp {cusp}; the complex has {cusp_count}"
                )
            power = int(power_text) if power_text else 1
            target = meridian if letter == "M" else longitude
            target[cusp] += power
        return cls(sign, tuple(meridian), tuple(longitude))

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(
            self.sign * other.sign,
            tuple(a + b for a, b in zip(self.meridian, other.meridian)),
            tuple(a + b for a, b in zip(self.longitude, other.longitude)),
        )

    def inverse(self) -> Monomial:
        return Monomial(
            self.sign,
            tuple(-a for a in self.meridian),
            tuple(-a for a in self.longitude),
        )

    def evaluate(self, targets: Sequence[tuple[complex, complex]]) -> complex:
        value = complex(self.sign)
        for (m, l), p, q in zip(targets, self.meridian, self.longitude):
            value *= complex(m) ** p * complex(l) ** q
        return value

    def log_evaluate(self, logs: Sequence[tuple[complex, complex]]) -> complex:
        """Sum of exponents times the given logarithms; the sign contributes 0 or pi*i."""
        value = 0j if self.sign > 0 else complex(0, cmath.pi)
        for (log_m, log_l), p, q in zip(logs, self.meridian, self.longitude):
            value += p * log_m + q * log_l
        return value

    def __str__(self) -> str:
        factors: list[str] = []
        single = len(self.meridian) == 1
        for cusp in range(len(self.meridian)):
            suffix = "" if single else str(cusp)
            for letter, power in (("L", self.longitude[cusp]), ("M", self.meridian[cusp])):
                if power == 1:
                    factors.append(f"{letter}{suffix}")
                elif power:
                    factors.append(f"{letter}{suffix}^{power}")
        body = "*".join(factors) or "1"
        return f"-{body}" if self.sign < 0 else body

"""
Dilogarithm, Bloch-Wigner function and the extended Rogers dilogarithm.

All logarithms are principal, imaginary part in (-pi, pi]. Li2 is evaluated
by its power series on |z| <= 1/2 and otherwise by the Bernoulli series in
u = -log(1 - z) after mapping the argument into |z| <= 1, Re z <= 1/2 with
the inversion and reflection functional equations.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from dehn_volume.errors import NumericalError

PI_SQUARED = math.pi ** 2
ZETA2 = PI_SQUARED / 6.0

_SERIES_RADIUS = 0.5
_MAX_TERMS = 60
_EPS = 1e-17


@lru_cache(maxsize=1)
def _bernoulli_coefficients(count: int = 40) -> tuple[float, ...]:
    """B_n / (n + 1)! for n < count, with B_1 = -1/2."""
    numbers: list[Fraction] = [Fraction(1)]
    for m in range(1, count):
        acc = sum(
            (Fraction(math.comb(m + 1, k)) * numbers[k] for k in range(m)),
            Fraction(0),
        )
        numbers.append(-acc / (m + 1))
    return tuple(float(b / math.factorial(n + 1)) for n, b in enumerate(numbers))


def _power_series(z: complex) -> complex:
    total = 0j
    term = z
    for n in range(1, _MAX_TERMS + 1):
        contribution = term / (n * n)
        total += contribution
        if abs(contribution) < _EPS * max(abs(total), 1e-300):
            break
        term *= z
    return total


def _bernoulli_series(z: complex) -> complex:
    u = -cmath.log(1 - z)
    total = 0j
    power = u
    for n, coefficient in enumerate(_bernoulli_coefficients()):
        if coefficient != 0.0:
            contribution = coefficient * power
            total += contribution
            if n > 2 and abs(contribution) < _EPS * abs(total):
                break
        power *= u
    return total


def _li2_unit_disk(z: complex) -> complex:
    """Li2 for |z| <= 1."""
    if abs(z) <= _SERIES_RADIUS:
        return _power_series(z)
    if z.real > 0.5:
        w = 1 - z
        if w == 0:
            return complex(ZETA2)
        reflected = _power_series(w) if abs(w) <= _SERIES_RADIUS else _bernoulli_series(w)
        return ZETA2 - cmath.log(z) * cmath.log(w) - reflected
    return _bernoulli_series(z)


def li2(z: complex) -> complex:
    """
    Principal branch of the dilogarithm.

    On the cut (1, inf) the value is the limit from below, matching the
    principal log(1 - z) = log(z - 1) + pi*i there.
    """
    z = complex(z)
    if z == 0:
        return 0j
    if z == 1:
        return complex(ZETA2)
    if z.imag == 0.0 and z.real > 1.0:
        x = z.real
        real = 2 * ZETA2 - 0.5 * math.log(x) ** 2 - _li2_unit_disk(complex(1.0 / x)).real
        return complex(real, -math.pi * math.log(x))
    if abs(z) <= 1.0:
        return _li2_unit_disk(z)
    log_minus_z = cmath.log(-z)
    return -ZETA2 - 0.5 * log_minus_z * log_minus_z - _li2_unit_disk(1 / z)


def principal_log(value: complex) -> complex:
    """Principal logarithm with imaginary part in (-pi, pi]; log(-1) = pi*i."""
    value = complex(value)
    if value == 0:
        raise NumericalError("Logarithm of zero")
    result = cmath.log(value)
    if result.imag == -math.pi:
        result = complex(result.real, math.pi)
    return result


def _require_nondegenerate(z: complex) -> None:
    if z == 0 or z == 1:
        raise NumericalError(f"Shape parameter {z} is degenerate (must avoid 0 and 1)")


def bloch_wigner(z: complex) -> float:
    """D(z) = Im Li2(z) + arg(1 - z) log|z|."""
    z = complex(z)
    _require_nondegenerate(z)
    if z.imag == 0.0:
        return 0.0
    return li2(z).imag + cmath.phase(1 - z) * math.log(abs(z))


def rogers_extended(z: complex, p: int, q: int) -> complex:
    """
    Extended Rogers dilogarithm R(z; p, q).

    R(z; p, q) = Li2(z) + (pi*i/2)(p log(1-z) + q log z) + log(1-z) log(z)/2 - pi^2/2
    """
    z = complex(z)
    _require_nondegenerate(z)
    log_z = principal_log(z)
    log_one_minus_z = principal_log(1 - z)
    return (
        li2(z)
        + 0.5j * math.pi * (p * log_one_minus_z + q * log_z)
        + 0.5 * log_one_minus_z * log_z
        - 0.5 * PI_SQUARED
    )

"""
Exact elimination for two-tetrahedron, one-cusp triangulations.

Normalizing one long-edge class to 1 turns each Ptolemy equation into a
quadratic in the ratio x of the other class to it, with coefficients
Laurent monomials in M and L. The resultant of the two quadratics is the
eliminant in (M, L).
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy
from sympy import Matrix, Symbol, expand, factor

from dehn_volume.cocycle.cocycle import sigma_from_holonomy
from dehn_volume.errors import ComplexError
from dehn_volume.ptolemy.system import build_system
from dehn_volume.triangulation.complex import TruncatedComplex

M = Symbol("M")
L = Symbol("L")
X = Symbol("x")


@dataclass(frozen=True)
class Quadratic:
    """a2 x^2 + a1 x + a0 with sympy coefficients in M, L."""

    a2: sympy.Expr
    a1: sympy.Expr
    a0: sympy.Expr

    def expr(self) -> sympy.Expr:
        return self.a2 * X**2 + self.a1 * X + self.a0


def reduced_quadratics(complex_: TruncatedComplex) -> tuple[Quadratic, Quadratic]:
    """
    Quadratics in x = c(other class) / c(gauge class), one per tetrahedron.

    Raises:
        ComplexError: If the complex is not two tetrahedra with one cusp and two classes.
    """
    if (
        complex_.tetrahedron_count != 2
        or complex_.cusp_count != 1
        or len(complex_.edge_classes) != 2
    ):
        raise ComplexError(
            "Unsupported shape for exact elimination: need two tetrahedra, one cusp "
            f"and two long-edge classes (got {complex_.tetrahedron_count}, "
            f"{complex_.cusp_count}, {len(complex_.edge_classes)})"
        )
    system = build_system(complex_, sigma_from_holonomy(complex_, [(1, 1)]))
    (gauge,) = system.gauge_classes
    quadratics = []
    for equation in system.equations:
        coefficients = [sympy.Integer(0)] * 3
        for term in equation.terms:
            assert term.exponents is not None
            power = sum(1 for cls in term.classes if cls != gauge)
            p, q = term.exponents
            coefficients[power] += term.sign * M**p * L**q
        quadratics.append(Quadratic(coefficients[2], coefficients[1], coefficients[0]))
    return quadratics[0], quadratics[1]


def resultant_quadratics(f: Quadratic, g: Quadratic) -> sympy.Expr:
    """
    Determinant of the 4x4 Sylvester matrix of two quadratics, expanded.

    Raises:
        ComplexError: If a leading coefficient vanishes identically.
    """
    for name, poly in (("first", f), ("second", g)):
        if sympy.simplify(poly.a2) == 0:
            raise ComplexError(f"Leading coefficient of the {name} quadratic is identically zero")
    sylvester = Matrix(
        [
            [f.a2, f.a1, f.a0, 0],
            [0, f.a2, f.a1, f.a0],
            [g.a2, g.a1, g.a0, 0],
            [0, g.a2, g.a1, g.a0],
        ]
    )
    return expand(sylvester.det(method="berkowitz"))


def terms_of(expr: sympy.Expr) -> list[tuple[int, int, int]]:
    """(M exponent, L exponent, integer coefficient) of every term, sorted by exponents."""
    result = []
    for monomial, coeff in expand(expr).as_coefficients_dict().items():
        powers = monomial.as_powers_dict()
        result.append((int(powers.get(M, 0)), int(powers.get(L, 0)), int(coeff)))
    return sorted(result)


def clear_denominators(expr: sympy.Expr) -> sympy.Expr:
    """Multiply by the monomial making the least M and L exponents zero."""
    terms = terms_of(expr)
    if not terms:
        return sympy.Integer(0)
    min_m = min(m for m, _, _ in terms)
    min_l = min(l for _, l, _ in terms)
    return expand(expr * M ** (-min_m) * L ** (-min_l))


def normalize_sign(expr: sympy.Expr) -> sympy.Expr:
    """Make the term of least (M, L) exponents positive."""
    terms = terms_of(expr)
    return -expr if terms and terms[0][2] < 0 else expr


def format_polynomial(expr: sympy.Expr) -> str:
    """Terms ordered by (M, L) exponents: ``L - L*M^2 - M^4 - 2*L*M^4 ...``."""
    pieces = []
    for m, l, coeff in terms_of(expr):
        factors = [
            name if power == 1 else f"{name}^{power}"
            for name, power in (("L", l), ("M", m))
            if power
        ]
        body = "*".join(factors)
        magnitude = abs(coeff)
        if not body:
            body = str(magnitude)
        elif magnitude != 1:
            body = f"{magnitude}*{body}"
        sign = "-" if coeff < 0 else "+"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    first_sign, first_body = pieces[0]
    text = f"-{first_body}" if first_sign == "-" else first_body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def a_polynomial(complex_: TruncatedComplex) -> sympy.Expr:
    """Integer eliminant in (M, L) of a two-tetrahedron one-cusp complex."""
    f, g = reduced_quadratics(complex_)
    return normalize_sign(clear_denominators(resultant_quadratics(f, g)))


def factor_at_meridian(expr: sympy.Expr, value: int) -> str:
    """Factorization of the eliminant after substituting M = value, in caret notation."""
    return str(factor(expr.subs(M, value))).replace("**", "^")

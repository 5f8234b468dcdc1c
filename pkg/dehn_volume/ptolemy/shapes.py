"""
Cross-ratios of a Ptolemy assignment and the gluing equations they satisfy.

With D, A and B the three terms of a tetrahedron's equation (D = A + B),
the shape at edges 03 and 12 is z = D / B, at edges 02 and 13 it is
z' = -B / A = 1 / (1 - z) and at edges 01 and 23 it is z'' = A / D.
"""

from __future__ import annotations

from dataclasses import dataclass

from dehn_volume.cocycle.cocycle import MultiplicativeCocycle
from dehn_volume.errors import NumericalError
from dehn_volume.ptolemy.system import TERM_EDGES, PtolemyAssignment, coefficient
from dehn_volume.triangulation.complex import EDGES, TruncatedComplex

DEGENERACY_TOLERANCE = 1e-10

# which shape parameter sits on each tetrahedron edge, indexed like EDGES
EDGE_PARAMETER: tuple[int, ...] = tuple(
    {(0, 3): 0, (1, 2): 0, (0, 2): 1, (1, 3): 1, (0, 1): 2, (2, 3): 2}[edge] for edge in EDGES
)


@dataclass(frozen=True)
class Shape:
    z: complex
    z_prime: complex
    z_double_prime: complex

    def parameter(self, index: int) -> complex:
        return (self.z, self.z_prime, self.z_double_prime)[index]

    @property
    def degenerate(self) -> bool:
        return abs(self.z) < DEGENERACY_TOLERANCE or abs(self.z - 1) < DEGENERACY_TOLERANCE


def ptolemy_terms(
    c: PtolemyAssignment, sigma: MultiplicativeCocycle, complex_: TruncatedComplex, tet: int
) -> dict[str, complex]:
    """The values D, A, B of a tetrahedron's equation at ``c``."""
    terms = {}
    for name, ((i, j), (k, l)) in TERM_EDGES.items():
        terms[name] = (
            coefficient(sigma, complex_, tet, name)
            * c.edge(complex_, tet, i, j)
            * c.edge(complex_, tet, k, l)
        )
    return terms


def cross_ratios(
    c: PtolemyAssignment,
    sigma: MultiplicativeCocycle,
    complex_: TruncatedComplex,
    allow_degenerate: bool = False,
) -> list[Shape]:
    """
    Shape of every tetrahedron.

    Raises:
        NumericalError: If some z lies within 1e-10 of 0 or 1, unless ``allow_degenerate``.
    """
    shapes = []
    for tet in range(complex_.tetrahedron_count):
        terms = ptolemy_terms(c, sigma, complex_, tet)
        d, a, b = terms["D"], terms["A"], terms["B"]
        if a == 0 or b == 0 or d == 0:
            raise NumericalError(f"Tetrahedron {tet} is degenerate: a Ptolemy term vanishes")
        shape = Shape(d / b, -b / a, a / d)
        if shape.degenerate and not allow_degenerate:
            raise NumericalError(f"Tetrahedron {tet} has a degenerate shape z = {shape.z:.6g}")
        shapes.append(shape)
    return shapes


def edge_products(shapes: list[Shape], complex_: TruncatedComplex) -> list[complex]:
    """Product of the shape parameters (to the power epsilon) around each long-edge class."""
    products = []
    for cls in complex_.edge_classes:
        product = 1 + 0j
        for tet, edge, _ in cls.members:
            value = shapes[tet].parameter(EDGE_PARAMETER[edge])
            product *= value if complex_.orientations[tet] > 0 else 1 / value
        products.append(product)
    return products


def gluing_check(shapes: list[Shape], complex_: TruncatedComplex) -> float:
    """Largest |product - 1| over the long-edge classes."""
    return max((abs(p - 1) for p in edge_products(shapes, complex_)), default=0.0)

"""
Spanning trees and first homology of cusp triangulations.

Homology classes of closed short-edge paths are read off by pairing them
with a basis of closed cochains (cochains vanishing on every cut triangle),
computed exactly with sympy. A class is then written in the meridian and
longitude of its cusp.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from sympy import Matrix, zeros

from dehn_volume.errors import ComplexError

if TYPE_CHECKING:
    from dehn_volume.triangulation.complex import TruncatedComplex


def reverse_path(path: Sequence[int]) -> tuple[int, ...]:
    return tuple(-signed_id for signed_id in reversed(path))


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree of a cusp's 1-skeleton, rooted at a cusp vertex."""

    cusp: int
    root: int
    parents: dict[int, tuple[int, int]]
    tree_edges: frozenset[int]

    def path_from_root(self, vertex: int) -> tuple[int, ...]:
        """Tree path from the root to ``vertex`` as signed short-edge ids."""
        path: list[int] = []
        while vertex != self.root:
            vertex, signed_id = self.parents[vertex]
            path.append(signed_id)
        return tuple(reversed(path))

    def path_between(self, start: int, end: int) -> tuple[int, ...]:
        return reverse_path(self.path_from_root(start)) + self.path_from_root(end)

    def fundamental_cycle(self, complex_: TruncatedComplex, orbit: int) -> tuple[int, ...]:
        """Closed path root -> tail, across the edge, head -> root."""
        edge = complex_.short_edges[orbit]
        return (
            self.path_from_root(edge.tail)
            + (orbit + 1,)
            + reverse_path(self.path_from_root(edge.head))
        )


def spanning_tree(
    complex_: TruncatedComplex, cusp: int, rng: Optional[np.random.Generator] = None
) -> SpanningTree:
    """
    Breadth-first spanning tree of one cusp.

    With ``rng`` the root and the neighbour order are randomized, which yields
    different trees for the same cusp.
    """
    cusp_data = complex_.cusps[cusp]
    adjacency: dict[int, list[tuple[int, int]]] = {v: [] for v in cusp_data.vertices}
    for orbit in cusp_data.edges:
        edge = complex_.short_edges[orbit]
        if edge.tail == edge.head:
            continue
        adjacency[edge.tail].append((edge.head, orbit + 1))
        adjacency[edge.head].append((edge.tail, -(orbit + 1)))

    vertices = list(cusp_data.vertices)
    root = vertices[0] if rng is None else vertices[int(rng.integers(len(vertices)))]
    parents: dict[int, tuple[int, int]] = {}
    seen = {root}
    frontier = [root]
    tree_edges: set[int] = set()
    while frontier:
        next_frontier: list[int] = []
        for vertex in frontier:
            neighbours = list(adjacency[vertex])
            if rng is not None:
                neighbours = [neighbours[i] for i in rng.permutation(len(neighbours))]
            for other, signed_id in neighbours:
                if other in seen:
                    continue
                seen.add(other)
                parents[other] = (vertex, signed_id)
                tree_edges.add(abs(signed_id) - 1)
                next_frontier.append(other)
        frontier = next_frontier
    if len(seen) != len(vertices):
        raise ComplexError(f"Cusp {cusp} has a disconnected 1-skeleton")
    return SpanningTree(cusp, root, parents, frozenset(tree_edges))


class CuspHomology:
    """
    Exact homology coordinates on one cusp torus.

    Usage:
        homology = complex_.homology[0]
        n_mu, n_lambda = homology.coordinates(path)
    """

    def __init__(self, complex_: TruncatedComplex, cusp: int) -> None:
        self.complex = complex_
        self.cusp = cusp
        cusp_data = complex_.cusps[cusp]
        self._columns = {orbit: i for i, orbit in enumerate(cusp_data.edges)}
        boundary = zeros(len(cusp_data.triangles), len(cusp_data.edges))
        for row, (tet, vertex) in enumerate(cusp_data.triangles):
            for signed_id in complex_.triangle_boundary(tet, vertex):
                orbit, sign = abs(signed_id) - 1, 1 if signed_id > 0 else -1
                boundary[row, self._columns[orbit]] += sign
        basis = boundary.nullspace()
        self._cochains = Matrix.hstack(*basis) if basis else zeros(len(cusp_data.edges), 0)
        self._peripheral = Matrix.hstack(
            self._pairing(cusp_data.meridian).T, self._pairing(cusp_data.longitude).T
        )

    def _pairing(self, path: Sequence[int]) -> Matrix:
        counts = zeros(1, len(self._columns))
        for signed_id in path:
            orbit = abs(signed_id) - 1
            if orbit not in self._columns:
                raise ComplexError(f"Short edge {signed_id} does not lie on cusp {self.cusp}")
            counts[0, self._columns[orbit]] += 1 if signed_id > 0 else -1
        return counts * self._cochains

    def coordinates(self, path: Sequence[int]) -> tuple[int, int]:
        """
        Write a closed path as n_mu * meridian + n_lambda * longitude.

        Raises:
            ComplexError: If the peripheral curves do not form a homology basis.
        """
        target = self._pairing(path).T
        try:
            solution, parameters = self._peripheral.gauss_jordan_solve(target)
        except ValueError:
            raise ComplexError(
                f"Meridian and longitude of cusp {self.cusp} do not span its homology"
            ) from None
        if parameters.shape[0]:
            raise ComplexError(
                f"Meridian and longitude of cusp {self.cusp} are homologically dependent"
            )
        n_mu, n_lambda = solution[0], solution[1]
        if not (n_mu.is_integer and n_lambda.is_integer):
            raise ComplexError(
                f"Meridian and longitude of cusp {self.cusp} generate a proper sublattice"
            )
        return int(n_mu), int(n_lambda)

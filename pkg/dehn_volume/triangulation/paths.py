"""
Normal paths on cusp triangulations.

A closed short-edge path is pushed off to its left into the cut triangles.
Along each edge the pushed path crosses the triangle on the left of the edge,
passing the corner opposite the edge on its left; at each vertex of the edge
path it turns clockwise around the vertex, passing the corners there on its
right, until it reaches the triangle on the left of the next edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from dehn_volume.errors import ComplexError
from dehn_volume.triangulation.complex import TruncatedComplex, decode_signed_id

ShortEdgeKey = tuple[int, int, int, int]


@dataclass(frozen=True)
class CornerPass:
    """The path passes ``corner`` of the cut triangle at ``vertex`` of ``tet``."""

    tet: int
    vertex: int
    corner: int
    side: int  # +1 corner on the left of the path, -1 on the right


def ccw_next(complex_: TruncatedComplex, tet: int, vertex: int, corner: int) -> int:
    corners = [x for x in range(4) if x != vertex]
    if complex_.link_orientation(tet, vertex) < 0:
        corners = [corners[0], corners[2], corners[1]]
    return corners[(corners.index(corner) + 1) % 3]


def _third(vertex: int, a: int, b: int) -> int:
    return 6 - vertex - a - b


def glued_partner(complex_: TruncatedComplex, key: ShortEdgeKey) -> ShortEdgeKey:
    """The other copy of an oriented short edge, in the same orientation."""
    tet, vertex, tail, head = key
    orbit, sign = complex_.short_edge(tet, vertex, tail, head)
    first, second = complex_.short_edges[orbit].members
    oriented = (tet, vertex, tail, head) if sign > 0 else (tet, vertex, head, tail)
    other = second if oriented == first else first
    t, v, a, b = other
    return (t, v, a, b) if sign > 0 else (t, v, b, a)


def left_member(complex_: TruncatedComplex, signed_id: int) -> ShortEdgeKey:
    """The copy of the edge whose cut triangle lies on its left."""
    orbit, sign = decode_signed_id(signed_id)
    for tet, vertex, a, b in complex_.short_edges[orbit].members:
        tail, head = (a, b) if sign > 0 else (b, a)
        if ccw_next(complex_, tet, vertex, tail) == head:
            return tet, vertex, tail, head
    raise ComplexError(f"Short edge {signed_id} has no triangle on its left (non-orientable cusp)")


def normal_path(complex_: TruncatedComplex, path: Sequence[int]) -> tuple[CornerPass, ...]:
    """
    Corner passes of the closed edge path pushed off to its left.

    Raises:
        ComplexError: If the path is not closed or backtracks along an edge.
    """
    if not path:
        return ()
    cusp = complex_.short_edges[decode_signed_id(path[0])[0]].cusp
    complex_.validate_path(cusp, path)
    for i, signed_id in enumerate(path):
        if path[(i + 1) % len(path)] == -signed_id and len(path) > 1:
            raise ComplexError(
                f"Path {list(path)} is not normal: it re-enters through the face it left"
            )

    limit = 12 * complex_.tetrahedron_count + 1
    passes: list[CornerPass] = []
    lefts = [left_member(complex_, signed_id) for signed_id in path]
    for i, (tet, vertex, tail, head) in enumerate(lefts):
        opposite = _third(vertex, tail, head)
        passes.append(CornerPass(tet, vertex, opposite, 1))

        next_tet, next_vertex, next_tail, next_head = lefts[(i + 1) % len(lefts)]
        next_opposite = _third(next_vertex, next_tail, next_head)
        # leave through the side between the head corner and the opposite corner
        key: ShortEdgeKey = (tet, vertex, head, opposite)
        for _ in range(limit):
            t, v, pivot, other = glued_partner(complex_, key)
            if (t, v, pivot, other) == (next_tet, next_vertex, next_tail, next_opposite):
                break
            passes.append(CornerPass(t, v, pivot, -1))
            key = (t, v, pivot, _third(v, pivot, other))
        else:
            raise ComplexError(f"Could not turn around the vertex after short edge {path[i]}")
    return tuple(passes)

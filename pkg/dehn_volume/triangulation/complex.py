"""
Truncated-tetrahedron combinatorics of an ideal triangulation.

Vertices of every tetrahedron are labelled 0..3 and adjacent tetrahedra must
agree on the order of the vertices of their common face. Edges of the
original tetrahedra are the long edges; the triangular cut faces at the
truncated vertices tile the cusp tori and their sides are the short edges.

A short edge is addressed as (tet, vertex, tail_corner, head_corner): it lies
in the cut triangle at ``vertex`` and runs from the corner near long edge
{vertex, tail_corner} to the corner near {vertex, head_corner}. It sits on
the face of the tetrahedron opposite the remaining fourth vertex.

Paths on a cusp are tuples of signed short-edge ids: id k > 0 is orbit k - 1
in its reference orientation, -k the same orbit reversed.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Optional, Sequence

from dehn_volume.errors import ComplexError

if TYPE_CHECKING:
    from dehn_volume.triangulation.homology import CuspHomology, SpanningTree

logger = logging.getLogger(__name__)

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX: dict[tuple[int, int], int] = {edge: i for i, edge in enumerate(EDGES)}

Perm = tuple[int, int, int, int]
ShortEdgeKey = tuple[int, int, int, int]
Corner = tuple[int, int, int]
Triangle = tuple[int, int]


def fourth_vertex(*vertices: int) -> int:
    return 6 - sum(vertices)


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def inverse_permutation(perm: Sequence[int]) -> Perm:
    inverse = [0, 0, 0, 0]
    for i, image in enumerate(perm):
        inverse[image] = i
    return (inverse[0], inverse[1], inverse[2], inverse[3])


def decode_signed_id(signed_id: int) -> tuple[int, int]:
    """Signed 1-based short-edge id -> (orbit index, sign)."""
    if signed_id == 0:
        raise ComplexError("Short-edge id 0 is not valid (ids are 1-based and signed)")
    return abs(signed_id) - 1, 1 if signed_id > 0 else -1


def encode_signed_id(orbit: int, sign: int) -> int:
    return (orbit + 1) * sign


# ---------------------------------------------------------------------------
# Input data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FaceGluing:
    """Face ``face`` of ``tet`` glued to ``nbr_face`` of ``nbr_tet``; perm[i] is the image of i."""

    tet: int
    face: int
    nbr_tet: int
    nbr_face: int
    perm: Perm


@dataclass
class FacePairingData:
    """
    Face pairings of an ideal triangulation.

    Usage:
        data = FacePairingData(2, gluings)
        data.validate()
        nbr, perm = data.partner(0, 3)
    """

    tetrahedron_count: int
    gluings: list[FaceGluing] = field(default_factory=list)

    def partner(self, tet: int, face: int) -> tuple[int, int, Perm]:
        """Return (nbr_tet, nbr_face, perm) for the given face."""
        try:
            return self._table[(tet, face)]
        except KeyError:
            raise ComplexError(f"Unglued face {face} of tetrahedron {tet}") from None

    @cached_property
    def _table(self) -> dict[tuple[int, int], tuple[int, int, Perm]]:
        table: dict[tuple[int, int], tuple[int, int, Perm]] = {}
        for gluing in self.gluings:
            key = (gluing.tet, gluing.face)
            if key in table:
                raise ComplexError(f"Face {gluing.face} of tetrahedron {gluing.tet} glued twice")
            table[key] = (gluing.nbr_tet, gluing.nbr_face, tuple(gluing.perm))  # type: ignore[misc]
        return table

    def validate(self) -> None:
        """
        Check that every face is glued, gluings are involutive and vertex orders agree.

        Raises:
            ComplexError: Describing the first violation found.
        """
        if self.tetrahedron_count < 1:
            raise ComplexError("A triangulation needs at least one tetrahedron")
        for tet in range(self.tetrahedron_count):
            for face in range(4):
                nbr, nbr_face, perm = self.partner(tet, face)
                if not 0 <= nbr < self.tetrahedron_count:
                    raise ComplexError(
                        f"Face {face} of tetrahedron {tet} glued to missing tetrahedron {nbr}"
                    )
                if sorted(perm) != [0, 1, 2, 3]:
                    raise ComplexError(
                        f"Gluing of face {face} of tetrahedron {tet} is not a permutation: {perm}"
                    )
                if perm[face] != nbr_face:
                    raise ComplexError(
                        f"Gluing of face {face} of tetrahedron {tet} does not map the face "
                        f"onto face {nbr_face} of tetrahedron {nbr}"
                    )
                if (nbr, nbr_face) == (tet, face):
                    raise ComplexError(f"Face {face} of tetrahedron {tet} is glued to itself")
                back_tet, back_face, back_perm = self.partner(nbr, nbr_face)
                if (back_tet, back_face) != (tet, face) or back_perm != inverse_permutation(perm):
                    raise ComplexError(
                        f"Gluing of face {face} of tetrahedron {tet} is not involutive"
                    )
                corners = [v for v in range(4) if v != face]
                images = [perm[v] for v in corners]
                if images != sorted(images):
                    raise ComplexError(
                        f"Vertex orderings of tetrahedra {tet} and {nbr} disagree on face {face}"
                    )


@dataclass(frozen=True)
class PeripheralCurves:
    """Meridian and longitude of one cusp as closed paths of signed short-edge ids."""

    meridian: tuple[int, ...]
    longitude: tuple[int, ...]


# ---------------------------------------------------------------------------
# Complex
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeClass:
    """Long-edge class; members are (tet, edge index, sign relative to the representative)."""

    index: int
    members: tuple[tuple[int, int, int], ...]

    @property
    def representative(self) -> tuple[int, int]:
        tet, edge, _ = self.members[0]
        return tet, edge


@dataclass(frozen=True)
class ShortEdgeOrbit:
    """Identified short edges, all stored in the orientation of the representative."""

    index: int
    members: tuple[ShortEdgeKey, ...]
    tail: int
    head: int
    cusp: int


@dataclass(frozen=True)
class Cusp:
    index: int
    triangles: tuple[Triangle, ...]
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    peripheral: PeripheralCurves

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    @property
    def meridian(self) -> tuple[int, ...]:
        return self.peripheral.meridian

    @property
    def longitude(self) -> tuple[int, ...]:
        return self.peripheral.longitude


@dataclass(frozen=True)
class TruncatedComplex:
    """
    Immutable combinatorics of a truncated ideal triangulation.

    Cusp vertices (the ends of long edges on the boundary) are numbered
    2*k for the tail and 2*k + 1 for the head of edge class k.

    Usage:
        complex_ = build_complex(data, peripheral)
        cls, sign = complex_.edge_class(0, 0, 2)
        orbit, sign = complex_.short_edge(0, 2, 0, 1)
    """

    name: str
    gluing: FacePairingData
    orientations: tuple[int, ...]
    edge_classes: tuple[EdgeClass, ...]
    short_edges: tuple[ShortEdgeOrbit, ...]
    cusps: tuple[Cusp, ...]
    sigma_template: Optional[tuple[str, ...]] = None
    _edge_lookup: dict[tuple[int, int], tuple[int, int]] = field(
        default_factory=dict, repr=False, compare=False
    )
    _short_lookup: dict[ShortEdgeKey, tuple[int, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def tetrahedron_count(self) -> int:
        return self.gluing.tetrahedron_count

    @property
    def cusp_count(self) -> int:
        return len(self.cusps)

    def edge_class(self, tet: int, i: int, j: int) -> tuple[int, int]:
        """Class of the oriented tetrahedron edge i -> j and its sign against the class."""
        if i == j:
            raise ComplexError(f"Degenerate edge ({i}, {j}) of tetrahedron {tet}")
        if i < j:
            return self._edge_lookup[(tet, EDGE_INDEX[(i, j)])]
        cls, sign = self._edge_lookup[(tet, EDGE_INDEX[(j, i)])]
        return cls, -sign

    def short_edge(self, tet: int, vertex: int, tail: int, head: int) -> tuple[int, int]:
        """Orbit of the short edge and its sign against the orbit representative."""
        try:
            return self._short_lookup[(tet, vertex, tail, head)]
        except KeyError:
            raise ComplexError(
                f"No short edge at vertex {vertex} of tetrahedron {tet} "
                f"from corner {tail} to {head}"
            ) from None

    def signed_short_edge(self, tet: int, vertex: int, tail: int, head: int) -> int:
        orbit, sign = self.short_edge(tet, vertex, tail, head)
        return encode_signed_id(orbit, sign)

    def cusp_vertex(self, tet: int, vertex: int, corner: int) -> int:
        """Cusp vertex at the end near ``vertex`` of long edge {vertex, corner}."""
        cls, sign = self.edge_class(tet, vertex, corner)
        return 2 * cls if sign > 0 else 2 * cls + 1

    def link_orientation(self, tet: int, vertex: int) -> int:
        """+1 if the increasing corner order of the cut triangle is counterclockwise on the cusp."""
        return (-1 if vertex % 2 == 0 else 1) * self.orientations[tet]

    def endpoints(self, signed_id: int) -> tuple[int, int]:
        orbit, sign = decode_signed_id(signed_id)
        self._require_orbit(orbit)
        edge = self.short_edges[orbit]
        return (edge.tail, edge.head) if sign > 0 else (edge.head, edge.tail)

    def cusp_of_vertex(self, vertex: int) -> int:
        return self._vertex_cusp[vertex]

    def validate_path(self, cusp: int, path: Sequence[int], closed: bool = True) -> None:
        """
        Raises:
            ComplexError: If an id is unknown, lies on another cusp or the path is not closed.
        """
        if not 0 <= cusp < self.cusp_count:
            raise ComplexError(f"No cusp {cusp}; the complex has {self.cusp_count}")
        if not path:
            return
        previous_head: Optional[int] = None
        first_tail: Optional[int] = None
        for signed_id in path:
            orbit, _ = decode_signed_id(signed_id)
            self._require_orbit(orbit)
            if self.short_edges[orbit].cusp != cusp:
                raise ComplexError(f"Short edge {signed_id} does not lie on cusp {cusp}")
            tail, head = self.endpoints(signed_id)
            if previous_head is not None and tail != previous_head:
                raise ComplexError(f"Path {list(path)} is broken at short edge {signed_id}")
            if first_tail is None:
                first_tail = tail
            previous_head = head
        if closed and previous_head != first_tail:
            raise ComplexError(f"Path {list(path)} on cusp {cusp} is not closed")

    def triangle_boundary(self, tet: int, vertex: int) -> tuple[int, int, int]:
        """Signed ids of the cut triangle's sides, counterclockwise on the cusp."""
        a, b, c = (x for x in range(4) if x != vertex)
        if self.link_orientation(tet, vertex) < 0:
            a, b, c = a, c, b
        return (
            self.signed_short_edge(tet, vertex, a, b),
            self.signed_short_edge(tet, vertex, b, c),
            self.signed_short_edge(tet, vertex, c, a),
        )

    @cached_property
    def spanning_trees(self) -> tuple[SpanningTree, ...]:
        from dehn_volume.triangulation.homology import spanning_tree

        return tuple(spanning_tree(self, cusp.index) for cusp in self.cusps)

    @cached_property
    def homology(self) -> tuple[CuspHomology, ...]:
        from dehn_volume.triangulation.homology import CuspHomology

        return tuple(CuspHomology(self, cusp.index) for cusp in self.cusps)

    @cached_property
    def _vertex_cusp(self) -> dict[int, int]:
        return {vertex: cusp.index for cusp in self.cusps for vertex in cusp.vertices}

    def _require_orbit(self, orbit: int) -> None:
        if not 0 <= orbit < len(self.short_edges):
            raise ComplexError(f"Unknown short edge {orbit + 1}")

    def structure(self) -> dict:
        """Plain-data view used for structural comparison and serialization."""
        return {
            "name": self.name,
            "orientations": list(self.orientations),
            "edge_classes": [[list(m) for m in c.members] for c in self.edge_classes],
            "short_edges": [[list(m) for m in s.members] for s in self.short_edges],
            "cusps": [
                {
                    "triangles": [list(t) for t in c.triangles],
                    "meridian": list(c.meridian),
                    "longitude": list(c.longitude),
                }
                for c in self.cusps
            ],
            "sigma_template": list(self.sigma_template) if self.sigma_template else None,
        }


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _orientations(data: FacePairingData, override: Optional[Sequence[int]]) -> tuple[int, ...]:
    signs: list[Optional[int]] = [None] * data.tetrahedron_count
    signs[0] = 1
    queue = deque([0])
    while queue:
        tet = queue.popleft()
        for face in range(4):
            nbr, _, perm = data.partner(tet, face)
            # an even gluing map reverses the vertex-order orientation
            expected = -signs[tet] * permutation_sign(perm)  # type: ignore[operator]
            if signs[nbr] is None:
                signs[nbr] = expected
                queue.append(nbr)
            elif signs[nbr] != expected:
                raise ComplexError("Triangulation is not orientable")
    if any(sign is None for sign in signs):
        missing = [i for i, sign in enumerate(signs) if sign is None]
        raise ComplexError(f"Triangulation is not connected; unreachable tetrahedra {missing}")
    computed = tuple(int(sign) for sign in signs)  # type: ignore[arg-type]
    if override is None:
        return computed
    given = tuple(int(x) for x in override)
    if len(given) != data.tetrahedron_count or any(x not in (1, -1) for x in given):
        raise ComplexError(f"Orientation signs {list(given)} do not match the tetrahedra")
    if given != computed and given != tuple(-x for x in computed):
        raise ComplexError(f"Orientation signs {list(given)} are inconsistent with the gluings")
    return given


def _edge_classes(
    data: FacePairingData,
) -> tuple[tuple[EdgeClass, ...], dict[tuple[int, int], tuple[int, int]]]:
    lookup: dict[tuple[int, int], tuple[int, int]] = {}
    classes: list[EdgeClass] = []
    for tet in range(data.tetrahedron_count):
        for edge_index in range(6):
            if (tet, edge_index) in lookup:
                continue
            cls = len(classes)
            members: list[tuple[int, int, int]] = []
            lookup[(tet, edge_index)] = (cls, 1)
            members.append((tet, edge_index, 1))
            queue = deque([(tet, edge_index, 1)])
            while queue:
                t, e, sign = queue.popleft()
                i, j = EDGES[e]
                for face in range(4):
                    if face in (i, j):
                        continue
                    nbr, _, perm = data.partner(t, face)
                    pi, pj = perm[i], perm[j]
                    image_sign = sign if pi < pj else -sign
                    image = (nbr, EDGE_INDEX[(min(pi, pj), max(pi, pj))])
                    if image in lookup:
                        if lookup[image] != (cls, image_sign):
                            raise ComplexError(
                                f"Edge {EDGES[image[1]]} of tetrahedron {nbr} is identified "
                                "with itself reversed"
                            )
                        continue
                    lookup[image] = (cls, image_sign)
                    members.append((image[0], image[1], image_sign))
                    queue.append((image[0], image[1], image_sign))
            classes.append(EdgeClass(cls, tuple(sorted(members))))
    return tuple(classes), lookup


def _short_edge_orbits(
    data: FacePairingData, order: Sequence[ShortEdgeKey] = ()
) -> tuple[list[tuple[ShortEdgeKey, ShortEdgeKey]], dict[ShortEdgeKey, tuple[int, int]]]:
    """Pair up short edges; keys in ``order`` come first and fix their orbit's orientation."""
    lookup: dict[ShortEdgeKey, tuple[int, int]] = {}
    pairs: list[tuple[ShortEdgeKey, ShortEdgeKey]] = []

    def add(key: ShortEdgeKey) -> None:
        tet, vertex, a, b = key
        face = fourth_vertex(vertex, a, b)
        nbr, _, perm = data.partner(tet, face)
        image = (nbr, perm[vertex], perm[a], perm[b])
        if image == key:
            raise ComplexError(f"Short edge {key} is glued to itself")
        orbit = len(pairs)
        pairs.append((key, image))
        for member in (key, image):
            t, v, x, y = member
            lookup[member] = (orbit, 1)
            lookup[(t, v, y, x)] = (orbit, -1)

    for raw in order:
        if len(raw) != 4:
            raise ComplexError(f"Invalid short edge {tuple(raw)} in the short-edge order")
        tet, vertex, a, b = (int(x) for x in raw)
        corners = {vertex, a, b}
        if not 0 <= tet < data.tetrahedron_count or len(corners & set(range(4))) != 3:
            raise ComplexError(f"Invalid short edge {tuple(raw)} in the short-edge order")
        if (tet, vertex, a, b) in lookup:
            raise ComplexError(f"Short-edge order names the orbit of {tuple(raw)} twice")
        add((tet, vertex, a, b))

    for tet in range(data.tetrahedron_count):
        for vertex in range(4):
            first, second, third = (x for x in range(4) if x != vertex)
            for a, b in ((first, second), (first, third), (second, third)):
                if (tet, vertex, a, b) not in lookup:
                    add((tet, vertex, a, b))
    return pairs, lookup


def _corner_vertex(
    edge_lookup: dict[tuple[int, int], tuple[int, int]], tet: int, v: int, w: int
) -> int:
    cls, sign = edge_lookup[(tet, EDGE_INDEX[(min(v, w), max(v, w))])]
    oriented = sign if v < w else -sign
    return 2 * cls if oriented > 0 else 2 * cls + 1


def build_complex(
    gluing: FacePairingData,
    peripheral: Sequence[PeripheralCurves],
    orientation_signs: Optional[Sequence[int]] = None,
    name: str = "",
    sigma_template: Optional[Sequence[str]] = None,
    short_edge_order: Sequence[ShortEdgeKey] = (),
) -> TruncatedComplex:
    """
    Assemble the truncated complex from face pairings and peripheral curves.

    Args:
        gluing: Face pairings of all tetrahedra.
        peripheral: Meridian and longitude for each cusp, in cusp order.
        orientation_signs: Optional explicit signs; must agree with the gluings up to a global flip.
        name: Human-readable name stored with the complex.
        sigma_template: Optional monomial string per short-edge orbit.
        short_edge_order: Short edges that become orbits 0, 1, ... in this order,
            each in the given orientation; the rest follow in the default order.

    Returns:
        The validated TruncatedComplex.

    Raises:
        ComplexError: On invalid gluings, non-torus cusps or bad peripheral curves.
    """
    gluing.validate()
    orientations = _orientations(gluing, orientation_signs)
    edge_classes, edge_lookup = _edge_classes(gluing)
    pairs, short_lookup = _short_edge_orbits(gluing, short_edge_order)

    # cusps are the connected components of the cut triangles
    parent: dict[Triangle, Triangle] = {}

    def find(tri: Triangle) -> Triangle:
        while parent.setdefault(tri, tri) != tri:
            parent[tri] = parent[parent[tri]]
            tri = parent[tri]
        return tri

    for first, second in pairs:
        root_a, root_b = find(first[:2]), find(second[:2])  # type: ignore[arg-type]
        if root_a != root_b:
            parent[max(root_a, root_b)] = min(root_a, root_b)

    triangles = [(t, v) for t in range(gluing.tetrahedron_count) for v in range(4)]
    components: dict[Triangle, list[Triangle]] = {}
    for tri in triangles:
        components.setdefault(find(tri), []).append(tri)
    ordered = sorted(components.values(), key=lambda tris: tris[0])
    cusp_of_triangle = {tri: j for j, tris in enumerate(ordered) for tri in tris}

    orbits: list[ShortEdgeOrbit] = []
    for index, (first, second) in enumerate(pairs):
        t, v, a, b = first
        tail = _corner_vertex(edge_lookup, t, v, a)
        head = _corner_vertex(edge_lookup, t, v, b)
        t2, v2, a2, b2 = second
        if (tail, head) != (
            _corner_vertex(edge_lookup, t2, v2, a2),
            _corner_vertex(edge_lookup, t2, v2, b2),
        ):
            raise ComplexError(f"Short edge {first} and its partner {second} have different ends")
        orbits.append(ShortEdgeOrbit(index, (first, second), tail, head, cusp_of_triangle[(t, v)]))

    if len(peripheral) != len(ordered):
        raise ComplexError(
            f"Peripheral curves given for {len(peripheral)} cusps "
            f"but the complex has {len(ordered)}"
        )

    cusps: list[Cusp] = []
    for j, tris in enumerate(ordered):
        vertices = sorted(
            {_corner_vertex(edge_lookup, t, v, w) for t, v in tris for w in range(4) if w != v}
        )
        edges = tuple(o.index for o in orbits if o.cusp == j)
        cusp = Cusp(j, tuple(tris), tuple(vertices), edges, peripheral[j])
        chi = cusp.euler_characteristic
        if chi != 0 or (3 * len(tris)) % 2:
            raise ComplexError(f"Cusp link {j} is not a torus (Euler characteristic {chi})")
        cusps.append(cusp)

    template: Optional[tuple[str, ...]] = None
    if sigma_template is not None:
        template = tuple(str(x) for x in sigma_template)
        if len(template) != len(orbits):
            raise ComplexError(
                f"Sigma template has {len(template)} entries for {len(orbits)} short edges"
            )

    complex_ = TruncatedComplex(
        name=name,
        gluing=gluing,
        orientations=orientations,
        edge_classes=edge_classes,
        short_edges=tuple(orbits),
        cusps=tuple(cusps),
        sigma_template=template,
        _edge_lookup=edge_lookup,
        _short_lookup=short_lookup,
    )
    for cusp in complex_.cusps:
        for label, path in (("meridian", cusp.meridian), ("longitude", cusp.longitude)):
            if not path:
                raise ComplexError(f"Empty {label} on cusp {cusp.index}")
            try:
                complex_.validate_path(cusp.index, path)
            except ComplexError as exc:
                raise ComplexError(f"Invalid {label} on cusp {cusp.index}: {exc}") from exc

    logger.debug(
        "Built complex %r: %d tetrahedra, %d edge classes, %d short edges, %d cusps",
        name,
        gluing.tetrahedron_count,
        len(edge_classes),
        len(orbits),
        len(cusps),
    )
    return complex_

"""Tests for the truncated complex, its serialization and cusp paths."""

import json
from dataclasses import replace

import numpy as np
import pytest

from dehn_volume.cocycle import sigma_from_holonomy
from dehn_volume.errors import ComplexError, ConfigError
from dehn_volume.triangulation.census import (
    FIGURE_EIGHT_LONGITUDE,
    FIGURE_EIGHT_MERIDIAN,
    FIGURE_EIGHT_REFERENCE,
    FIGURE_EIGHT_SHORT_EDGES,
    census_figure_eight,
    figure_eight_pairing,
    load_census,
)
from dehn_volume.triangulation.complex import (
    EDGES,
    FaceGluing,
    FacePairingData,
    PeripheralCurves,
    build_complex,
    decode_signed_id,
    encode_signed_id,
    inverse_permutation,
)
from dehn_volume.triangulation.homology import reverse_path, spanning_tree
from dehn_volume.triangulation.io import (
    complex_to_document,
    load_complex,
    read_complex,
    save_complex,
    write_complex,
)
from dehn_volume.triangulation.paths import left_member, normal_path


def _make_fig8():
    complex_, _ = census_figure_eight()
    return complex_


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


class TestSignedIds:
    def test_encode_decode(self):
        assert encode_signed_id(0, 1) == 1
        assert encode_signed_id(4, -1) == -5
        assert decode_signed_id(-5) == (4, -1)
        assert decode_signed_id(12) == (11, 1)

    def test_zero_is_invalid(self):
        with pytest.raises(ComplexError, match="id 0"):
            decode_signed_id(0)

    def test_inverse_permutation(self):
        perm = (2, 0, 1, 3)
        inverse = inverse_permutation(perm)
        assert tuple(inverse[perm[i]] for i in range(4)) == (0, 1, 2, 3)

    def test_edges_are_ordered_pairs(self):
        assert len(EDGES) == 6
        assert all(i < j for i, j in EDGES)


# ---------------------------------------------------------------------------
# Figure-eight structure
# ---------------------------------------------------------------------------


class TestFigureEightComplex:
    def setup_method(self):
        self.complex_ = _make_fig8()

    def test_counts(self):
        assert self.complex_.tetrahedron_count == 2
        assert self.complex_.cusp_count == 1
        assert len(self.complex_.edge_classes) == 2
        assert len(self.complex_.short_edges) == 12

    def test_orientations(self):
        assert self.complex_.orientations == (1, -1)

    def test_every_edge_class_has_six_members(self):
        for cls in self.complex_.edge_classes:
            assert len(cls.members) == 6

    def test_classes_numbered_by_least_member(self):
        assert self.complex_.edge_classes[0].representative == (0, 0)
        assert self.complex_.edge_classes[1].representative == (0, 1)

    def test_edge_class_orientation_flips(self):
        cls, sign = self.complex_.edge_class(0, 0, 1)
        assert self.complex_.edge_class(0, 1, 0) == (cls, -sign)

    def test_degenerate_edge_raises(self):
        with pytest.raises(ComplexError, match="Degenerate edge"):
            self.complex_.edge_class(0, 2, 2)

    def test_cusp_is_a_torus(self):
        cusp = self.complex_.cusps[0]
        assert len(cusp.triangles) == 8
        assert len(cusp.vertices) == 4
        assert len(cusp.edges) == 12
        assert cusp.euler_characteristic == 0

    def test_short_edge_orbits_have_two_members(self):
        for orbit in self.complex_.short_edges:
            assert len(orbit.members) == 2

    def test_short_edge_sign_flips_with_direction(self):
        orbit, sign = self.complex_.short_edge(0, 0, 1, 2)
        assert self.complex_.short_edge(0, 0, 2, 1) == (orbit, -sign)

    def test_unknown_short_edge_raises(self):
        with pytest.raises(ComplexError, match="No short edge"):
            self.complex_.short_edge(0, 0, 0, 1)

    def test_triangle_boundary_closes(self):
        for tet in range(2):
            for vertex in range(4):
                sides = self.complex_.triangle_boundary(tet, vertex)
                self.complex_.validate_path(0, sides)

    def test_peripheral_curves(self):
        cusp = self.complex_.cusps[0]
        assert cusp.meridian == FIGURE_EIGHT_MERIDIAN
        assert cusp.longitude == FIGURE_EIGHT_LONGITUDE

    def test_sigma_template_is_stored(self):
        assert self.complex_.sigma_template is not None
        assert len(self.complex_.sigma_template) == 12

    def test_short_edges_follow_the_classical_labels(self):
        for index, key in enumerate(FIGURE_EIGHT_SHORT_EDGES):
            assert self.complex_.short_edges[index].members[0] == key
            assert self.complex_.short_edge(*key) == (index, 1)

    def test_sigma_labels(self):
        _, template = census_figure_eight()
        assert template[1] == "L^-1*M^-2"
        assert template[2] == "M"
        assert template[3] == "L*M"
        assert self.complex_.sigma_template[0] == "L^-1*M^-2"
        assert self.complex_.sigma_template[2] == "L*M"

    def test_sigma_at_the_published_holonomy(self):
        reference = FIGURE_EIGHT_REFERENCE[(1, 5)]
        m, l = reference.meridian, reference.longitude
        sigma = sigma_from_holonomy(self.complex_, [(m, l)])
        assert abs(sigma.values[0] - 1 / (l * m * m)) < 1e-12
        assert abs(sigma.values[2] - l * m) < 1e-12
        assert abs(sigma.along(FIGURE_EIGHT_MERIDIAN) - m) < 1e-12
        assert abs(sigma.along(FIGURE_EIGHT_LONGITUDE) - l) < 1e-12

    def test_cut_triangles_hold_consecutive_labels(self):
        # s1..s3 at vertex 2, s4..s6 at 0, s7..s9 at 1, s10..s12 at 3 of T0
        for start, vertex in ((0, 2), (3, 0), (6, 1), (9, 3)):
            for index in range(start, start + 3):
                assert self.complex_.short_edges[index].members[0][:2] == (0, vertex)

    def test_structure_is_plain_data(self):
        structure = self.complex_.structure()
        assert structure["name"] == "fig8"
        assert structure["orientations"] == [1, -1]
        assert len(structure["cusps"]) == 1


class TestCensus:
    def test_aliases(self):
        assert load_census("4_1").structure() == load_census("fig8").structure()

    def test_unknown_census(self):
        with pytest.raises(ConfigError, match="Unknown census"):
            load_census("m004_typo")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


class TestValidation:
    def setup_method(self):
        self.pairing = figure_eight_pairing()
        self.peripheral = [PeripheralCurves(FIGURE_EIGHT_MERIDIAN, FIGURE_EIGHT_LONGITUDE)]

    def test_unglued_face(self):
        gluings = [g for g in self.pairing.gluings if (g.tet, g.face) != (1, 3)]
        with pytest.raises(ComplexError, match="Unglued face 3 of tetrahedron 1"):
            build_complex(FacePairingData(2, gluings), self.peripheral)

    def test_wrong_orientation_signs(self):
        with pytest.raises(ComplexError, match="Orientation signs"):
            build_complex(self.pairing, self.peripheral, orientation_signs=[1, 1])

    def test_global_flip_of_orientations_is_accepted(self):
        flipped = build_complex(self.pairing, self.peripheral, orientation_signs=[-1, 1])
        assert flipped.orientations == (-1, 1)

    def test_missing_peripheral_curves(self):
        with pytest.raises(ComplexError):
            build_complex(self.pairing, [])

    def test_empty_meridian(self):
        with pytest.raises(ComplexError, match="Empty meridian"):
            build_complex(self.pairing, [PeripheralCurves((), FIGURE_EIGHT_LONGITUDE)])

    def test_path_on_missing_cusp(self):
        complex_ = _make_fig8()
        with pytest.raises(ComplexError, match="No cusp 1"):
            complex_.validate_path(1, FIGURE_EIGHT_MERIDIAN)

    def test_unknown_short_edge_in_path(self):
        complex_ = _make_fig8()
        with pytest.raises(ComplexError, match="Unknown short edge 99"):
            complex_.validate_path(0, (99,))


# ---------------------------------------------------------------------------
# Homology and spanning trees
# ---------------------------------------------------------------------------


class TestHomology:
    def setup_method(self):
        self.complex_ = _make_fig8()
        self.homology = self.complex_.homology[0]

    def test_peripheral_basis(self):
        assert self.homology.coordinates(FIGURE_EIGHT_MERIDIAN) == (1, 0)
        assert self.homology.coordinates(FIGURE_EIGHT_LONGITUDE) == (0, 1)

    def test_reverse_and_sum(self):
        assert self.homology.coordinates(reverse_path(FIGURE_EIGHT_LONGITUDE)) == (0, -1)
        combined = FIGURE_EIGHT_MERIDIAN * 3 + FIGURE_EIGHT_LONGITUDE
        assert self.homology.coordinates(combined) == (3, 1)

    def test_triangle_is_null_homologous(self):
        assert self.homology.coordinates(self.complex_.triangle_boundary(0, 0)) == (0, 0)

    def test_spanning_tree_covers_vertices(self):
        tree = self.complex_.spanning_trees[0]
        assert len(tree.tree_edges) == len(self.complex_.cusps[0].vertices) - 1
        for vertex in self.complex_.cusps[0].vertices:
            path = tree.path_from_root(vertex)
            self.complex_.validate_path(0, path, closed=False)

    def test_fundamental_cycles_are_closed(self):
        tree = self.complex_.spanning_trees[0]
        for orbit in self.complex_.cusps[0].edges:
            if orbit in tree.tree_edges:
                continue
            self.complex_.validate_path(0, tree.fundamental_cycle(self.complex_, orbit))

    def test_random_trees_are_trees(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            tree = spanning_tree(self.complex_, 0, rng)
            assert len(tree.tree_edges) == 3


# ---------------------------------------------------------------------------
# Short-edge numbering and corrupted gluings
# ---------------------------------------------------------------------------


class TestShortEdgeOrder:
    def setup_method(self):
        self.peripheral = [PeripheralCurves(FIGURE_EIGHT_MERIDIAN, FIGURE_EIGHT_LONGITUDE)]

    def test_default_order_without_keys(self):
        # same curves in the default numbering
        complex_ = build_complex(figure_eight_pairing(), [PeripheralCurves((7,), (9, 1, -5, 10))])
        assert complex_.short_edges[0].members[0] == (0, 0, 1, 2)
        assert complex_.short_edges[6].members[0] == FIGURE_EIGHT_SHORT_EDGES[1]

    def test_key_fixes_the_orientation(self):
        complex_ = build_complex(
            figure_eight_pairing(), self.peripheral, short_edge_order=FIGURE_EIGHT_SHORT_EDGES
        )
        # s5 runs against the default orientation of its orbit
        assert complex_.short_edges[4].members[0] == (0, 0, 2, 1)
        assert complex_.short_edge(0, 0, 1, 2) == (4, -1)

    def test_partial_order_is_completed(self):
        complex_ = build_complex(
            figure_eight_pairing(),
            [PeripheralCurves((2,), (9, 3, -7, 10))],
            short_edge_order=FIGURE_EIGHT_SHORT_EDGES[:2],
        )
        assert len(complex_.short_edges) == 12
        assert complex_.short_edges[1].members[0] == FIGURE_EIGHT_SHORT_EDGES[1]
        assert complex_.short_edges[2].members[0] == (0, 0, 1, 2)

    def test_orbit_named_twice(self):
        # (1, 0, 3, 2) is the partner of (0, 0, 1, 2), reversed
        with pytest.raises(ComplexError, match="twice"):
            build_complex(
                figure_eight_pairing(),
                self.peripheral,
                short_edge_order=[(0, 0, 1, 2), (1, 0, 3, 2)],
            )

    @pytest.mark.parametrize("key", [(2, 0, 1, 2), (0, 0, 0, 1), (0, 0, 1, 4), (0, 1, 2)])
    def test_invalid_key(self, key):
        with pytest.raises(ComplexError, match="Invalid short edge"):
            build_complex(figure_eight_pairing(), self.peripheral, short_edge_order=[key])


class TestCorruptedGluing:
    def _corrupt(self, perm, both_sides):
        data = figure_eight_pairing()
        gluings = []
        for gluing in data.gluings:
            if (gluing.tet, gluing.face) == (0, 0):
                gluing = replace(gluing, perm=perm)
            elif both_sides and (gluing.tet, gluing.face) == (1, 2):
                gluing = replace(gluing, perm=inverse_permutation(perm))
            gluings.append(gluing)
        return FacePairingData(data.tetrahedron_count, gluings)

    def test_one_sided_change_is_not_involutive(self):
        data = self._corrupt((2, 1, 0, 3), both_sides=False)
        with pytest.raises(ComplexError, match="not involutive"):
            data.validate()

    def test_odd_face_map_breaks_the_vertex_order(self):
        data = self._corrupt((2, 1, 0, 3), both_sides=True)
        with pytest.raises(ComplexError, match="disagree"):
            data.validate()
        with pytest.raises(ComplexError):
            build_complex(data, [PeripheralCurves(FIGURE_EIGHT_MERIDIAN, FIGURE_EIGHT_LONGITUDE)])

    def test_swapped_partners_leave_a_sphere_link(self):
        # T0 faces 0 and 2 glued straight across: consistent gluings, wrong links
        gluings = []
        for tet, face, nbr, nbr_face, perm in (
            (0, 0, 1, 0, (0, 1, 2, 3)),
            (0, 1, 1, 3, (0, 3, 1, 2)),
            (0, 2, 1, 2, (0, 1, 2, 3)),
            (0, 3, 1, 1, (0, 2, 3, 1)),
        ):
            gluings.append(FaceGluing(tet, face, nbr, nbr_face, perm))
            gluings.append(FaceGluing(nbr, nbr_face, tet, face, inverse_permutation(perm)))
        data = FacePairingData(2, sorted(gluings, key=lambda g: (g.tet, g.face)))
        data.validate()
        curves = PeripheralCurves((1,), (1,))
        with pytest.raises(ComplexError, match="not a torus"):
            build_complex(data, [curves, curves])

    def test_face_not_mapped_onto_its_partner(self):
        data = self._corrupt((0, 1, 2, 3), both_sides=True)
        with pytest.raises(ComplexError, match="does not map the face"):
            data.validate()


# ---------------------------------------------------------------------------
# Normal paths
# ---------------------------------------------------------------------------


class TestNormalPaths:
    def setup_method(self):
        self.complex_ = _make_fig8()

    def test_left_member_is_one_of_the_copies(self):
        for orbit in self.complex_.short_edges:
            key = left_member(self.complex_, orbit.index + 1)
            assert key in orbit.members

    def test_meridian_passes_one_left_corner_per_edge(self):
        passes = normal_path(self.complex_, FIGURE_EIGHT_MERIDIAN)
        assert sum(1 for p in passes if p.side > 0) == len(FIGURE_EIGHT_MERIDIAN)

    def test_longitude_passes(self):
        passes = normal_path(self.complex_, FIGURE_EIGHT_LONGITUDE)
        assert sum(1 for p in passes if p.side > 0) == 4
        assert all(p.corner != p.vertex for p in passes)

    def test_backtracking_path_is_not_normal(self):
        with pytest.raises(ComplexError, match="not normal"):
            normal_path(self.complex_, (7, -7))

    def test_open_path_is_rejected(self):
        edge = next(e for e in self.complex_.short_edges if e.tail != e.head)
        with pytest.raises(ComplexError, match="not closed"):
            normal_path(self.complex_, (edge.index + 1,))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


class TestSerialization:
    def setup_method(self):
        self.complex_ = _make_fig8()

    def test_document_round_trip_preserves_structure(self):
        loaded = load_complex(save_complex(self.complex_))
        assert loaded.structure() == self.complex_.structure()

    def test_file_round_trip(self, tmp_path):
        path = write_complex(self.complex_, tmp_path / "fig8.json")
        assert read_complex(path).structure() == self.complex_.structure()

    def test_round_trip_keeps_the_short_edge_labels(self):
        document = complex_to_document(self.complex_)
        assert document["short_edges"][0] == {"id": 1, "key": list(FIGURE_EIGHT_SHORT_EDGES[0])}
        loaded = load_complex(json.dumps(document))
        for index, key in enumerate(FIGURE_EIGHT_SHORT_EDGES):
            assert loaded.short_edge(*key) == (index, 1)
        assert loaded.sigma_template == self.complex_.sigma_template

    def test_wrong_version(self):
        document = complex_to_document(self.complex_)
        document["format_version"] = 99
        with pytest.raises(ComplexError, match="format version 99"):
            load_complex(json.dumps(document))

    def test_missing_key(self):
        document = complex_to_document(self.complex_)
        del document["face_gluings"]
        with pytest.raises(ComplexError, match="missing 'face_gluings'"):
            load_complex(json.dumps(document))

    def test_inconsistent_edge_classes(self):
        document = complex_to_document(self.complex_)
        document["edge_classes"][0]["members"] = document["edge_classes"][1]["members"]
        with pytest.raises(ComplexError, match="does not match"):
            load_complex(json.dumps(document))

    def test_not_json(self):
        with pytest.raises(ComplexError, match="Malformed"):
            load_complex(b"{not json")

"""Tests for flattenings and the edge, cusp and Dehn filling conditions."""

from types import SimpleNamespace

import numpy as np
import pytest
import sympy

from dehn_volume.cocycle import (
    CuspLog,
    LogCocycle,
    PeripheralLog,
    act_tau,
    lift_log_cocycle,
    peripheral_of,
    principal_log,
    select_b,
    sigma_from_holonomy,
)
from dehn_volume.cocycle.cocycle import PI_I
from dehn_volume.dilog import PI_SQUARED, psi, psi_difference
from dehn_volume.errors import NumericalError
from dehn_volume.flattening import (
    build_flattenings,
    cusp_condition_check,
    dehn_filling_check,
    edge_condition_check,
    edge_sums,
    psi_independence_test,
    random_lift,
)
from dehn_volume.peripheral import FillingVector, select_geometric, solve_filling
from dehn_volume.peripheral.apoly import L, M, a_polynomial
from dehn_volume.pipeline import perturb
from dehn_volume.ptolemy.shapes import cross_ratios, gluing_check
from dehn_volume.ptolemy.solver import SolverSettings, solve
from dehn_volume.ptolemy.system import build_system
from dehn_volume.triangulation.census import (
    FIGURE_EIGHT_REFERENCE,
    FIGURE_EIGHT_VOLUME,
    census_figure_eight,
)

# every row of the reference table has winding k = -2
FAST_K_RANGE = (-3, -1)


@pytest.fixture(scope="module")
def one_five():
    """Geometric 1/5 filling of the figure-eight with (u, v) = (4, 0)."""
    complex_, _ = census_figure_eight()
    selected = select_geometric(solve_filling(complex_, FillingVector.parse("1/5"), (-2, -2)))
    b = select_b(selected.sigma, [(1, 5)], overrides={0: (4, 0)})
    a = lift_log_cocycle(selected.sigma, b, complex_)
    return SimpleNamespace(
        complex_=complex_,
        c=selected.assignment,
        sigma=selected.sigma,
        b=b,
        a=a,
        flattenings=build_flattenings(selected.assignment, a, selected.sigma, complex_),
    )


@pytest.fixture(scope="module")
def complete():
    """Complete structure of the figure-eight with the parabolic log-data."""
    complex_, _ = census_figure_eight()
    sigma = sigma_from_holonomy(complex_, [(1, -1)])
    b = select_b(sigma, [None])
    a = lift_log_cocycle(sigma, b, complex_)
    points = solve(build_system(complex_, sigma))
    candidates = [build_flattenings(c, a, sigma, complex_) for c in points]
    return SimpleNamespace(
        complex_=complex_,
        sigma=sigma,
        b=b,
        a=a,
        flattenings=max(candidates, key=lambda f: psi(f).imag),
    )


def _make_curve_points(complex_, count, seed):
    """(M, L) on the eliminant curve: random M near 1, both roots in L."""
    polynomial = a_polynomial(complex_)
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        m = complex(1 + rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2))
        in_l = sympy.Poly(polynomial.subs(M, m), L)
        for root in np.roots([complex(x) for x in in_l.all_coeffs()]):
            points.append((m, complex(root)))
    return points[:count]


@pytest.fixture(scope="module")
def curve_sweep():
    """Every non-degenerate Ptolemy point over 100 seeded curve points, b = principal logs."""
    complex_, _ = census_figure_eight()
    entries = []
    for m, l in _make_curve_points(complex_, 100, seed=21):
        sigma = sigma_from_holonomy(complex_, [(m, l)])
        b = PeripheralLog((CuspLog(principal_log(m), principal_log(l), 0, 0),))
        a = lift_log_cocycle(sigma, b, complex_)
        for c in solve(build_system(complex_, sigma), SolverSettings(starts=16)):
            shapes = cross_ratios(c, sigma, complex_, allow_degenerate=True)
            if any(s.degenerate for s in shapes):
                continue
            entries.append(
                SimpleNamespace(
                    point=(m, l),
                    c=c,
                    sigma=sigma,
                    a=a,
                    shapes=shapes,
                    flattenings=build_flattenings(c, a, sigma, complex_),
                )
            )
    return SimpleNamespace(complex_=complex_, entries=entries)


# ---------------------------------------------------------------------------
# Flattenings
# ---------------------------------------------------------------------------


class TestFlattenings:
    def test_one_per_tetrahedron(self, one_five):
        assert len(one_five.flattenings) == 2
        assert [t.epsilon for t in one_five.flattenings] == [1, -1]

    def test_log_parameters_sum_to_zero(self, one_five):
        assert one_five.flattenings.max_sum < 1e-10

    def test_branches_are_integral(self, one_five):
        assert one_five.flattenings.max_branch_residual < 1e-6

    def test_to_dict(self, one_five):
        data = one_five.flattenings.tetrahedra[0].to_dict()
        assert set(data) == {"tet", "z", "p", "q", "epsilon"}
        assert isinstance(data["p"], int)

    def test_perturbed_lift_is_detected(self, one_five):
        shifted = perturb(one_five.a, 0.5)
        flattenings = build_flattenings(
            one_five.c, shifted, one_five.sigma, one_five.complex_, strict=False
        )
        assert (
            flattenings.max_branch_residual > 1e-6
            or edge_condition_check(flattenings, one_five.complex_) > 1e-6
        )

    def test_strict_rejects_a_non_integral_branch(self, one_five):
        for multiple in (0.5, 0.25, 0.125):
            shifted = perturb(one_five.a, multiple)
            flattenings = build_flattenings(
                one_five.c, shifted, one_five.sigma, one_five.complex_, strict=False
            )
            if flattenings.max_branch_residual > 1e-3:
                with pytest.raises(NumericalError, match="not an integer"):
                    build_flattenings(one_five.c, shifted, one_five.sigma, one_five.complex_)
                return
        pytest.fail("no perturbation moved a branch off the integers")


# ---------------------------------------------------------------------------
# Conditions
# ---------------------------------------------------------------------------


class TestConditions:
    def test_edge_sums_vanish(self, one_five):
        sums = edge_sums(one_five.flattenings, one_five.complex_)
        assert len(sums) == 2
        assert edge_condition_check(one_five.flattenings, one_five.complex_) < 1e-10

    def test_cusp_condition(self, one_five):
        cusp = one_five.complex_.cusps[0]
        for path in (cusp.meridian, cusp.longitude):
            residual = cusp_condition_check(
                one_five.flattenings, one_five.a, one_five.complex_, 0, path
            )
            assert abs(residual) < 1e-9

    def test_dehn_filling_condition(self, one_five):
        (residual,) = dehn_filling_check(one_five.flattenings, one_five.complex_, [(1, 5)])
        assert residual < 1e-9

    def test_wrong_slope_fails_the_filling_condition(self, one_five):
        (residual,) = dehn_filling_check(one_five.flattenings, one_five.complex_, [(2, 5)])
        assert residual > 1e-3

    def test_unfilled_conditions(self, complete):
        assert edge_condition_check(complete.flattenings, complete.complex_) < 1e-10
        (residual,) = dehn_filling_check(complete.flattenings, complete.complex_, [None])
        assert residual < 1e-9


class TestCurveSweep:
    def test_covers_a_hundred_points(self, curve_sweep):
        assert len({entry.point for entry in curve_sweep.entries}) >= 95

    def test_ptolemy_and_gluing(self, curve_sweep):
        for entry in curve_sweep.entries:
            assert entry.c.residual < 1e-12, entry.point
            assert gluing_check(entry.shapes, curve_sweep.complex_) < 1e-10, entry.point

    def test_flattenings(self, curve_sweep):
        for entry in curve_sweep.entries:
            assert entry.flattenings.max_sum < 1e-10, entry.point
            assert entry.flattenings.max_branch_residual < 1e-6, entry.point

    def test_edge_condition(self, curve_sweep):
        for entry in curve_sweep.entries:
            assert edge_condition_check(entry.flattenings, curve_sweep.complex_) < 1e-9

    def test_cusp_condition(self, curve_sweep):
        cusp = curve_sweep.complex_.cusps[0]
        for entry in curve_sweep.entries:
            for path in (cusp.meridian, cusp.longitude):
                residual = cusp_condition_check(
                    entry.flattenings, entry.a, curve_sweep.complex_, 0, path
                )
                assert abs(residual) < 1e-9, entry.point


# ---------------------------------------------------------------------------
# Psi
# ---------------------------------------------------------------------------


class TestPsi:
    def test_complete_volume(self, complete):
        assert psi(complete.flattenings).imag == pytest.approx(FIGURE_EIGHT_VOLUME, abs=1e-9)

    def test_filled_volume_is_below_the_cusped_one(self, one_five):
        value = psi(one_five.flattenings).imag
        assert 1.9 < value < FIGURE_EIGHT_VOLUME

    def test_random_lifts_give_the_same_psi(self, one_five):
        rng = np.random.default_rng(11)
        base = psi(one_five.flattenings)
        for _ in range(4):
            a = random_lift(one_five.sigma, one_five.b, one_five.complex_, rng)
            flattenings = build_flattenings(one_five.c, a, one_five.sigma, one_five.complex_)
            assert psi_difference(psi(flattenings), base) < 1e-8

    def test_independence_test(self, one_five):
        result = psi_independence_test(
            one_five.c, one_five.sigma, one_five.b, one_five.complex_, trials=5, seed=1
        )
        assert len(result.values) == 5
        assert result.spread < 1e-8
        assert result.to_dict()["trials"] == 5

    def test_other_log_data_agrees_mod_half_pi_squared(self, one_five):
        b = select_b(one_five.sigma, [(1, 5)])
        assert b.uv == ((-1, 1),)
        a = lift_log_cocycle(one_five.sigma, b, one_five.complex_)
        value = psi(build_flattenings(one_five.c, a, one_five.sigma, one_five.complex_))
        assert psi_difference(value, psi(one_five.flattenings), PI_SQUARED / 2) < 1e-8

    def test_gauge_leaves_psi_unchanged(self, one_five):
        rng = np.random.default_rng(17)
        complex_ = one_five.complex_
        base = psi(one_five.flattenings)
        for _ in range(5):
            tau = {
                v: complex(rng.uniform(0.3, 3), rng.uniform(-2, 2))
                for v in complex_.cusps[0].vertices
            }
            theta = {v: principal_log(t) for v, t in tau.items()}
            c = act_tau(one_five.c, complex_, tau)
            a = act_tau(one_five.a, complex_, theta)
            flattenings = build_flattenings(c, a, c.sigma, complex_)
            assert edge_condition_check(flattenings, complex_) < 1e-9
            assert psi_difference(psi(flattenings), base) < 1e-8

    @pytest.mark.parametrize("slope", [(1, 5), (2, 5), (3, 5), (4, 5)])
    def test_independence_across_fillings(self, slope):
        complex_, _ = census_figure_eight()
        filling = FillingVector.parse(f"{slope[0]}/{slope[1]}")
        selected = select_geometric(solve_filling(complex_, filling, FAST_K_RANGE))
        reference = FIGURE_EIGHT_REFERENCE[slope]
        b = select_b(selected.sigma, [slope], overrides={0: reference.uv})
        result = psi_independence_test(
            selected.assignment, selected.sigma, b, complex_, trials=6, seed=3
        )
        assert result.spread < 1e-8
        assert psi_difference(result.values[0], reference.psi) < 1e-7


# ---------------------------------------------------------------------------
# Explicit log-cocycle
# ---------------------------------------------------------------------------


class TestExplicitAssignment:
    """a(e) = m_e b(mu) + l_e b(lambda) for sigma(e) = M^m_e L^l_e, on the 1/5 filling."""

    def _make_assignment(self, one_five):
        entry = one_five.b.cusps[0]
        return LogCocycle(
            tuple(
                m.meridian[0] * entry.meridian + m.longitude[0] * entry.longitude
                for m in one_five.sigma.monomials
            )
        )

    def test_is_a_lift_of_sigma(self, one_five):
        a = self._make_assignment(one_five)
        assert max(a.triangle_defects(one_five.complex_)) < 1e-12
        assert max(a.congruence_residues(one_five.sigma)) < 1e-9
        assert peripheral_of(a, one_five.sigma, one_five.complex_).uv == ((4, 0),)

    def test_flattenings_follow_the_closed_formulas(self, one_five):
        complex_ = one_five.complex_
        a = self._make_assignment(one_five)
        flattenings = build_flattenings(one_five.c, a, one_five.sigma, complex_)
        entry = one_five.b.cusps[0]
        b_mu, b_lambda = entry.meridian, entry.longitude
        log_c0, log_c1 = (principal_log(v) for v in one_five.c.values)
        z1, z2 = flattenings.tetrahedra[0].z, flattenings.tetrahedra[1].z
        expected = [
            b_lambda + 4 * b_mu + 2 * log_c1 - 2 * log_c0 - principal_log(z1),
            -b_lambda - 2 * b_mu - log_c1 + log_c0 + principal_log(1 - z1),
            -b_lambda + 2 * log_c0 - 2 * log_c1 - principal_log(z2),
            b_lambda + log_c1 - log_c0 + principal_log(1 - z2),
        ]
        got = [
            flattenings.tetrahedra[0].p,
            flattenings.tetrahedra[0].q,
            flattenings.tetrahedra[1].p,
            flattenings.tetrahedra[1].q,
        ]
        for value, integer in zip(expected, got):
            ratio = value / PI_I
            assert abs(ratio - integer) < 1e-9

    def test_psi_matches_the_reference(self, one_five):
        a = self._make_assignment(one_five)
        flattenings = build_flattenings(one_five.c, a, one_five.sigma, one_five.complex_)
        assert edge_condition_check(flattenings, one_five.complex_) < 1e-9
        (residual,) = dehn_filling_check(flattenings, one_five.complex_, [(1, 5)])
        assert residual < 1e-9
        reference = FIGURE_EIGHT_REFERENCE[(1, 5)]
        assert psi_difference(psi(flattenings), reference.psi) < 1e-7

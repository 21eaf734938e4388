import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad
from scipy.optimize import bisect

from zswkb import decompose, make_potential
from zswkb.liouville import (
    balance_bound_l1,
    balance_bound_l2,
    build_chart,
    error_term,
    omega,
    variation,
    x_of_zeta,
    zeta_of_x,
)


@pytest.fixture(scope="module")
def sech():
    return make_potential("sech-scaled", {"amplitudes": [1.0]})


@pytest.fixture(scope="module")
def sech_chart(sech):
    return build_chart(decompose(sech, 0.5), ("barrier", 0), sech)


@pytest.fixture(scope="module")
def two_hump():
    return make_potential("lorentzian-sum", {"amplitudes": [1.0, 2.0], "centers": [-5.0, 5.0], "widths": [1.0, 1.0]})


def quad_sqrt(F, a, b):
    """Independent oracle: integral sqrt(|F|) with edge substitution, via scipy."""
    mid = 0.5 * (a + b)
    left = quad(lambda t: 2.0 * t * math.sqrt(abs(F(a + t * t))), 0.0, math.sqrt(mid - a), limit=300)[0]
    right = quad(lambda t: 2.0 * t * math.sqrt(abs(F(b - t * t))), 0.0, math.sqrt(b - mid), limit=300)[0]
    return left + right


class TestBuildChart:
    def test_sech_alpha_closed_form(self, sech_chart):
        # integral sqrt(sech^2 - mu^2) over the barrier is pi (1 - mu)
        assert_allclose(sech_chart.gamma, 1.0, atol=1e-10)

    def test_sech_alpha_other_levels(self, sech):
        for mu in (0.25, 0.7):
            ch = build_chart(decompose(sech, mu), ("barrier", 0), sech)
            assert_allclose(ch.gamma, math.sqrt(2.0 * (1.0 - mu)), atol=1e-10)

    def test_critical_branch(self, sech):
        ch = build_chart(decompose(sech, 1.0), ("barrier", 0), sech)
        assert ch.critical
        assert ch.gamma == 0.0

    def test_lorentzian_alpha_vs_quadrature(self):
        spec = make_potential("lorentzian-sum", {"amplitudes": [1.0]})
        mu = 0.5
        d = decompose(spec, mu)
        ch = build_chart(d, ("barrier", 0), spec)
        ref = quad_sqrt(lambda x: spec(x) ** 2 - mu * mu, d.roots[0], d.roots[1])
        assert_allclose(ch.gamma**2, 2.0 * ref / math.pi, rtol=1e-9)

    def test_well_beta_vs_quadrature(self, two_hump):
        mu = 0.5
        d = decompose(two_hump, mu)
        ch = build_chart(d, ("well", 1), two_hump)
        assert ch.kind == "well"
        lo, hi = d.wells[1]
        ref = quad_sqrt(lambda x: mu * mu - np.asarray(two_hump(x)) ** 2, lo, hi)
        assert_allclose(ch.gamma**2, 2.0 * ref / math.pi, rtol=1e-9)

    def test_alpha_decreasing_beta_increasing(self, sech, two_hump):
        mus = np.linspace(0.3, 0.8, 6)
        alphas = [build_chart(decompose(sech, m), ("barrier", 0), sech).gamma for m in mus]
        assert np.all(np.diff(alphas) < 0)
        betas = [build_chart(decompose(two_hump, m), ("well", 1), two_hump).gamma for m in mus]
        assert np.all(np.diff(betas) > 0)

    def test_infinite_well_delegates_to_barrier(self, sech):
        d = decompose(sech, 0.5)
        ch = build_chart(d, ("well", 0), sech)
        assert ch.kind == "barrier"

    def test_action_alpha_identity(self, two_hump):
        # Phi_l = (pi/2) alpha_l^2 against the independent quadrature
        mu = 0.63
        d = decompose(two_hump, mu)
        for i, (lo, hi) in enumerate(d.barriers):
            ch = build_chart(d, ("barrier", i), two_hump)
            phi = quad_sqrt(lambda x: np.asarray(two_hump(x)) ** 2 - mu * mu, lo, hi)
            assert abs(0.5 * math.pi * ch.gamma**2 - phi) < 1e-10


class TestMap:
    def test_turning_point_anchoring(self, sech_chart):
        d = decompose(sech_chart.spec, 0.5)
        assert abs(zeta_of_x(sech_chart, d.roots[0]) + sech_chart.gamma) < 1e-8
        assert abs(zeta_of_x(sech_chart, d.roots[1]) - sech_chart.gamma) < 1e-8

    def test_symmetry_center(self, sech_chart):
        assert abs(zeta_of_x(sech_chart, 0.0)) < 1e-10

    def test_asymmetric_barrier_max_zeta(self):
        # zeta at the barrier top solves the center relation; bisect the
        # closed form against an independent quadrature of the action
        spec = make_potential(
            "lorentzian-sum", {"amplitudes": [1.0, 0.6], "centers": [-0.8, 1.1], "widths": [1.0, 1.3]}
        )
        mu = 0.55
        d = decompose(spec, mu)
        ch = build_chart(d, ("barrier", 0), spec)
        b_top = d.barrier_tops[0][0]
        act = quad_sqrt(lambda x: np.asarray(spec(x)) ** 2 - mu * mu, d.roots[0], b_top) - quad(
            lambda x: math.sqrt(abs(spec(x) ** 2 - mu * mu)), b_top, b_top
        )[0]
        g = ch.gamma

        def center_rel(z):
            return 0.5 * g * g * math.acos(-z / g) + 0.5 * z * math.sqrt(g * g - z * z) - act

        z_ref = bisect(center_rel, -g, g, xtol=1e-12)
        assert abs(zeta_of_x(ch, b_top) - z_ref) < 1e-7

    def test_roundtrip(self, sech_chart):
        for z in np.linspace(-4.0, 6.0, 31):
            x = x_of_zeta(sech_chart, z)
            assert abs(zeta_of_x(sech_chart, x) - z) < 1e-8

    def test_monotone_random_orderings(self, sech_chart):
        rng = np.random.default_rng(5)
        zs = rng.uniform(-5.0, 8.0, size=1000)
        xs = np.array([x_of_zeta(sech_chart, z) for z in zs])
        order = np.argsort(zs)
        assert np.all(np.diff(xs[order]) > 0)

    def test_anchoring_random_potentials(self):
        rng = np.random.default_rng(42)
        pairs = 0
        while pairs < 50:
            amps = rng.uniform(0.5, 2.0, size=rng.integers(1, 3))
            cens = np.sort(rng.uniform(-4.0, 4.0, size=len(amps)))
            spec = make_potential(
                "lorentzian-sum",
                {"amplitudes": amps.tolist(), "centers": cens.tolist(), "widths": np.full(len(amps), 1.0).tolist()},
            )
            mu = rng.uniform(0.3, 0.95) * spec.amax
            d = decompose(spec, mu)
            if d.critical or not d.barriers:
                continue
            i = int(rng.integers(0, len(d.barriers)))
            ch = build_chart(d, ("barrier", i), spec)
            lo, hi = d.barriers[i]
            assert abs(zeta_of_x(ch, lo) + ch.gamma) < 1e-8
            assert abs(zeta_of_x(ch, hi) - ch.gamma) < 1e-8
            pairs += 1

    def test_large_zeta_growth(self, sech_chart):
        # x(zeta) ~ zeta^2 / (2 mu) up to a log-sized correction
        mu = sech_chart.mu
        errs = []
        for z in (20.0, 100.0):
            x = x_of_zeta(sech_chart, z)
            errs.append(abs(x * 2.0 * mu / (z * z) - 1.0))
        assert errs[0] < 25.0 * math.log(20.0) / 400.0
        assert errs[1] < 25.0 * math.log(100.0) / 10000.0
        assert errs[1] < errs[0]

    def test_domain_errors(self, sech_chart, two_hump):
        d = decompose(two_hump, 0.5)
        ch = build_chart(d, ("well", 1), two_hump)
        with pytest.raises(ValueError):
            zeta_of_x(ch, 100.0)
        with pytest.raises(ValueError):
            x_of_zeta(ch, ch.zeta_bounds[1] + 1.0)


class TestErrorTerm:
    def test_dual_formula_at_center(self, sech_chart):
        # oracle: psi = xdot^2 g + xdot^{1/2} (d^2/dzeta^2) xdot^{-1/2} with
        # the map differentiated by central finite differences
        ch = sech_chart
        h = 1e-2

        def xdot(z):
            vals = [ch.x_of_zeta(z + k * h) for k in (-2, -1, 1, 2)]
            return (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12.0 * h)

        z0 = 0.0
        x0 = ch.x_of_zeta(z0)
        w = [xdot(z0 + k * h) ** -0.5 for k in (-2, -1, 0, 1, 2)]
        d2 = (-w[0] + 16 * w[1] - 30 * w[2] + 16 * w[3] - w[4]) / (12.0 * h * h)
        psi_def = xdot(z0) ** 2 * ch._g(x0) + (xdot(z0) ** 0.5) * d2
        direct = ch.error_term(z0).psi
        assert abs(psi_def - direct) < 1e-6

    def test_bounded_and_continuous_at_turning_point(self, sech_chart):
        tp = sech_chart._tp_data("hi")
        limit = tp.psi_reg(0.0)
        # one-sided Richardson from the direct-formula side
        hs = np.array([4e-3, 2e-3, 1e-3])
        vals = np.array([sech_chart.error_term(1.0 + h).psi for h in hs])
        extrap = vals[2] + (vals[2] - vals[1])  # first-order step-halving
        assert abs(extrap - limit) < 1e-3
        near = sech_chart.error_term(1.0 - 1e-3).psi
        assert abs(near - limit) < 1e-3

    def test_seam_consistency(self, sech_chart):
        tp = sech_chart._tp_data("hi")
        for frac in (0.99, 1.01):
            e = tp.e_near * frac
            x = tp.x0 + e
            z = sech_chart.zeta_of_x(x)
            s = sech_chart.error_term(z)
            other = sech_chart.psi_direct(x, z) if s.regularized else tp.psi_reg(e)
            assert abs(s.psi - other) < 5e-6

    def test_laurent_cancellation_scale(self, sech_chart):
        for which in ("lo", "hi"):
            assert sech_chart._tp_data(which).drop_scale < 1e-10

    def test_critical_value_finite(self, sech):
        ch = build_chart(decompose(sech, 1.0), ("barrier", 0), sech)
        val = ch.error_term(1e-8).psi
        assert math.isfinite(val)
        # for sech at the critical level the limit is 0 (checked analytically)
        assert abs(val) < 1e-8

    def test_outside_bounds_raises(self, two_hump):
        d = decompose(two_hump, 0.5)
        ch = build_chart(d, ("well", 1), two_hump)
        with pytest.raises(ValueError):
            ch.error_term(ch.zeta_bounds[1] + 0.5)


class TestVariationAndBounds:
    def test_omega_values(self):
        assert omega(0.0) == 1.0
        assert omega(8.0) == 3.0

    def test_variation_nonnegative_and_monotone(self, sech_chart):
        v1 = variation(sech_chart, 0.1, 0.0, 1.5)
        v2 = variation(sech_chart, 0.1, 0.0, 3.0)
        assert 0.0 <= v1 <= v2

    def test_variation_hbar_scaling(self, sech_chart):
        v1 = variation(sech_chart, 0.1, 0.0, math.inf)
        v2 = variation(sech_chart, 0.1 / 64.0, 0.0, math.inf)
        assert abs(v1 / v2 - 2.0) < 0.6

    def test_l1_finite_at_zero(self):
        val = balance_bound_l1(0.0)
        assert 0.0 < val < 10.0

    def test_l1_order_one_for_large_negative_c(self):
        vals = [balance_bound_l1(c) for c in (-5.0, -20.0, -40.0)]
        assert max(vals) < 10.0

    def test_l2_finite(self):
        assert 0.0 < balance_bound_l2(0.0) < 10.0
        assert 0.0 < balance_bound_l2(12.0) < 10.0

    def test_bound_domain_errors(self):
        with pytest.raises(ValueError):
            balance_bound_l1(1.0)
        with pytest.raises(ValueError):
            balance_bound_l2(-1.0)


def test_dump_rows(sech_chart):
    rows = sech_chart.dump_rows(50)
    assert len(rows) == 50
    xs = [r[0] for r in rows]
    assert all(b > a for a, b in zip(xs[:-1], xs[1:]))

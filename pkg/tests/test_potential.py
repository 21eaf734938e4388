import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from zswkb import (
    decompose,
    eval_with_derivatives,
    load_potential,
    make_potential,
    validate_assumptions,
)


@pytest.fixture(scope="module")
def sech():
    return make_potential("sech-scaled", {"amplitudes": [1.0]})


@pytest.fixture(scope="module")
def two_hump():
    return make_potential("lorentzian-sum", {"amplitudes": [1.0, 2.0], "centers": [-5.0, 5.0], "widths": [1.0, 1.0]})


def test_eval_lorentzian_sum_direct_arithmetic():
    spec = make_potential(
        "lorentzian-sum",
        {"amplitudes": [0.8, 1.0, 2.0], "centers": [-5.0, -1.0, 5.0], "widths": [1.0, 1.0, 1.0]},
    )
    a, d1, d2 = eval_with_derivatives(spec, 5.0)
    assert_allclose(a, 2.0 + 1.0 / 37.0 + 0.8 / 101.0, rtol=1e-14)


def test_eval_sech_maximum(sech):
    a, d1, d2 = eval_with_derivatives(sech, 0.0)
    assert_allclose([a, d1, d2], [1.0, 0.0, -1.0], atol=1e-14)


def test_eval_sech_half_height(sech):
    x = np.arccosh(2.0)
    assert_allclose(float(sech(x)), 0.5, rtol=1e-14)


def test_derivatives_match_finite_differences():
    specs = [
        make_potential("sech-scaled", {"amplitudes": [1.3], "centers": [0.7], "widths": [1.4]}),
        make_potential("lorentzian-sum", {"amplitudes": [1.0, 2.0], "centers": [-5.0, 5.0], "widths": [1.0, 1.5]}),
        make_potential("rational-decay", {"amplitudes": [1.1], "powers": [2.0]}),
        make_potential("exponential-decay", {"amplitudes": [0.9], "widths": [2.0]}),
    ]
    xs = np.linspace(-20.0, 20.0, 81)
    h = 1e-5
    for spec in specs:
        a, d1, d2, d3, d4 = spec.eval(xs, order=4)
        fd1 = (spec(xs + h) - spec(xs - h)) / (2 * h)
        h2 = 1e-4
        fd2 = (spec(xs + h2) - 2 * a + spec(xs - h2)) / h2**2
        assert_allclose(d1, fd1, rtol=1e-6, atol=1e-9)
        assert_allclose(d2, fd2, rtol=1e-5, atol=1e-7)
        # third/fourth derivatives against differences of the analytic lower orders
        _, e1p, e2p = spec.eval(xs + h, order=2)
        _, e1m, e2m = spec.eval(xs - h, order=2)
        assert_allclose(d3, (e2p - e2m) / (2 * h), rtol=1e-6, atol=1e-8)
        _, _, _, e3p = spec.eval(xs + h, order=3)
        _, _, _, e3m = spec.eval(xs - h, order=3)
        assert_allclose(d4, (e3p - e3m) / (2 * h), rtol=1e-6, atol=1e-8)


def test_eval_rejects_nonfinite(sech):
    with pytest.raises(ValueError):
        sech.eval(np.nan)


def test_decompose_single_lorentzian_exact():
    spec = make_potential("lorentzian-sum", {"amplitudes": [1.0]})
    d = decompose(spec, 0.5)
    assert_allclose(d.roots, [-1.0, 1.0], atol=1e-12)
    assert d.n_barriers == 1
    assert len(d.wells) == 2
    assert np.isinf(d.wells[0][0]) and np.isinf(d.wells[1][1])


def test_decompose_sech(sech):
    d = decompose(sech, 0.5)
    assert_allclose(d.roots, [-np.arccosh(2.0), np.arccosh(2.0)], atol=1e-12)
    assert d.n_barriers == 1


def test_decompose_two_hump_between_levels(two_hump):
    # between the local-min value and the smaller peak: 4 roots, 2 barriers, 3 wells
    vals = {k: a for _, a, k in two_hump.extrema}
    m1 = min(a for _, a, k in two_hump.extrema if k == "min")
    peak_small = sorted(a for _, a, k in two_hump.extrema if k == "max")[0]
    mu = 0.5 * (m1 + peak_small)
    d = decompose(two_hump, mu)
    assert len(d.roots) == 4
    assert d.n_barriers == 2
    assert len(d.wells) == 3


def test_decompose_root_residuals(two_hump):
    d = decompose(two_hump, 0.63)
    for x in d.roots:
        assert abs(float(two_hump(x)) - 0.63) < 1e-12


def test_decompose_midpoint_signs(two_hump):
    # A above mu at barrier midpoints, below mu inside finite wells
    for mu in np.linspace(0.15, 0.95, 9):
        d = decompose(two_hump, mu)
        for lo, hi in d.barriers:
            if hi > lo:
                assert float(two_hump(0.5 * (lo + hi))) > mu
        for lo, hi in d.wells[1:-1]:
            assert float(two_hump(0.5 * (lo + hi))) < mu


def test_decompose_alternating_dense_grid(sech):
    for mu in np.linspace(0.05, 0.95, 19):
        d = decompose(sech, mu)
        assert d.n_barriers == 1
        assert len(d.wells) == d.n_barriers + 1


def test_decompose_above_max_errors(sech):
    with pytest.raises(ValueError):
        decompose(sech, 1.5)


def test_decompose_critical_at_max(sech):
    d = decompose(sech, 1.0)
    assert d.critical
    assert d.n_barriers == 1
    lo, hi = d.barriers[0]
    assert lo == hi
    assert abs(lo) < 1e-7


def test_decompose_critical_at_local_min(two_hump):
    m1 = min(a for _, a, k in two_hump.extrema if k == "min")
    d = decompose(two_hump, m1)
    assert d.critical
    kinds = [k for _, k in d.double_roots]
    assert "min" in kinds


def test_validate_sech(sech):
    rep = validate_assumptions(sech)
    assert rep.positive
    assert rep.decay_class == "exponential"
    assert rep.near_zero_ok
    assert rep.all_ok


def test_validate_single_lorentzian_tail_fit():
    spec = make_potential("lorentzian-sum", {"amplitudes": [1.0]})
    rep = validate_assumptions(spec)
    assert abs(rep.fitted_exponent - 2.0) < 0.1
    assert rep.declared_tail.tau == 1.0
    assert rep.near_zero_ok  # 2r - s = 2 > 1/3


def test_validate_three_lobe_extremum_count():
    spec = make_potential(
        "lorentzian-sum",
        {"amplitudes": [0.8, 1.0, 2.0], "centers": [-5.0, -1.0, 5.0], "widths": [1.0, 1.0, 1.0]},
    )
    rep = validate_assumptions(spec)
    assert rep.n_extrema == 5
    assert rep.n_maxima == 3
    assert rep.n_minima == 2


def test_l1_norm_sech_is_pi(sech):
    assert_allclose(sech.l1_norm, np.pi, rtol=1e-9)


def test_load_potential_json(tmp_path):
    cfg = {
        "family": "lorentzian-sum",
        "params": {"amplitudes": [1.0, 2.0], "centers": [-5.0, 5.0], "widths": [1.0, 1.0]},
        "tail": {"class": "power", "r": 2.0, "s": 2.0, "tau": 1.0},
    }
    p = tmp_path / "two.json"
    p.write_text(json.dumps(cfg))
    spec = load_potential(p)
    assert spec.kind == "lorentzian-sum"
    assert_allclose(spec.amax, float(max(spec(np.linspace(-10, 10, 2001)))), rtol=1e-6)


def test_load_potential_toml(tmp_path):
    text = """
family = "sech-scaled"
[params]
amplitudes = [1.0]
[tail]
class = "exponential"
r = 1.0
s = 1.0
"""
    p = tmp_path / "sech.toml"
    p.write_text(text)
    spec = load_potential(p)
    assert spec.kind == "sech-scaled"
    assert_allclose(spec.amax, 1.0, atol=1e-12)


def test_load_potential_missing_field():
    with pytest.raises(ValueError):
        load_potential({"params": {"amplitudes": [1.0]}})


def test_sampled_potential_roundtrip():
    xs = np.linspace(-30, 30, 1201)
    base = make_potential("sech-scaled", {"amplitudes": [1.0]})
    spec = make_potential("user-sampled-with-spline", {"x": xs, "values": np.asarray(base(xs))})
    probe = np.linspace(-5, 5, 41)
    assert_allclose(spec(probe), base(probe), rtol=1e-6, atol=1e-8)
    d = decompose(spec, 0.5)
    assert_allclose(d.roots, [-np.arccosh(2.0), np.arccosh(2.0)], atol=1e-5)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snhorseshoe.errors import ConstructionError, DomainError
from snhorseshoe.global_map import ExtensionSpec, GlobalMap1D, build
from snhorseshoe.normal_form import SaddleNodeNormalForm


def test_default_validates(gm):
    report = gm.validate()
    assert report.passed, [c.name for c in report.failures]
    assert report.info["max_derivative"] < 3.0
    assert report.info["min_derivative"] >= gm.c2 + 1e-3


def test_p_fixed_on_mu_grid(gm):
    for mu in gm.mu_grid(50):
        assert abs(gm.eval(mu, gm.p) - gm.p) < 1e-12
        assert gm.deriv(mu, gm.p) >= gm.c1


def test_saddle_node_values(gm):
    assert gm.eval(0.0, 0.0) == 0.0
    assert gm.deriv(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("mu", [-0.049, -0.01, 0.0, 0.01, 0.049])
def test_strictly_increasing(gm, mu):
    lo, hi = gm.domain(mu)
    ys = np.linspace(lo, hi, 10_000)
    assert np.all(np.diff(gm.f(mu, ys)) > 0)
    assert np.all(gm.df(mu, ys) >= gm.c2)


def test_domain_errors(gm):
    lo, hi = gm.domain(0.01)
    with pytest.raises(DomainError):
        gm.eval(0.01, lo - 1e-3)
    with pytest.raises(DomainError):
        gm.deriv(0.01, hi + 1e-3)
    with pytest.raises(DomainError):
        gm.eval(0.06, 0.0)


def test_flow_piece_matches_core(gm):
    core = gm.core
    for mu in (-0.03, 0.0, 0.02):
        for y in np.linspace(gm.flow_lo, gm.flow_hi, 41):
            assert gm.f(mu, y) == pytest.approx(core.flow(mu, y), rel=1e-14, abs=1e-16)


def test_flow_ratio_on_flow_piece(gm):
    core = gm.core
    for mu in (-0.03, 0.005, 0.04):
        for y in np.linspace(gm.flow_lo, gm.flow_hi, 101):
            if abs(core.field(mu, y)) < 1e-4:
                continue
            ratio = core.field(mu, gm.f(mu, y)) / core.field(mu, y)
            assert gm.df(mu, y) == pytest.approx(ratio, rel=1e-10)


def test_c1_continuity(gm):
    tab = gm.table(0.02)
    for knot in tab[2:6]:
        for fn in (gm.f, gm.df):
            left = fn(0.02, knot - 1e-9)
            right = fn(0.02, knot + 1e-9)
            assert left == pytest.approx(right, abs=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.0499, 0.0499), st.floats(-0.43, 0.3), st.integers(1, 50))
def test_chain_rule_vs_finite_difference(mu, y, n):
    gm = GlobalMap1D(SaddleNodeNormalForm(), ExtensionSpec())
    h = 1e-7
    lo, hi = gm.domain(mu)
    if not lo + h < y < hi - h:
        return
    fy, prod = gm.iterate(mu, y, n)
    if abs(fy) > 1e3:
        return
    fp, _ = gm.iterate(mu, y + h, n)
    fm, _ = gm.iterate(mu, y - h, n)
    fd = (fp - fm) / (2 * h)
    # skip points sitting on a knot where the finite difference straddles pieces
    if abs(fd - prod) > 1e-5 * prod + 1e-7:
        knots = gm.table(mu)[2:6]
        z = y
        near = False
        for _ in range(n):
            near |= np.min(np.abs(knots - z)) < 1e-6
            z = gm.f(mu, z)
        assert near
    assert prod > 0


def test_fixed_points_examples(gm):
    fps = gm.fixed_points(-0.01)
    locs = [y for y, _ in fps]
    kinds = [k for _, k in fps]
    assert locs == pytest.approx([gm.p, -0.1, 0.1], abs=1e-12)
    assert kinds == ["repelling", "attracting", "repelling"]
    only = gm.fixed_points(0.01)
    assert len(only) == 1 and only[0][1] == "repelling"
    assert only[0][0] == pytest.approx(gm.p, abs=1e-12)
    fp0 = gm.fixed_points(0.0)
    assert fp0[1][1] == "saddle-node"
    assert abs(gm.deriv(0.0, fp0[1][0]) - 1.0) < 1e-10
    for y, _ in fps:
        assert abs(gm.f(-0.01, y) - y) < 1e-12


def test_three_fixed_points_negative_mu(gm):
    for mu in np.linspace(-0.049, -0.001, 10):
        lo, hi = gm.domain(mu)
        ys = np.linspace(lo, hi, 200_001)
        g = gm.f(mu, ys) - ys
        assert np.count_nonzero(np.diff(np.sign(g)) != 0) == 3


def test_f_a_below_b(gm):
    for mu in gm.mu_grid(50):
        assert gm.f(mu, gm.a) < gm.b


def test_inverse_round_trip(gm):
    rng = np.random.default_rng(3)
    for mu in (-0.04, 0.0, 0.03):
        lo, hi = gm.domain(mu)
        w = rng.uniform(gm.f(mu, lo), gm.f(mu, hi), 2000)
        assert np.max(np.abs(gm.f(mu, gm.inverse(mu, w)) - w)) < 1e-12
        assert gm.inverse(mu, gm.f(mu, 0.1)) == pytest.approx(0.1, abs=1e-13)


def test_deriv_bounds_enclose_samples(gm):
    rng = np.random.default_rng(5)
    for mu in (-0.045, -0.002, 0.002, 0.045):
        lo, hi = gm.domain(mu)
        a = rng.uniform(lo, hi, 300)
        b = np.minimum(a + rng.uniform(0, 0.1, 300), hi)
        dmin, dmax = gm.deriv_bounds(mu, a, b)
        for i in range(300):
            s = gm.df(mu, np.linspace(a[i], b[i], 200))
            assert dmin[i] <= s.min()
            assert dmax[i] >= s.max()
            assert s.min() - dmin[i] < 1e-3


def test_declared_c2_too_high_fails():
    gm = GlobalMap1D(SaddleNodeNormalForm(), ExtensionSpec(c2=0.9))
    report = gm.validate()
    bad = {c.name: c for c in report.failures}
    assert "c2_bound" in bad
    assert bad["c2_bound"].witness["min_derivative"] < 0.9
    with pytest.raises(ConstructionError) as info:
        build(SaddleNodeNormalForm(), ExtensionSpec(c2=0.9))
    assert any(c.name == "c2_bound" for c in info.value.failures)


def test_neighbourhood_overlapping_core_fails():
    gm = GlobalMap1D(SaddleNodeNormalForm(), ExtensionSpec(p=-0.3, delta2=0.05))
    report = gm.validate()
    assert not report.passed
    assert report.failures[0].detail == "neighborhood overlaps core"


def test_interval_outside_core_fails():
    report = GlobalMap1D(SaddleNodeNormalForm(), ExtensionSpec(b=0.35)).validate()
    assert "fundamental interval must lie in core" in [c.detail for c in report.failures]


def test_spec_defaults_are_infeasible():
    # the textbook defaults (c2 = 0.9 with a unit-time core of half-width 0.5)
    # cannot hold: the time-one map alone contracts below 0.9
    nf = SaddleNodeNormalForm(delta1=0.5)
    assert nf.time_one_derivative(-0.049, -0.25) < 0.9

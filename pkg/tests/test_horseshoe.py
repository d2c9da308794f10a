import numpy as np
import pytest

from snhorseshoe.errors import (DomainError, GeometryError, NoJacobianError,
                                NoPreimageError, WrongParameterError)
from snhorseshoe.horseshoe2d import (EDGE, GAP, H, H_TILDE, OUTSIDE, S1, S2,
                                     solve_constants)

MU = 0.01


def test_classify_examples(hs):
    g = hs.geometry(MU)
    p = hs.p
    assert hs.classify(MU, (p, p)) == H
    assert hs.classify(MU, (0.0, 0.5 * (g.l + g.l_tilde))) == H_TILDE
    assert hs.classify(MU, (0.0, 0.5 * (g.h_hi + g.l))) == GAP
    assert hs.classify(MU, (0.0, g.lo + 1e-6)) == EDGE
    assert hs.classify(MU, (g.cx, g.top + 0.1)) == S2
    assert hs.classify(MU, (g.cx, g.lo - 0.1)) == S1
    assert hs.classify(MU, (5.0, 0.0)) == OUTSIDE
    with pytest.raises(DomainError):
        hs.apply(MU, (5.0, 0.0))


def test_skew_product_exact(hs, gm):
    rng = np.random.default_rng(0)
    g = hs.geometry(MU)
    for x, y in zip(rng.uniform(g.lo, g.top, 200), rng.uniform(g.h_lo, g.h_hi, 200)):
        nx, ny = hs.apply(MU, (x, y))
        assert nx == hs.lam * (x - hs.p) + hs.p
        assert ny == gm.f(MU, y)


def test_jacobian_vs_finite_difference(hs):
    g = hs.geometry(MU)
    eps = 1e-7
    for pt in [(0.0, -0.2), (-0.3, 0.1), (0.2, 0.3)]:
        jac = hs.jacobian(MU, pt)
        fd = np.empty((2, 2))
        for j in range(2):
            d = np.zeros(2)
            d[j] = eps
            fp = np.array(hs.apply(MU, tuple(np.add(pt, d))))
            fm = np.array(hs.apply(MU, tuple(np.subtract(pt, d))))
            fd[:, j] = (fp - fm) / (2 * eps)
        np.testing.assert_allclose(jac, fd, rtol=1e-6, atol=1e-8)
    yt = 0.5 * (g.l + g.l_tilde)
    jt = hs.jacobian(MU, (0.0, yt))
    assert np.linalg.det(jt) == pytest.approx(hs.lam * hs.sigma_tilde)
    assert abs(np.linalg.det(hs.jacobian(MU, (0.0, 0.0)))) == pytest.approx(hs.lam * hs.base.df(MU, 0.0))
    with pytest.raises(NoJacobianError):
        hs.jacobian(MU, (g.cx, g.top + 0.1))


@pytest.mark.parametrize("mu", [-0.03, MU, 0.04])
def test_inverse_round_trip(hs, mu):
    rng = np.random.default_rng(4)
    g = hs.geometry(mu)
    xs = rng.uniform(g.lo, g.top, 1000)
    strip_h = rng.uniform(g.h_lo, g.h_hi, 500)
    strip_t = rng.uniform(g.l, g.l_tilde, 500)
    ys = np.concatenate([strip_h, strip_t])
    for x, y in zip(xs, ys):
        img = hs.apply(mu, (x, y))
        back = hs.apply_inverse(mu, img)
        assert back[0] == pytest.approx(x, abs=1e-12)
        assert back[1] == pytest.approx(y, abs=1e-12)
    nx, ny, ok = hs.strip_step(mu, xs, ys)
    assert ok.all()
    px, py, ok2 = hs.strip_step_inverse(mu, nx, ny)
    assert ok2.all()
    np.testing.assert_allclose(px, xs, atol=1e-12)
    np.testing.assert_allclose(py, ys, atol=1e-12)


def test_no_preimage(hs):
    g = hs.geometry(MU)
    with pytest.raises(NoPreimageError):
        hs.apply_inverse(MU, (g.cx, g.lo - 0.1))
    h_col, t_col = hs.columns(MU)
    with pytest.raises(NoPreimageError):
        hs.apply_inverse(MU, (0.5 * (h_col[1] + t_col[0]), 0.0))


def test_saddle_node_point(hs):
    chi, eigs = hs.saddle_node_point(0.0)
    assert chi == (hs.p, 0.0)
    assert eigs[0] == hs.lam
    assert abs(eigs[1] - 1.0) < 1e-12
    with pytest.raises(WrongParameterError):
        hs.saddle_node_point(0.01)


@pytest.mark.parametrize("mu", [-1e-3, 1e-3])
def test_no_unit_eigenvalue_off_bifurcation(hs, mu):
    for _, eigs, kind in hs.fixed_points(mu):
        assert all(abs(abs(e) - 1.0) > 1e-3 for e in eigs)
        assert kind != "saddle-node"


def test_fixed_points_counts(hs):
    assert len(hs.fixed_points(-0.01)) == 4
    assert len(hs.fixed_points(0.01)) == 2
    for (x, y), _, _ in hs.fixed_points(-0.01):
        nx, ny = hs.apply(-0.01, (x, y))
        assert nx == pytest.approx(x, abs=1e-12)
        assert ny == pytest.approx(y, abs=1e-9)


def test_verify_and_columns(hs):
    assert all(c.passed for c in hs.verify())
    for mu in (-0.049, 0.0, 0.049):
        g = hs.geometry(mu)
        h_col, t_col = hs.columns(mu)
        assert g.lo <= h_col[0] < h_col[1] < t_col[0] < t_col[1] <= g.top


def test_bad_lambda_rejected(gm, consts):
    with pytest.raises(GeometryError) as info:
        solve_constants(gm, consts=consts, lam=0.6)
    assert "lambda < min{c2/2, 1/zeta} violated" in str(info.value)


def test_bad_sigma_rejected(gm, consts):
    with pytest.raises(GeometryError):
        solve_constants(gm, consts=consts, sigma_tilde=10.0)


def test_orbit_from_gap(hs):
    g = hs.geometry(MU)
    rows = hs.orbit(MU, (0.0, 0.5 * (g.h_hi + g.l)), 3)
    assert [r[1] for r in rows[:4]] == [GAP, S2, S1, S1]
    assert rows[-1][:2] == (0, "escaped")


def test_orbit_at_saddle(hs):
    rows = hs.orbit(MU, (hs.p, hs.p), 10)
    assert len(rows) == 11
    assert all(r[1] == H and r[2] == hs.p and abs(r[3] - hs.p) < 1e-12 for r in rows)

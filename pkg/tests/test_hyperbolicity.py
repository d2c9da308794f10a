import math

import numpy as np
import pytest

from snhorseshoe.errors import PreconditionError
from snhorseshoe.hyperbolicity import (SADDLE_NODE_REASON, STRIP_T, build_cover, certify,
                                       cone_check, first_hits, format_from_log,
                                       prop4_witnesses, sample_invariant_points)
from snhorseshoe.output import to_json


@pytest.fixture(scope="module")
def cover_pos(hs):
    return build_cover(hs, 0.04, 6)


@pytest.fixture(scope="module")
def cover_neg(hs):
    return build_cover(hs, -0.04, 6)


def test_cover_contains_saddle(hs, cover_pos):
    assert cover_pos.contains(np.array([hs.p]), np.array([hs.p]))[0]
    assert cover_pos.size > 0 and cover_pos.n_edges > 0
    assert not cover_pos.attracting


def test_cover_negative_mu(hs, cover_neg):
    q = hs.base.core.field_zeros(-0.04)[1]
    assert cover_neg.contains(np.array([hs.p]), np.array([q]))[0]
    assert cover_neg.ylo.min() >= q - 1e-12 or cover_neg.contains(
        np.array([hs.p]), np.array([hs.p]))[0]
    assert cover_neg.attracting
    s = hs.base.core.field_zeros(-0.04)[0]
    assert not cover_neg.contains(np.array([hs.p]), np.array([s]))[0]


def test_area_non_increasing(hs):
    areas = [build_cover(hs, 0.04, d).area() for d in range(2, 8)]
    assert all(a2 <= a1 * (1 + 1e-12) for a1, a2 in zip(areas, areas[1:]))


def test_cover_contains_invariant_points(hs, cover_pos):
    x, y = sample_invariant_points(hs, 0.04, 2000, steps=40, seed=3)
    assert cover_pos.contains(x, y).all()


def test_refuses_saddle_node(hs):
    cert = certify(hs, 0.0)
    assert not cert.certified and cert.reason == SADDLE_NODE_REASON
    with pytest.raises(PreconditionError):
        build_cover(hs, 0.0, 4)


def test_witnesses(hs, cover_pos):
    res = prop4_witnesses(hs, 0.04, cover_pos)
    assert res.failed.size == 0
    assert len(res.witnesses) == cover_pos.size
    for w in res.witnesses:
        assert w.factor >= hs.zeta * (1 - 1e-12)
        if cover_pos.strip[w.box] == STRIP_T:
            assert w.i == 1
        if w.decomposition is not None:
            d = w.decomposition
            assert d["n0"] + d["m1"] + d["n2"] + d["m3"] + d["h_tilde"] == w.i


def test_first_hits_chain():
    class Chain:
        size = 3
        indptr = np.array([0, 1, 2, 3])
        indices = np.array([1, 2, 0])
    logd = np.log(np.array([1.5, 1.5, 1.5]))
    steps, values, _ = first_hits(Chain, logd, math.log(3.0), keep_paths=False)
    assert list(steps) == [3, 3, 3]
    np.testing.assert_allclose(values, 3 * math.log(1.5))


@pytest.mark.parametrize("mu", [-0.04, 0.04])
def test_certify(hs, mu):
    cert = certify(hs, mu, depth=6, n_orbits=200)
    assert cert.certified, cert.reason
    assert cert.log_C <= 0 and cert.zeta > 1
    assert cert.C <= 1
    assert cert.empirical["violations"] == 0
    assert cert.cone_ok
    if mu < 0:
        assert cert.attracting_component


def test_cone_precondition(hs, cover_pos):
    with pytest.raises(PreconditionError):
        cone_check(hs, 0.04, cover_pos, epsilon=1.0)
    ok, margins = cone_check(hs, 0.04, cover_pos, epsilon=0.0)
    assert ok and margins["stable_backward"] > 0


def test_format_from_log():
    assert format_from_log(0.0) == "1"
    assert format_from_log(math.log(0.5)) == "0.5"
    s = format_from_log(-1000 * math.log(10) + math.log(2.5))
    assert s.endswith("e-1000") and s.startswith("2.5")
    assert format_from_log(float("nan")) == "nan"


def test_certificate_json_deterministic(hs):
    a = to_json(certify(hs, 0.04, depth=5, n_orbits=100, seed=1).as_dict())
    b = to_json(certify(hs, 0.04, depth=5, n_orbits=100, seed=1).as_dict())
    assert a == b

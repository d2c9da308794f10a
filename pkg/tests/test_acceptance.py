"""The eight acceptance criteria, each at its stated tolerance and time limit.

Run directly (``python tests/test_acceptance.py``) or through pytest; either
way a one-line PASS/FAIL summary per criterion is printed at the end.
"""

import csv
import math
import time
from decimal import Decimal

import numpy as np
import pytest

from snhorseshoe import kernels
from snhorseshoe.cli import main
from snhorseshoe.escape_analysis import (escape_above, escape_below, flow_ratio,
                                         intermittency_scaling, passage_count)
from snhorseshoe.hyperbolicity import build_cover, certify, cone_check, sample_invariant_points


def record(acceptance, k, ok, line):
    acceptance[k] = (bool(ok), line)
    assert ok, line


def test_1_flow_ratio_identity(gm, acceptance):
    t0 = time.perf_counter()
    mus = np.geomspace(1e-4, 0.049, 20)
    worst = 0.0
    for mu in mus:
        n = passage_count(gm, mu)
        # one fundamental domain [a, f(a)) sweeps every passage orbit once
        for y in np.linspace(gm.a, gm.f(mu, gm.a), 101)[:-1]:
            prod, ratio = flow_ratio(gm, mu, y, n)
            worst = max(worst, abs(prod - ratio) / abs(ratio))
    dt = time.perf_counter() - t0
    record(acceptance, 1, worst <= 1e-8 and dt < 5,
           "flow ratio: worst relative error %.2e on 100x20 grid, %.2fs" % (worst, dt))


def test_2_proposition_bounds(gm, consts, acceptance):
    t0 = time.perf_counter()
    samples = violations = 0
    max_m = max_mt = 0
    ys_core = np.linspace(gm.a, gm.b, 100)
    for mu in np.geomspace(1e-4, 0.049, 20):
        n = passage_count(gm, mu)
        logs = kernels.orbit_log_products(gm.table(mu), ys_core, n)[-1]
        samples += ys_core.size
        violations += int(np.sum(np.exp(logs) < consts.sigma1 - 1e-9))
    for mu in np.linspace(-0.049, 0.049, 51):
        for y in np.linspace(gm.p + gm.delta2, gm.a, 101)[:-1]:
            m, d = escape_below(gm, mu, y)
            samples += 1
            max_m = max(max_m, m)
            violations += (d < consts.sigma2) + (m > consts.m_cap)
        lo = gm.b if mu >= 0 else max(gm.b, gm.core.field_zeros(mu)[1])
        for y in np.linspace(lo, gm.upper(mu), 101)[1:]:
            m, d = escape_above(gm, mu, y)
            samples += 1
            max_mt = max(max_mt, m)
            violations += (d < consts.sigma3) + (m > consts.m_tilde_cap)
    dt = time.perf_counter() - t0
    record(acceptance, 2, violations == 0 and samples >= 10_000 and dt < 30,
           "%d samples, %d violations, max m=%d (cap %d), max m~=%d (cap %d), %.2fs"
           % (samples, violations, max_m, consts.m_cap, max_mt, consts.m_tilde_cap, dt))


def test_3_intermittency(gm, acceptance):
    t0 = time.perf_counter()
    rows = intermittency_scaling(gm, [1e-4, 1e-5, 1e-6])
    errs = [abs(ns - ts) / ts for _, _, ns, ts in rows]
    pi_err = abs(rows[-1][2] - math.pi) / math.pi
    dt = time.perf_counter() - t0
    record(acceptance, 3, max(errs) <= 0.02 and pi_err <= 0.02 and dt < 10,
           "n*sqrt(mu) vs flow time: worst %.2f%%, vs pi at 1e-6: %.2f%%, %.2fs"
           % (100 * max(errs), 100 * pi_err, dt))


def test_4_isolation_dichotomy(tmp_path, acceptance):
    t0 = time.perf_counter()
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--mu-min", "-0.04", "--mu-max", "0.04", "--steps", "11",
                 "--depth", "10", "--out", str(out)])
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    dt = time.perf_counter() - t0
    nonzero = [r for r in rows if float(r["mu"]) != 0.0]
    zero = [r for r in rows if float(r["mu"]) == 0.0]
    ok = (code == 0 and len(rows) == 11 and len(nonzero) == 10 and len(zero) == 1
          and all(r["certified"] == "true" and Decimal(r["C"]) > 0 and float(r["zeta"]) > 1
                  for r in nonzero)
          and zero[0]["certified"] == "false" and dt < 300)
    record(acceptance, 4, ok, "%d/10 nonzero certified, mu=0 refused (%s), %.1fs"
           % (sum(r["certified"] == "true" for r in nonzero),
              zero[0]["reason"] if zero else "missing", dt))


@pytest.fixture(scope="module")
def certs(hs):
    out = {}
    for mu in (-0.01, 0.01):
        t0 = time.perf_counter()
        out[mu] = (certify(hs, mu, n_orbits=1000), time.perf_counter() - t0)
    return out


def test_5_lemma1_constants(certs, acceptance):
    parts, ok = [], True
    for mu, (cert, dt) in sorted(certs.items()):
        emp = cert.empirical
        good = (cert.certified and emp.get("violations") == 0 and emp.get("orbits") == 1000
                and emp.get("max_n") == 5 * cert.n_bar and cert.zeta > 1 and dt < 60)
        ok &= good
        parts.append("mu=%g: C=%s zeta=%.4g n~=%d violations=%s (%.1fs)"
                     % (mu, cert.as_dict(with_boxes=False)["C"], cert.zeta, cert.n_bar,
                        emp.get("violations"), dt))
    record(acceptance, 5, ok, "; ".join(parts))


def test_6_cone_robustness(hs, certs, acceptance):
    parts, ok = [], True
    for mu, (cert, _) in sorted(certs.items()):
        t0 = time.perf_counter()
        eps = (hs.base.c2 - 2 * hs.lam) / 10
        good, margins = cone_check(hs, mu, cert.cover, epsilon=eps)
        dt = time.perf_counter() - t0
        mins = min(v for k, v in margins.items() if k not in ("epsilon", "max_witness_steps"))
        ok &= good and eps > 0 and mins > 0 and dt < 60
        parts.append("mu=%g: eps=%.3g min margin %.3g" % (mu, eps, mins))
    record(acceptance, 6, ok, "; ".join(parts))


def test_7_saddle_node_detection(hs, acceptance):
    chi, eigs = hs.saddle_node_point(0.0)
    unit = abs(eigs[1] - 1.0)
    near = min(abs(e[1] - 1.0) for mu in (-1e-3, 1e-3) for _, e, _ in hs.fixed_points(mu))
    record(acceptance, 7, unit <= 1e-10 and abs(eigs[0]) < 1 and near > 1e-3,
           "chi=(%.3g, %.3g), eigenvalues (%.3g, 1%+.1e); nearest at |mu|=1e-3: %.3g from 1"
           % (chi[0], chi[1], eigs[0], eigs[1] - 1.0, near))


def test_8_cover_soundness(hs, acceptance):
    mu = 0.04
    cover = build_cover(hs, mu, 6)
    g = hs.geometry(mu)
    rng = np.random.default_rng(8)
    n = 100_000
    x0 = rng.uniform(g.lo, g.top, n)
    # half the samples start inside the strips so survival is not trivially empty
    y0 = np.concatenate([rng.uniform(g.lo, g.top, n // 2),
                         rng.uniform(g.h_lo, g.h_hi, n // 4),
                         rng.uniform(g.l, g.l_tilde, n - n // 2 - n // 4)])
    alive = np.ones(n, bool)
    x, y = x0.copy(), y0.copy()
    for _ in range(50):
        x, y, ok = hs.strip_step(mu, x, y)
        alive &= ok
    x, y = x0.copy(), y0.copy()
    for _ in range(50):
        x, y, ok = hs.strip_step_inverse(mu, x, y)
        alive &= ok
    random_out = int(np.sum(~cover.contains(x0[alive], y0[alive])))
    xs, ys = sample_invariant_points(hs, mu, 10_000, steps=50, seed=8)
    built_out = int(np.sum(~cover.contains(xs, ys)))
    record(acceptance, 8, random_out == 0 and built_out == 0,
           "%d boxes; random: %d survivors, %d outside; constructed: 10000 points, %d outside"
           % (cover.size, int(alive.sum()), random_out, built_out))


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))

"""Box-cover certification of uniform hyperbolicity of the invariant set.

Pipeline for one parameter value:

1. :func:`build_cover` outer-approximates the maximal invariant set of
   ``H u H~`` by boxes, pruning boxes without predecessors or successors.
2. :func:`prop4_witnesses` runs a min-plus recursion on the transition
   graph.  ``W_k(B)`` is a certified lower bound (in log form) of the
   vertical expansion over ``k`` steps of every orbit starting in ``B``; the
   witness of ``B`` is the first ``k`` with ``W_k(B) >= log zeta``.
3. :func:`lemma1_constants` turns the witnesses into uniform ``(C, zeta)``.
4. :func:`cone_check` repeats the estimates for ``C^1``-small perturbations.

All derivative bounds come from :meth:`GlobalMap1D.deriv_bounds` over box
hulls; sampled orbits are only used for the empirical cross-check.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BudgetError, PreconditionError, SaddleNodeError
from .horseshoe2d import HorseshoeMap2D

INFLATE = 1e-12
DEFAULT_DEPTH = 10
MAX_DEPTH = 14
BOX_BUDGET = 1_000_000
EDGE_BUDGET = 60_000_000
WITNESS_CAP = 5000
SADDLE_NODE_REASON = "saddle-node fixed point, eigenvalue 1"

STRIP_H, STRIP_T = 0, 1


@dataclass
class BoxCover:
    mu: float
    depth: int
    strip: np.ndarray
    ix: np.ndarray
    iy: np.ndarray
    xlo: np.ndarray
    xhi: np.ndarray
    ylo: np.ndarray
    yhi: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    grids: tuple            # per strip: (x0, dx, nx, y0, dy, ny)
    lookup: tuple           # per strip: (nx, ny) array of box ids or -1
    attracting: list = field(default_factory=list)

    @property
    def size(self):
        return int(self.strip.size)

    @property
    def n_edges(self):
        return int(self.indices.size)

    def area(self):
        return float(np.sum((self.xhi - self.xlo) * (self.yhi - self.ylo)))

    def contains(self, xs, ys):
        """Vectorised membership test (closed boxes)."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        hit = np.zeros(xs.shape, dtype=bool)
        for s in (STRIP_H, STRIP_T):
            x0, dx, nx, y0, dy, ny = self.grids[s]
            for ex in (-INFLATE, INFLATE):
                for ey in (-INFLATE, INFLATE):
                    fx = np.floor((xs + ex - x0) / dx)
                    fy = np.floor((ys + ey - y0) / dy)
                    ok = (fx >= 0) & (fx < nx) & (fy >= 0) & (fy < ny)
                    ok &= (xs >= x0 - INFLATE) & (xs <= x0 + nx * dx + INFLATE)
                    ok &= (ys >= y0 - INFLATE) & (ys <= y0 + ny * dy + INFLATE)
                    ids = np.full(xs.shape, -1, dtype=np.int64)
                    ids[ok] = self.lookup[s][fx[ok].astype(np.int64), fy[ok].astype(np.int64)]
                    hit |= ids >= 0
        return hit

    def rect(self, i):
        return [float(self.xlo[i]), float(self.xhi[i]), float(self.ylo[i]), float(self.yhi[i])]

    def as_dict(self):
        return {"mu": self.mu, "depth": self.depth, "n_boxes": self.size,
                "n_edges": self.n_edges,
                "boxes": [{"rect": self.rect(i),
                           "strip": "H" if self.strip[i] == STRIP_H else "H_tilde"}
                          for i in range(self.size)],
                "attracting_component": self.attracting}


@dataclass
class ExpansionWitness:
    box: int
    i: int
    factor: float
    log_factor: float
    decomposition: dict | None

    def as_dict(self):
        return {"box": self.box, "i": self.i, "factor": self.factor,
                "log_factor": self.log_factor, "decomposition": self.decomposition}


@dataclass
class WitnessResult:
    witnesses: list
    failed: np.ndarray          # box ids without witness
    steps: int


@dataclass
class HyperbolicityCertificate:
    mu: float
    certified: bool
    reason: str = ""
    depth: int = 0
    n_boxes: int = 0
    n1: int = 0
    zeta1: float = float("nan")
    zeta2: float = float("nan")
    zeta0: float = float("nan")
    xi: float = float("nan")
    m_lemma: int = 0
    n_bar: int = 0
    log_C: float = float("nan")
    zeta: float = float("nan")
    bound_source: str = ""
    cone_ok: bool = False
    cone_margins: dict = field(default_factory=dict)
    empirical: dict = field(default_factory=dict)
    attracting_component: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    cover: BoxCover | None = None

    @property
    def C(self):
        return math.exp(self.log_C) if math.isfinite(self.log_C) else float("nan")

    def as_dict(self, with_boxes=True):
        out = {"mu": self.mu, "certified": self.certified, "reason": self.reason,
               "depth": self.depth, "n_boxes": self.n_boxes, "n1": self.n1,
               "zeta1": self.zeta1, "zeta2": self.zeta2, "zeta0": self.zeta0,
               "xi": self.xi, "m": self.m_lemma, "n_bar": self.n_bar,
               "C": format_from_log(self.log_C), "log_C": self.log_C,
               "zeta": self.zeta, "bound_source": self.bound_source,
               "cone_ok": self.cone_ok, "cone_margins": self.cone_margins,
               "empirical": self.empirical,
               "attracting_component": self.attracting_component}
        if with_boxes and self.cover is not None:
            boxes = []
            for w in self.witnesses:
                boxes.append({"rect": self.cover.rect(w.box), "i": w.i,
                              "factor": w.factor, "log_factor": w.log_factor,
                              "decomposition": w.decomposition})
            out["boxes"] = boxes
        return out


def format_from_log(log_value):
    """17-significant-digit decimal for ``exp(log_value)``, even when the
    value underflows a double."""
    if not math.isfinite(log_value):
        return "nan"
    direct = math.exp(log_value)
    if direct > 1e-300:
        return "%.17g" % direct
    e10 = log_value / math.log(10.0)
    ex = math.floor(e10)
    mant = 10.0 ** (e10 - ex)
    if mant >= 10.0:
        mant /= 10.0
        ex += 1
    return "%.16fe%d" % (mant, ex)


# ---------------------------------------------------------------------------
# cover construction

def _strip_grids(h: HorseshoeMap2D, mu, nx, ny):
    g = h.geometry(mu)
    y0 = g.h_lo
    if mu < 0:
        y0 = max(y0, h.base.core.field_zeros(mu)[1])
    dx = (g.top - g.lo) / nx
    return ((g.lo, dx, nx, y0, (g.h_hi - y0) / ny, ny),
            (g.lo, dx, nx, g.l, (g.l_tilde - g.l) / ny, ny))


def _rects(grids, strip, ix, iy):
    xlo = np.empty(strip.size)
    ylo = np.empty(strip.size)
    xhi = np.empty(strip.size)
    yhi = np.empty(strip.size)
    for s in (STRIP_H, STRIP_T):
        m = strip == s
        x0, dx, _, y0, dy, _ = grids[s]
        xlo[m] = x0 + ix[m] * dx
        xhi[m] = x0 + (ix[m] + 1) * dx
        ylo[m] = y0 + iy[m] * dy
        yhi[m] = y0 + (iy[m] + 1) * dy
    return xlo, xhi, ylo, yhi


def _images(h: HorseshoeMap2D, mu, strip, xlo, xhi, ylo, yhi):
    g = h.geometry(mu)
    tab = h.base.table(mu)
    lam, p = h.lam, h.p
    ix0 = np.empty_like(xlo)
    ix1 = np.empty_like(xlo)
    iy0 = np.empty_like(xlo)
    iy1 = np.empty_like(xlo)
    m = strip == STRIP_H
    ix0[m] = lam * (xlo[m] - p) + p
    ix1[m] = lam * (xhi[m] - p) + p
    iy0[m] = kernels.f_eval_array(tab, ylo[m])
    iy1[m] = kernels.f_eval_array(tab, yhi[m])
    t = ~m
    ix0[t] = -lam * (xhi[t] - p) + p + g.x_offset
    ix1[t] = -lam * (xlo[t] - p) + p + g.x_offset
    iy0[t] = -h.sigma_tilde * (yhi[t] - g.l) + g.top
    iy1[t] = -h.sigma_tilde * (ylo[t] - g.l) + g.top
    return ix0 - INFLATE, ix1 + INFLATE, iy0 - INFLATE, iy1 + INFLATE


def _index_range(lo, hi, origin, step, count):
    a = np.floor((lo - origin) / step)
    b = np.floor((hi - origin) / step)
    valid = (b >= 0) & (a <= count - 1) & (hi >= origin) & (lo <= origin + count * step)
    return np.clip(a, 0, count - 1).astype(np.int64), np.clip(b, 0, count - 1).astype(np.int64), valid


def _edges(grids, lookup, img):
    """CSR successor lists of every box."""
    ix0, ix1, iy0, iy1 = img
    n = ix0.size
    srcs, dsts = [], []
    for s in (STRIP_H, STRIP_T):
        x0, dx, nx, y0, dy, ny = grids[s]
        ax, bx, vx = _index_range(ix0, ix1, x0, dx, nx)
        ay, by, vy = _index_range(iy0, iy1, y0, dy, ny)
        ok = vx & vy
        wx = np.where(ok, bx - ax + 1, 0)
        wy = np.where(ok, by - ay + 1, 0)
        cnt = wx * wy
        total = int(cnt.sum())
        if total > EDGE_BUDGET:
            raise BudgetError("transition graph needs %d edges" % total)
        if total == 0:
            continue
        src = np.repeat(np.arange(n, dtype=np.int64), cnt)
        start = np.repeat(np.cumsum(cnt) - cnt, cnt)
        k = np.arange(total, dtype=np.int64) - start
        wys = wy[src]
        tx = ax[src] + k // wys
        ty = ay[src] + k % wys
        ids = lookup[s][tx, ty]
        keep = ids >= 0
        srcs.append(src[keep])
        dsts.append(ids[keep])
    if srcs:
        src = np.concatenate(srcs)
        dst = np.concatenate(dsts)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    order = np.argsort(src, kind="stable")
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst, src


def _make_lookup(grids, strip, ix, iy):
    lookup = []
    for s in (STRIP_H, STRIP_T):
        _, _, nx, _, _, ny = grids[s]
        arr = np.full((nx, ny), -1, dtype=np.int64)
        m = strip == s
        arr[ix[m], iy[m]] = np.nonzero(m)[0]
        lookup.append(arr)
    return tuple(lookup)


def _prune(h, mu, grids, strip, ix, iy):
    """Drop boxes without alive predecessor or successor until stable."""
    while True:
        lookup = _make_lookup(grids, strip, ix, iy)
        rect = _rects(grids, strip, ix, iy)
        indptr, dst, src = _edges(grids, lookup, _images(h, mu, strip, *rect))
        n = strip.size
        alive = np.ones(n, dtype=bool)
        while True:
            e = alive[src] & alive[dst]
            out_deg = np.bincount(src[e], minlength=n)
            in_deg = np.bincount(dst[e], minlength=n)
            nxt = alive & (out_deg > 0) & (in_deg > 0)
            if np.array_equal(nxt, alive):
                break
            alive = nxt
        if alive.all():
            return strip, ix, iy, lookup, rect, indptr, dst
        strip, ix, iy = strip[alive], ix[alive], iy[alive]


def _attracting_rects(h, mu):
    if mu >= 0:
        return []
    g = h.geometry(mu)
    q = h.base.core.field_zeros(mu)[1]
    if q <= g.h_lo:
        return []
    out = []
    for name, col in zip(("H_image", "H_tilde_image"), h.columns(mu)):
        out.append({"rect": [col[0], col[1], g.lo, q], "column": name,
                    "tag": "attracting component"})
    return out


def build_cover(h: HorseshoeMap2D, mu, depth=DEFAULT_DEPTH, budget=BOX_BUDGET) -> BoxCover:
    """Outer approximation of the invariant set after ``depth`` rounds.

    Each round halves every box in y; x is halved every second round.  For
    ``mu < 0`` the H strip is clipped to ``y >= q_mu``: below ``q_mu`` lies
    the basin of the sink ``(p, s_mu)``, reported as the attracting
    component.
    """
    h.base.check_mu(mu)
    if mu == 0:
        raise PreconditionError("cover construction needs mu != 0")
    if not 0 <= depth <= MAX_DEPTH:
        raise PreconditionError("depth must lie in [0, %d]" % MAX_DEPTH)
    strip = np.array([STRIP_H, STRIP_T], dtype=np.int8)
    ix = np.zeros(2, dtype=np.int64)
    iy = np.zeros(2, dtype=np.int64)
    nx = ny = 1
    grids = _strip_grids(h, mu, nx, ny)
    strip, ix, iy, lookup, rect, indptr, dst = _prune(h, mu, grids, strip, ix, iy)
    for r in range(1, depth + 1):
        split_x = r % 2 == 0
        kx = 2 if split_x else 1
        strip = np.repeat(strip, 2 * kx)
        ix = np.repeat(ix, 2 * kx) * kx
        iy = np.repeat(iy, 2 * kx) * 2
        sub = np.tile(np.arange(2 * kx), strip.size // (2 * kx))
        iy += sub % 2
        if split_x:
            ix += sub // 2
            nx *= 2
        ny *= 2
        if strip.size > budget:
            raise BudgetError("box count %d exceeds budget %d" % (strip.size, budget))
        grids = _strip_grids(h, mu, nx, ny)
        strip, ix, iy, lookup, rect, indptr, dst = _prune(h, mu, grids, strip, ix, iy)
    xlo, xhi, ylo, yhi = rect
    return BoxCover(mu=float(mu), depth=depth, strip=strip, ix=ix, iy=iy,
                    xlo=xlo, xhi=xhi, ylo=ylo, yhi=yhi, indptr=indptr,
                    indices=dst, grids=grids, lookup=lookup,
                    attracting=_attracting_rects(h, mu))


# ---------------------------------------------------------------------------
# expansion witnesses

def vertical_bounds(h: HorseshoeMap2D, cover: BoxCover):
    """Certified ``min f'`` per box (``sigma~`` on H~)."""
    dmin = np.full(cover.size, h.sigma_tilde)
    m = cover.strip == STRIP_H
    if m.any():
        dmin[m] = h.base.deriv_bounds(cover.mu, cover.ylo[m], cover.yhi[m])[0]
    return dmin


def _categories(h, cover):
    """0: V2 / near p, 1: left gap, 2: I, 3: right gap, 4: H~."""
    base = h.base
    yc = 0.5 * (cover.ylo + cover.yhi)
    cat = np.select([yc <= base.p + base.delta2, yc < base.a, yc <= base.b],
                    [0, 1, 2], 3)
    cat[cover.strip == STRIP_T] = 4
    return cat


def first_hits(cover: BoxCover, logd, target, cap=WITNESS_CAP, keep_paths=True):
    """Min-plus recursion until every box reaches ``target`` or ``cap``.

    Returns ``(steps, values, history)``: ``steps[i]`` is the first hit
    (0 if none), ``values[i]`` the log product there, ``history`` the list
    of argmin successor arrays (one per step) when ``keep_paths``.
    """
    n = cover.size
    cur = np.zeros(n)
    steps = np.zeros(n, dtype=np.int64)
    values = np.full(n, -np.inf)
    history = []
    for k in range(1, cap + 1):
        new, best = kernels.minplus_step(cover.indptr, cover.indices, logd, cur)
        if keep_paths:
            history.append(best.astype(np.int32))
        hit = (steps == 0) & (new >= target)
        steps[hit] = k
        values[hit] = new[hit]
        cur = new
        if (steps > 0).all():
            break
    return steps, values, history


def _decompose(cover, cat, steps, history):
    n = cover.size
    counts = np.zeros((n, 5), dtype=np.int64)
    if not history:
        return counts
    hist = np.vstack(history)
    node = np.arange(n, dtype=np.int64)
    remaining = steps.copy()
    active = remaining > 0
    while active.any():
        idx = np.nonzero(active)[0]
        np.add.at(counts, (idx, cat[node[idx]]), 1)
        nxt = hist[remaining[idx] - 1, node[idx]]
        node[idx] = nxt
        remaining[idx] -= 1
        active = remaining > 0
    return counts


def prop4_witnesses(h: HorseshoeMap2D, mu, cover: BoxCover, zeta=None,
                    cap=WITNESS_CAP) -> WitnessResult:
    zeta = h.zeta if zeta is None else zeta
    logd = np.log(vertical_bounds(h, cover))
    keep = cover.size * min(cap, 2000) * 4 <= 400_000_000
    steps, values, history = first_hits(cover, logd, math.log(zeta), cap, keep)
    counts = _decompose(cover, _categories(h, cover), steps, history) if keep else None
    wits = []
    for b in np.nonzero(steps > 0)[0]:
        dec = None
        if counts is not None:
            c = counts[b]
            dec = {"n0": int(c[0]), "m1": int(c[1]), "n2": int(c[2]),
                   "m3": int(c[3]), "h_tilde": int(c[4])}
        wits.append(ExpansionWitness(int(b), int(steps[b]), float(math.exp(values[b])),
                                     float(values[b]), dec))
    return WitnessResult(wits, np.nonzero(steps == 0)[0], int(steps.max(initial=0)))


# ---------------------------------------------------------------------------
# Lemma 1

def n1_count(h: HorseshoeMap2D, mu, cap=10_000_000):
    """``1 + min{n > 0 : f^n(p + delta2) >= l}``."""
    g = h.geometry(mu)
    tab = h.base.table(mu)
    n = kernels.passage_count(tab, h.base.f(mu, h.base.p + h.base.delta2), g.l, cap)
    if n < 0:
        return -1
    return n + 2


def lemma1_constants(h: HorseshoeMap2D, mu, cover: BoxCover, seed=0,
                     n_orbits=1000, check=True):
    """Uniform constants with ``|d phi^n v| >= C zeta^n |v|`` on the cover.

    ``zeta = K^(1/n_bar)`` where ``K`` is the larger of the block bound
    ``zeta0^m * xi^n1`` and the direct graph bound ``min_B W_{n_bar}(B)``.
    """
    base = h.base
    logd = np.log(vertical_bounds(h, cover))
    xi = float(np.exp(logd.min()))
    v2 = (cover.strip == STRIP_H) & (cover.ylo <= base.p + base.delta2)
    v1 = ~v2
    if xi > 1:
        n1 = 1
    else:
        n1 = n1_count(h, mu)
        if n1 < 0:
            raise SaddleNodeError("f^n(p + delta2) never reaches l")
    w_n1 = kernels.minplus_values(cover.indptr, cover.indices, logd, n1)
    log_z1 = float(w_n1[v1].min()) if v1.any() else math.inf
    log_z2 = float(logd[v2].min()) if v2.any() else math.inf
    log_z0 = min(log_z1, log_z2)
    log_xi = math.log(xi)
    m = None
    if log_z0 > 0:
        m = 1
        while m * log_z0 + n1 * log_xi <= 0:
            m += 1
    out = {"n1": n1, "zeta1": math.exp(log_z1), "zeta2": math.exp(log_z2),
           "zeta0": math.exp(log_z0), "xi": xi, "log_xi": log_xi}
    if m is not None:
        n_bar = n1 * (m + 1)
        log_k_block = m * log_z0 + n1 * log_xi
    else:
        # block bound unavailable: grow the horizon until the graph bound is > 1
        m, log_k_block = 0, -math.inf
        while True:
            m += 1
            n_bar = n1 * (m + 1)
            if n_bar > WITNESS_CAP:
                out.update(m_lemma=m, n_bar=n_bar, log_K=-math.inf)
                return out
            if kernels.minplus_values(cover.indptr, cover.indices, logd, n_bar).min() > 0:
                break
    log_k_graph = float(kernels.minplus_values(cover.indptr, cover.indices, logd, n_bar).min())
    log_k = max(log_k_block, log_k_graph)
    out.update(m_lemma=m, n_bar=n_bar, log_K=log_k,
               bound_source="block" if log_k_block >= log_k_graph else "graph")
    if log_k <= 0:
        return out
    log_zeta = log_k / n_bar
    log_c = min(0.0, min(i * (log_xi - log_zeta) for i in range(1, n_bar + 1)))
    out.update(log_zeta=log_zeta, zeta=math.exp(log_zeta), log_C=log_c)
    if check:
        out["empirical"] = empirical_check(h, mu, log_c, log_zeta, n_bar,
                                           n_orbits=n_orbits, seed=seed)
    return out


def sample_orbits(h: HorseshoeMap2D, mu, length, n_orbits, seed=0, p_tilde_branch=0.3):
    """Orbit segments of the invariant set, built by inverse branches.

    Returns ``(ys, in_tilde)`` of shape ``(length + 1, n_orbits)``; row 0 is
    the start.  Going backwards the inverse branches are contracting, so the
    constructed pseudo-orbit is accurate where a forward recomputation would
    not be.
    """
    rng = np.random.default_rng(seed)
    g = h.geometry(mu)
    base = h.base
    lo = g.lo
    if mu < 0:
        lo = base.core.field_zeros(mu)[1]
    ys = np.empty((length + 1, n_orbits))
    tilde = np.zeros((length + 1, n_orbits), dtype=bool)
    y = rng.uniform(lo, g.top, n_orbits)
    ys[length] = y
    for k in range(length - 1, -1, -1):
        pick = rng.random(n_orbits) < p_tilde_branch
        prev = np.empty(n_orbits)
        prev[pick] = g.l - (y[pick] - g.top) / h.sigma_tilde
        prev[~pick] = base.inverse(mu, y[~pick])
        tilde[k] = pick
        ys[k] = prev
        y = prev
    return ys, tilde


def sample_invariant_points(h: HorseshoeMap2D, mu, n_points, steps=50, seed=0):
    """Points whose orbits stay in the strips for ``steps`` iterates both ways.

    y comes from inverse branches (future itinerary); x from forward
    branches of the contracting x-dynamics (past itinerary).
    """
    rng = np.random.default_rng(seed)
    g = h.geometry(mu)
    ys, _ = sample_orbits(h, mu, steps, n_points, seed=seed + 1)
    x = rng.uniform(g.lo, g.top, n_points)
    for _ in range(steps):
        pick = rng.random(n_points) < 0.5
        x = np.where(pick, -h.lam * (x - h.p) + h.p + g.x_offset,
                     h.lam * (x - h.p) + h.p)
    return x, ys[0]


def empirical_check(h: HorseshoeMap2D, mu, log_c, log_zeta, n_bar, n_orbits=1000, seed=0):
    length = 5 * n_bar
    ys, tilde = sample_orbits(h, mu, length, n_orbits, seed)
    logs = np.log(np.where(tilde[:-1], h.sigma_tilde,
                           h.base.df(mu, ys[:-1].ravel()).reshape(ys[:-1].shape)))
    cum = np.cumsum(logs, axis=0)
    n = np.arange(1, length + 1)[:, None]
    slack = cum - (log_c + n * log_zeta)
    return {"orbits": n_orbits, "max_n": length, "violations": int((slack < 0).sum()),
            "min_slack_log": float(slack.min())}


# ---------------------------------------------------------------------------
# cones

def cone_check(h: HorseshoeMap2D, mu, cover: BoxCover, epsilon=None, zeta=None):
    """Cone invariance and expansion for every ``epsilon``-perturbation.

    Unstable cone ``2|u| <= |v|``, stable cone ``2|v| <= |u|``.  Returns
    ``(ok, margins)``; all margins must be strictly positive.
    """
    c2, lam = h.base.c2, h.lam
    zeta = h.zeta if zeta is None else zeta
    if epsilon is None:
        epsilon = (c2 - 2.0 * lam) / 10.0
    if not (epsilon >= 0 and 9.0 * epsilon < c2 - 2.0 * lam):
        raise PreconditionError("need 0 <= 9*epsilon < c2 - 2*lambda")
    eps = epsilon
    c = vertical_bounds(h, cover)
    unstable = 0.5 - ((lam + eps) / 2.0 + eps) / (c - 1.5 * eps)
    stable = 2.0 - (2.0 * (lam + eps) + eps) / (c - 3.0 * eps)
    steps, values, _ = first_hits(cover, np.log(c - 1.5 * eps), math.log(zeta),
                                  keep_paths=False)
    expansion = np.where(steps > 0, values - math.log(zeta), -np.inf)
    contraction = 1.0 / zeta - (lam + 1.5 * eps)
    margins = {"epsilon": eps,
               "unstable_slope": float(unstable.min()),
               "stable_slope": float(stable.min()),
               "expansion_log": float(expansion.min()),
               "max_witness_steps": int(steps.max(initial=0)),
               "stable_backward": contraction}
    ok = all(v > 0 for k, v in margins.items() if k not in ("epsilon", "max_witness_steps"))
    return ok, margins


# ---------------------------------------------------------------------------
# full pipeline

def certify(h: HorseshoeMap2D, mu, depth=DEFAULT_DEPTH, max_depth=MAX_DEPTH,
            seed=0, epsilon=None, n_orbits=1000) -> HyperbolicityCertificate:
    """Certificate for one parameter; refuses at the saddle-node value."""
    mu = float(mu)
    h.base.check_mu(mu)
    if mu == 0:
        return HyperbolicityCertificate(mu=mu, certified=False, reason=SADDLE_NODE_REASON)
    d = depth
    while True:
        cover = build_cover(h, mu, d)
        wit = prop4_witnesses(h, mu, cover)
        if wit.failed.size == 0 or d >= max_depth:
            break
        d += 1
    cert = HyperbolicityCertificate(mu=mu, certified=False, depth=d,
                                    n_boxes=cover.size, cover=cover,
                                    witnesses=wit.witnesses,
                                    attracting_component=cover.attracting)
    if mu < 0:
        for pt, eig, kind in h.fixed_points(mu):
            if kind == "attracting":
                cert.attracting_component = cert.attracting_component + [
                    {"fixed_point": list(pt), "eigenvalues": list(eig),
                     "hyperbolic": all(abs(abs(e) - 1) > 0 for e in eig)}]
    if wit.failed.size:
        cert.reason = "%d boxes without expansion witness at depth %d" % (wit.failed.size, d)
        return cert
    lem = lemma1_constants(h, mu, cover, seed=seed, n_orbits=n_orbits)
    cert.n1 = lem["n1"]
    cert.zeta1, cert.zeta2, cert.zeta0 = lem["zeta1"], lem["zeta2"], lem["zeta0"]
    cert.xi = lem["xi"]
    cert.m_lemma, cert.n_bar = lem["m_lemma"], lem["n_bar"]
    cert.bound_source = lem.get("bound_source", "")
    if "log_zeta" not in lem:
        cert.reason = "no uniform bound K > 1 over %d steps" % lem["n_bar"]
        return cert
    cert.zeta, cert.log_C = lem["zeta"], lem["log_C"]
    cert.empirical = lem["empirical"]
    cert.cone_ok, cert.cone_margins = cone_check(h, mu, cover, epsilon)
    if not cert.cone_ok:
        cert.reason = "cone margins not positive"
    elif cert.empirical["violations"]:
        cert.reason = "empirical Lemma 1 check failed"
    else:
        cert.certified = True
    return cert


def _scan_one(args):
    h, mu, depth, seed = args
    try:
        c = certify(h, mu, depth=depth, seed=seed)
        return (mu, c.certified, c.C if c.certified else float("nan"),
                c.zeta if c.certified else float("nan"), c.n1, c.n_boxes, c.reason,
                c.log_C if c.certified else float("nan"))
    except SaddleNodeError as exc:
        return (mu, False, float("nan"), float("nan"), 0, 0, str(exc), float("nan"))


def dichotomy_scan(h: HorseshoeMap2D, mu_grid, depth=DEFAULT_DEPTH, seed=0, jobs=1):
    """Rows ``(mu, certified, C, zeta, n1, boxes, reason, log_C)`` in grid order."""
    tasks = [(h, float(mu), depth, seed) for mu in mu_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_scan_one, tasks))
    return [_scan_one(t) for t in tasks]

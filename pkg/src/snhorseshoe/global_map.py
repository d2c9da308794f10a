"""The global one-dimensional arc ``f_mu`` on ``J_mu = [p - delta2, f_mu(p_tilde)]``.

The map is assembled from five C^1 pieces:

    y < p + delta2                  affine, slope ``slope_p``, fixing ``p``
    [p + delta2, -delta1 + w)       cubic Hermite blend
    [-delta1 + w, delta1 - w]       time-one map of the normal form
    (delta1 - w, delta1)            cubic Hermite blend (quadratic derivative)
    y >= delta1                     affine, slope ``slope_right``

``w`` is the blend width.  Every piece is strictly increasing, and the
flow piece is the Moebius map ``(y + c)/(1 - d*y)`` with increasing
derivative, so derivative ranges over intervals are exact per piece.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import ConstructionError, DomainError, NumericError
from .normal_form import SaddleNodeNormalForm

SAFETY_MARGIN = 1e-3
ROUNDING_SLACK = 1e-12


@dataclass(frozen=True)
class ExtensionSpec:
    """Parameters of the extension of the time-one map outside the core."""

    p: float = -0.38
    delta2: float = 0.03
    p_tilde: float = 0.32
    slope_p: float = 1.6
    slope_right: float = 1.5
    blend_width: float = 0.05
    c1: float = 1.5
    c2: float = 0.6
    a: float = -0.25
    b: float = 0.25


@dataclass
class InvariantCheck:
    name: str
    passed: bool
    detail: str = ""
    witness: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    checks: list
    info: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def as_dict(self):
        return {"passed": self.passed,
                "checks": [asdict(c) for c in self.checks],
                "info": dict(self.info)}


def _hermite_power(v0, v1, m0, m1, h):
    """Power-basis coefficients in t in [0, 1] of the cubic Hermite segment."""
    return (v0, h * m0,
            -3.0 * v0 - 2.0 * h * m0 + 3.0 * v1 - h * m1,
            2.0 * v0 + h * m0 - 2.0 * v1 + h * m1)


def _clamp_slopes(v0, v1, m0, m1, h):
    """Fritsch-Carlson limiter; returns possibly reduced slopes and a flag."""
    delta = (v1 - v0) / h
    if delta <= 0:
        raise ConstructionError("blend endpoints are not increasing")
    al, be = m0 / delta, m1 / delta
    s = al * al + be * be
    if s <= 9.0:
        return m0, m1, False
    tau = 3.0 / math.sqrt(s)
    return tau * m0, tau * m1, True


@dataclass(frozen=True)
class GlobalMap1D:
    """Immutable global map; per-``mu`` piece tables are cached."""

    core: SaddleNodeNormalForm
    ext: ExtensionSpec

    # -- geometry shortcuts ---------------------------------------------
    @property
    def p(self):
        return self.ext.p

    @property
    def delta2(self):
        return self.ext.delta2

    @property
    def p_tilde(self):
        return self.ext.p_tilde

    @property
    def a(self):
        return self.ext.a

    @property
    def b(self):
        return self.ext.b

    @property
    def c1(self):
        return self.ext.c1

    @property
    def c2(self):
        return self.ext.c2

    @property
    def flow_lo(self):
        return -self.core.delta1 + self.ext.blend_width

    @property
    def flow_hi(self):
        return self.core.delta1 - self.ext.blend_width

    def check_mu(self, mu):
        self.core.check_mu(mu)

    # -- tables ---------------------------------------------------------
    def table(self, mu):
        """18-entry piece table consumed by :mod:`snhorseshoe.kernels`."""
        return _table(self, float(mu))

    def clamped(self, mu):
        return _table_flags(self, float(mu))

    def upper(self, mu):
        """Right end ``f_mu(p_tilde)`` of ``J_mu``."""
        return kernels.f_eval(self.table(mu), self.p_tilde)

    def domain(self, mu):
        return self.p - self.delta2, self.upper(mu)

    # -- evaluation -----------------------------------------------------
    def _check_y(self, mu, y):
        lo, hi = self.domain(mu)
        if not (lo <= y <= hi):
            raise DomainError("y=%r outside J_mu = [%r, %r]" % (y, lo, hi))

    def eval(self, mu, y):
        self.check_mu(mu)
        self._check_y(mu, y)
        return kernels.f_eval(self.table(mu), float(y))

    def deriv(self, mu, y):
        self.check_mu(mu)
        self._check_y(mu, y)
        return kernels.f_deriv(self.table(mu), float(y))

    def f(self, mu, y):
        """Unchecked evaluation; arrays allowed."""
        tab = self.table(mu)
        if np.ndim(y):
            return kernels.f_eval_array(tab, y)
        return kernels.f_eval(tab, float(y))

    def df(self, mu, y):
        tab = self.table(mu)
        if np.ndim(y):
            return kernels.f_deriv_array(tab, y)
        return kernels.f_deriv(tab, float(y))

    def iterate(self, mu, y, n):
        """``(f^n(y), d/dy f^n(y))`` by the chain rule."""
        return kernels.deriv_product(self.table(mu), float(y), int(n))

    def in_flow_piece(self, y):
        return self.flow_lo <= y <= self.flow_hi

    # -- inverse --------------------------------------------------------
    def inverse(self, mu, w):
        """``f_mu^{-1}``, vectorised; exact on affine and Moebius pieces."""
        tab = self.table(mu)
        w_arr = np.atleast_1d(np.asarray(w, dtype=float))
        out = np.empty_like(w_arr)
        p, sp, b0, b1, b2, b3 = tab[:6]
        c, d = tab[10], tab[11]
        v_b0 = kernels.f_eval(tab, b0)
        v_b1 = kernels.f_eval(tab, b1)
        v_b2 = kernels.f_eval(tab, b2)
        v_b3 = tab[16]
        m0 = w_arr < v_b0
        m1 = ~m0 & (w_arr < v_b1)
        m2 = ~m0 & ~m1 & (w_arr <= v_b2)
        m3 = ~m0 & ~m1 & ~m2 & (w_arr <= v_b3)
        m4 = ~(m0 | m1 | m2 | m3)
        out[m0] = p + (w_arr[m0] - p) / sp
        out[m1] = _cubic_inverse(tab[6:10], b0, b1, w_arr[m1])
        out[m2] = (w_arr[m2] - c) / (1.0 + d * w_arr[m2])
        out[m3] = _cubic_inverse(tab[12:16], b2, b3, w_arr[m3])
        out[m4] = b3 + (w_arr[m4] - v_b3) / tab[17]
        if np.ndim(w) == 0:
            return float(out[0])
        return out

    # -- certified derivative ranges -----------------------------------
    def deriv_bounds(self, mu, lo, hi):
        """Outward-rounded ``(min, max)`` of ``f_mu'`` over ``[lo, hi]``.

        Exact per piece: affine slopes, the monotone Moebius derivative and
        the quadratic derivative of each cubic.  Arrays broadcast.
        """
        tab = self.table(mu)
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        dmin = np.full(lo.shape, np.inf)
        dmax = np.full(lo.shape, -np.inf)
        p, sp, b0, b1, b2, b3 = tab[:6]

        def take(mask, vals_lo, vals_hi):
            np.minimum(dmin, np.where(mask, vals_lo, np.inf), out=dmin)
            np.maximum(dmax, np.where(mask, vals_hi, -np.inf), out=dmax)

        m = lo < b0
        take(m, sp, sp)
        for (x0, x1, coef) in ((b0, b1, tab[6:10]), (b2, b3, tab[12:16])):
            s0 = np.maximum(lo, x0)
            s1 = np.minimum(hi, x1)
            m = s0 <= s1
            qmin, qmax = _quadratic_range(coef, x0, x1, s0, s1)
            take(m, qmin, qmax)
        s0 = np.maximum(lo, b1)
        s1 = np.minimum(hi, b2)
        m = s0 <= s1
        c, d = tab[10], tab[11]
        num = 1.0 + c * d
        take(m, num / (1.0 - d * s0) ** 2, num / (1.0 - d * s1) ** 2)
        m = hi > b3
        take(m, tab[17], tab[17])
        return dmin * (1.0 - ROUNDING_SLACK), dmax * (1.0 + ROUNDING_SLACK)

    # -- fixed points ---------------------------------------------------
    def fixed_points(self, mu, grid=20001, max_iter=200):
        """Fixed points on ``J_mu`` as ``[(location, type), ...]`` sorted."""
        self.check_mu(mu)
        tab = self.table(mu)
        lo, hi = self.domain(mu)
        ys = np.linspace(lo, hi, grid)
        g = kernels.f_eval_array(tab, ys) - ys
        roots = [self.p]
        if mu == 0:
            roots.append(0.0)
        elif mu < 0:
            k = math.sqrt(-self.core.beta * mu / self.core.alpha)
            roots.extend(r for r in (-k, k) if self.in_flow_piece(r))
        idx = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        for i in idx:
            roots.append(_bracket_root(tab, ys[i], ys[i + 1], max_iter))
        out = []
        for r in sorted(roots):
            r = _newton_polish(tab, r, max_iter)
            if out and abs(out[-1][0] - r) < 1e-9:
                continue
            d = kernels.f_deriv(tab, r)
            if abs(d - 1.0) <= 1e-12:
                kind = "saddle-node"
            elif d > 1.0:
                kind = "repelling"
            else:
                kind = "attracting"
            out.append((float(r), kind))
        return out

    # -- validation -----------------------------------------------------
    def mu_grid(self, n=50, closed=False):
        lo, hi = -self.core.t2, self.core.t1
        if closed:
            return np.linspace(lo, hi, n)
        return np.linspace(lo, hi, n + 2)[1:-1]

    def validate(self, n_mu=50, n_y=10_000):
        return validate(self, n_mu=n_mu, n_y=n_y)


def _cubic_inverse(coef, x0, x1, w, iters=60):
    c0, c1, c2, c3 = coef
    t_lo = np.zeros_like(w)
    t_hi = np.ones_like(w)
    for _ in range(iters):
        t = 0.5 * (t_lo + t_hi)
        v = ((c3 * t + c2) * t + c1) * t + c0
        below = v < w
        t_lo = np.where(below, t, t_lo)
        t_hi = np.where(below, t_hi, t)
    return x0 + 0.5 * (t_lo + t_hi) * (x1 - x0)


def _quadratic_range(coef, x0, x1, s0, s1):
    """Range of the cubic's y-derivative over [s0, s1] inside [x0, x1]."""
    _, c1, c2, c3 = coef
    h = x1 - x0
    t0 = np.clip((s0 - x0) / h, 0.0, 1.0)
    t1 = np.clip((s1 - x0) / h, 0.0, 1.0)

    def q(t):
        return (c1 + 2.0 * c2 * t + 3.0 * c3 * t * t) / h

    vals = [q(t0), q(t1)]
    if c3 != 0:
        tv = -c2 / (3.0 * c3)
        inside = (t0 < tv) & (tv < t1)
        vals.append(np.where(inside, q(tv), q(t0)))
    stack = np.vstack(vals)
    return stack.min(axis=0), stack.max(axis=0)


def _bracket_root(tab, lo, hi, max_iter):
    glo = kernels.f_eval(tab, lo) - lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        gm = kernels.f_eval(tab, mid) - mid
        if gm == 0 or hi - lo < 1e-15:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    raise NumericError("bisection did not converge in %d steps" % max_iter)


def _newton_polish(tab, y, max_iter):
    for _ in range(max_iter):
        g = kernels.f_eval(tab, y) - y
        if abs(g) < 1e-12:
            return y
        dg = kernels.f_deriv(tab, y) - 1.0
        if dg == 0:
            break
        y -= g / dg
    g = kernels.f_eval(tab, y) - y
    if abs(g) < 1e-12:
        return y
    raise NumericError("fixed point residual %.3g after %d steps" % (g, max_iter))


@lru_cache(maxsize=4096)
def _table_full(gm, mu):
    core, ext = gm.core, gm.ext
    c, d = core.mobius(mu)
    p, sp = ext.p, ext.slope_p
    b0 = p + ext.delta2
    b1 = gm.flow_lo
    b2 = gm.flow_hi
    b3 = b2 + ext.blend_width
    if 1.0 - d * b2 <= 0:
        raise ConstructionError("time-one map undefined at the flow piece end "
                                "for mu=%r" % mu)

    def flow(y):
        return (y + c) / (1.0 - d * y)

    def dflow(y):
        return (1.0 + c * d) / (1.0 - d * y) ** 2

    h = b1 - b0
    if h <= 0:
        raise ConstructionError("left blend has non-positive width")
    v0, v1 = p + sp * ext.delta2, flow(b1)
    m0, m1, left_clamped = _clamp_slopes(v0, v1, sp, dflow(b1), h)
    left = _hermite_power(v0, v1, m0, m1, h)
    hr = b3 - b2
    v2, m2 = flow(b2), dflow(b2)
    v3 = v2 + hr * (m2 + ext.slope_right) / 2.0
    right = _hermite_power(v2, v3, m2, ext.slope_right, hr)
    tab = np.array([p, sp, b0, b1, b2, b3, *left, c, d, *right, v3,
                    ext.slope_right], dtype=float)
    tab.setflags(write=False)
    return tab, left_clamped


def _table(gm, mu):
    return _table_full(gm, mu)[0]


def _table_flags(gm, mu):
    return _table_full(gm, mu)[1]


def build(core: SaddleNodeNormalForm, ext: ExtensionSpec | None = None,
          check=True) -> GlobalMap1D:
    """Assemble ``f_mu`` and, unless ``check`` is false, validate it."""
    gm = GlobalMap1D(core, ext or ExtensionSpec())
    if check:
        report = gm.validate()
        if not report.passed:
            names = ", ".join(c.name for c in report.failures)
            raise ConstructionError("global map violates: " + names,
                                    report.failures)
    return gm


def validate(gm: GlobalMap1D, n_mu=50, n_y=10_000) -> ValidationReport:
    """Check every invariant of the global map on dense grids."""
    core, ext = gm.core, gm.ext
    checks = []
    info = {}

    def add(name, ok, detail="", **witness):
        checks.append(InvariantCheck(name, bool(ok), detail, witness))

    add("neighborhood_left_of_core", ext.p + ext.delta2 < -core.delta1,
        "neighborhood overlaps core" if ext.p + ext.delta2 >= -core.delta1 else "",
        p_plus_delta2=ext.p + ext.delta2, minus_delta1=-core.delta1)
    ok = (-core.delta1 < ext.a < 0 < ext.b < core.delta1
          and gm.flow_lo <= ext.a and ext.b <= gm.flow_hi)
    add("fundamental_interval_in_core", ok,
        "" if ok else "fundamental interval must lie in core",
        a=ext.a, b=ext.b, flow_lo=gm.flow_lo, flow_hi=gm.flow_hi)
    widths_ok = ext.blend_width > 0 and gm.flow_lo > ext.p + ext.delta2
    add("blend_widths_positive", widths_ok)
    add("p_tilde_right_of_core", ext.p_tilde > core.delta1,
        "" if ext.p_tilde > core.delta1 else "p_tilde must exceed delta1")
    add("declared_bounds_order", ext.c1 > 1 and 0 < ext.c2 < 1,
        "need c1 > 1 and 0 < c2 < 1")
    if not (widths_ok and checks[0].passed):
        return ValidationReport(checks, info)

    mus = gm.mu_grid(n_mu)
    closed = gm.mu_grid(n_mu, closed=True)
    worst = {"c1": (np.inf, None), "c2": (np.inf, None), "dmax": (-np.inf, None),
             "fixed_p": (0.0, None), "fa_minus_b": (-np.inf, None),
             "ptilde_gap": (np.inf, None), "left_sign": (None, None),
             "right_sign": (None, None), "mono": (np.inf, None)}
    flow_ok = True
    clamped = False
    for mu in closed:
        c, d = core.mobius(mu)
        if 1.0 - d * gm.flow_hi <= 0:
            flow_ok = False
    for mu in mus:
        try:
            tab = gm.table(mu)
        except ConstructionError as exc:
            add("construction", False, str(exc), mu=float(mu))
            return ValidationReport(checks, info)
        clamped = clamped or gm.clamped(mu)
        lo, hi = gm.domain(mu)
        ys = np.linspace(lo, hi, n_y)
        dy = kernels.f_deriv_array(tab, ys)
        fy = kernels.f_eval_array(tab, ys)
        # exact piecewise bounds complement the grid
        dmin_exact, dmax_exact = gm.deriv_bounds(mu, lo, hi)
        i = int(np.argmin(dy))
        if min(dy[i], dmin_exact[0]) < worst["c2"][0]:
            worst["c2"] = (float(min(dy[i], dmin_exact[0])), (float(mu), float(ys[i])))
        if dmax_exact[0] > worst["dmax"][0]:
            worst["dmax"] = (float(dmax_exact[0]), (float(mu), float(ys[np.argmax(dy)])))
        if dy[i] <= 0 and dy[i] < worst["mono"][0]:
            worst["mono"] = (float(dy[i]), (float(mu), float(ys[i])))
        dn, _ = gm.deriv_bounds(mu, ext.p - ext.delta2, ext.p + ext.delta2)
        if dn[0] < worst["c1"][0]:
            worst["c1"] = (float(dn[0]), (float(mu), ext.p))
        res = abs(kernels.f_eval(tab, ext.p) - ext.p)
        if res > worst["fixed_p"][0]:
            worst["fixed_p"] = (res, float(mu))
        fa = kernels.f_eval(tab, ext.a) - ext.b
        if fa > worst["fa_minus_b"][0]:
            worst["fa_minus_b"] = (float(fa), float(mu))
        gap = hi - ext.p_tilde
        if gap < worst["ptilde_gap"][0]:
            worst["ptilde_gap"] = (float(gap), float(mu))
        # left of the core: f(y) - y has the sign of y - p
        left = ys <= -core.delta1
        g = fy[left] - ys[left]
        away = np.abs(ys[left] - ext.p) > 1e-9
        bad = away & (np.sign(g) != np.sign(ys[left] - ext.p))
        if bad.any() and worst["left_sign"][0] is None:
            worst["left_sign"] = (float(ys[left][bad][0]), float(mu))
        if mu > 0:
            right = ys > ext.p + 1e-9
            if (fy[right] - ys[right] <= 0).any() and worst["right_sign"][0] is None:
                j = np.nonzero(fy[right] - ys[right] <= 0)[0][0]
                worst["right_sign"] = (float(ys[right][j]), float(mu))

    add("flow_piece_defined", flow_ok,
        "" if flow_ok else "time-one map blows up on the flow piece")
    add("monotone", worst["mono"][1] is None and not clamped,
        "" if not clamped else "blend slopes were clamped (map only C^0)",
        witness=worst["mono"][1])
    c1_ok = worst["c1"][0] >= ext.c1 + SAFETY_MARGIN
    add("c1_bound", c1_ok,
        "" if c1_ok else "derivative near p below c1 + margin",
        min_derivative=worst["c1"][0], at=worst["c1"][1])
    c2_ok = worst["c2"][0] >= ext.c2 + SAFETY_MARGIN
    add("c2_bound", c2_ok,
        "" if c2_ok else "declared c2 exceeds the true minimum minus margin",
        min_derivative=worst["c2"][0], at=worst["c2"][1])
    add("p_is_fixed", worst["fixed_p"][0] < 1e-12, residual=worst["fixed_p"][0])
    add("no_other_fixed_points_left", worst["left_sign"][0] is None,
        witness=worst["left_sign"])
    add("no_fixed_points_for_positive_mu", worst["right_sign"][0] is None,
        witness=worst["right_sign"])
    add("f_a_below_b", worst["fa_minus_b"][0] < 0,
        max_f_a_minus_b=worst["fa_minus_b"][0], mu=worst["fa_minus_b"][1])
    add("f_p_tilde_above_p_tilde", worst["ptilde_gap"][0] > 0,
        min_gap=worst["ptilde_gap"][0])
    zero = math.sqrt(core.beta * core.t2 / core.alpha)
    add("zeros_inside_fundamental_interval", ext.a < -zero and zero < ext.b,
        "" if ext.a < -zero and zero < ext.b else "s_mu, q_mu must lie in (a, b)",
        largest_zero=zero)
    info["max_derivative"] = worst["dmax"][0]
    info["min_derivative"] = worst["c2"][0]
    info["min_derivative_near_p"] = worst["c1"][0]
    return ValidationReport(checks, info)

"""Planar horseshoe family on ``D = S1 u R u S2``.

``R = [p - delta2, F]^2`` with ``F = f(p_tilde)``.  Two horizontal strips
of ``R`` are mapped across it:

* ``H``  (``y in [f^{-1}(p - delta2), p_tilde]``) by the skew product
  ``(lambda*(x - p) + p, f(y))``;
* ``H~`` (``y in [l, l~]``) by the flip ``(-lambda*(x - p) + p + off,
  -sigma~*(y - l) + F)``.

Everything else in ``R`` and the two semidisks is sent into ``S1`` where a
sink lives.  That part is only for pictures and orbit export.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (DomainError, GeometryError, NoJacobianError,
                     NoPreimageError, WrongParameterError)
from .escape_analysis import EscapeConstants, compute_constants
from .global_map import GlobalMap1D, InvariantCheck

H, H_TILDE, GAP, EDGE, S1, S2, OUTSIDE = (
    "H", "H_tilde", "GAP", "EDGE", "S1", "S2", "OUTSIDE")
STRIPS = (H, H_TILDE)


@dataclass(frozen=True)
class Geometry:
    """Per-``mu`` rectangle and strip bounds."""

    mu: float
    lo: float          # p - delta2
    top: float         # F = f(p_tilde)
    h_lo: float        # f^{-1}(p - delta2)
    h_hi: float        # p_tilde
    l: float
    l_tilde: float
    x_offset: float
    cx: float          # semidisk centre abscissa
    radius: float

    @property
    def strip_width(self):
        return self.l_tilde - self.l

    def as_dict(self):
        return {"mu": self.mu, "R": [self.lo, self.top], "H": [self.h_lo, self.h_hi],
                "H_tilde": [self.l, self.l_tilde], "x_offset": self.x_offset,
                "semidisk_centre": self.cx, "semidisk_radius": self.radius}


@dataclass(frozen=True)
class HorseshoeMap2D:
    base: GlobalMap1D
    consts: EscapeConstants
    lam: float
    sigma_tilde: float
    zeta: float
    column_centre: float = 0.75

    @property
    def p(self):
        return self.base.p

    def geometry(self, mu) -> Geometry:
        return _geometry(self, float(mu))

    # -- regions --------------------------------------------------------
    def classify(self, mu, point):
        x, y = point
        g = self.geometry(mu)
        if g.lo <= y <= g.top:
            if not (g.lo <= x <= g.top):
                return OUTSIDE
            if g.h_lo <= y <= g.h_hi:
                return H
            if g.l <= y <= g.l_tilde:
                return H_TILDE
            if g.h_hi < y < g.l:
                return GAP
            return EDGE
        centre = g.lo if y < g.lo else g.top
        if (x - g.cx) ** 2 + (y - centre) ** 2 <= g.radius ** 2:
            return S1 if y < g.lo else S2
        return OUTSIDE

    def h_tilde_x(self, mu, x):
        return -self.lam * (x - self.p) + self.p + self.geometry(mu).x_offset

    def apply(self, mu, point):
        x, y = point
        g = self.geometry(mu)
        region = self.classify(mu, point)
        if region == H:
            return (self.lam * (x - self.p) + self.p, self.base.f(mu, y))
        if region == H_TILDE:
            return (self.h_tilde_x(mu, x), -self.sigma_tilde * (y - g.l) + g.top)
        if region == EDGE and y < g.h_lo:
            # continues the skew product; lands just below R
            return (self.lam * (x - self.p) + self.p, self.base.f(mu, y))
        if region in (GAP, EDGE):
            if y < g.l:
                t = (y - g.h_hi) / (g.l - g.h_hi)
            else:
                t = (y - g.l_tilde) / (g.top - g.l_tilde)
            u = (x - g.cx) / g.radius
            ang = math.pi * t
            return (g.cx + g.radius * (0.5 * math.cos(ang) + 0.1 * u),
                    g.top + g.radius * (0.25 + 0.5 * math.sin(ang)))
        if region == S2:
            return (g.cx + 0.5 * (x - g.cx), g.lo - (y - g.top))
        if region == S1:
            sx, sy = self.sink(mu)
            return (sx + 0.5 * (x - sx), sy + 0.5 * (y - sy))
        raise DomainError("point %r is outside D_mu" % (point,))

    def sink(self, mu):
        g = self.geometry(mu)
        return g.cx, g.lo - 0.5 * g.radius

    def jacobian(self, mu, point):
        region = self.classify(mu, point)
        if region == H:
            return np.array([[self.lam, 0.0], [0.0, self.base.df(mu, point[1])]])
        if region == H_TILDE:
            return np.array([[-self.lam, 0.0], [0.0, -self.sigma_tilde]])
        raise NoJacobianError("no certified Jacobian in region %s" % region)

    def columns(self, mu):
        """x-ranges of the images of H and of H~."""
        g = self.geometry(mu)
        h_col = (self.lam * (g.lo - self.p) + self.p, self.lam * (g.top - self.p) + self.p)
        t_col = (self.h_tilde_x(mu, g.top), self.h_tilde_x(mu, g.lo))
        return h_col, t_col

    def apply_inverse(self, mu, point):
        x, y = point
        g = self.geometry(mu)
        if not (g.lo <= y <= g.top):
            raise NoPreimageError("point %r has no preimage in R" % (point,))
        h_col, t_col = self.columns(mu)
        if h_col[0] <= x <= h_col[1]:
            return (self.p + (x - self.p) / self.lam, self.base.inverse(mu, y))
        if t_col[0] <= x <= t_col[1]:
            return (self.p - (x - self.p - g.x_offset) / self.lam,
                    g.l - (y - g.top) / self.sigma_tilde)
        raise NoPreimageError("point %r has no preimage in R" % (point,))

    # -- vectorised strip dynamics (used by sampling checks) -----------
    def strip_step(self, mu, xs, ys):
        """Forward map on ``H u H~``; returns ``(x, y, ok)`` where ``ok``
        marks points that started in one of the strips."""
        g = self.geometry(mu)
        in_r = (xs >= g.lo) & (xs <= g.top)
        in_h = in_r & (ys >= g.h_lo) & (ys <= g.h_hi)
        in_t = in_r & (ys >= g.l) & (ys <= g.l_tilde)
        nx = np.where(in_t, -self.lam * (xs - self.p) + self.p + g.x_offset,
                      self.lam * (xs - self.p) + self.p)
        ny = np.where(in_t, -self.sigma_tilde * (ys - g.l) + g.top,
                      self.base.f(mu, np.clip(ys, g.lo, g.top)))
        return nx, ny, in_h | in_t

    def strip_step_inverse(self, mu, xs, ys):
        """Inverse of :meth:`strip_step` on the two image columns."""
        g = self.geometry(mu)
        h_col, t_col = self.columns(mu)
        in_y = (ys >= g.lo) & (ys <= g.top)
        in_h = in_y & (xs >= h_col[0]) & (xs <= h_col[1])
        in_t = in_y & (xs >= t_col[0]) & (xs <= t_col[1])
        yc = np.clip(ys, g.lo, g.top)
        px = np.where(in_t, self.p - (xs - self.p - g.x_offset) / self.lam,
                      self.p + (xs - self.p) / self.lam)
        py = np.where(in_t, g.l - (yc - g.top) / self.sigma_tilde,
                      self.base.inverse(mu, yc))
        return px, py, in_h | in_t

    # -- fixed points ---------------------------------------------------
    def saddle_node_point(self, mu=0.0):
        """``chi = (p, 0)`` and its eigenvalues ``(lambda, 1)`` at mu = 0."""
        if mu != 0:
            raise WrongParameterError("the saddle-node point exists only at mu=0")
        chi = (self.p, 0.0)
        return chi, (self.lam, self.base.df(0.0, 0.0))

    def fixed_points(self, mu):
        """Fixed points in ``H u H~`` as ``[(point, eigenvalues, kind)]``."""
        out = []
        g = self.geometry(mu)
        for y, kind in self.base.fixed_points(mu):
            if g.h_lo <= y <= g.h_hi:
                out.append(((self.p, y), (self.lam, self.base.df(mu, y)), kind))
        lam, st = self.lam, self.sigma_tilde
        x = (self.p + g.x_offset + lam * self.p) / (1.0 + lam)
        y = (st * g.l + g.top) / (1.0 + st)
        out.append(((x, y), (-lam, -st), "saddle"))
        return out

    # -- orbits ---------------------------------------------------------
    def orbit(self, mu, point, n):
        """Rows ``(step, region, x, y)``; a final ``escaped`` row is added
        when the orbit ever leaves ``H u H~``."""
        rows = []
        x, y = point
        left_at = None
        for k in range(n + 1):
            region = self.classify(mu, (x, y))
            rows.append((k, region, x, y))
            if region == OUTSIDE:
                break
            if region not in STRIPS and left_at is None:
                left_at = k
            if k < n:
                x, y = self.apply(mu, (x, y))
        if left_at is not None:
            _, _, ex, ey = rows[left_at]
            rows.append((left_at, "escaped", ex, ey))
        return rows

    # -- invariants -----------------------------------------------------
    def verify(self, mu_grid=None):
        c = self.consts
        checks = []
        prod = self.sigma_tilde * c.sigma1 * c.sigma2 * c.sigma3
        checks.append(InvariantCheck(
            "expansion_product", prod >= self.zeta > 1,
            "" if prod >= self.zeta > 1 else "sigma~*sigma1*sigma2*sigma3 >= zeta > 1 violated",
            {"product": prod, "zeta": self.zeta}))
        bound = min(self.base.c2 / 2.0, 1.0 / self.zeta)
        ok = 0 < self.lam < bound
        checks.append(InvariantCheck(
            "lambda_bound", ok, "" if ok else "lambda < min{c2/2, 1/zeta} violated",
            {"lambda": self.lam, "bound": bound}))
        if mu_grid is None:
            mu_grid = self.base.mu_grid(50)
        worst = {"width": None, "order": None, "fixed": None, "cols": None}
        for mu in mu_grid:
            try:
                g = self.geometry(mu)
            except GeometryError:
                worst["width"] = worst["width"] or float(mu)
                continue
            if not g.strip_width < g.top - self.base.p_tilde:
                worst["width"] = worst["width"] or float(mu)
            if not (self.base.p_tilde < g.l < g.l_tilde < g.top
                    and abs(g.strip_width - (g.top - g.lo) / self.sigma_tilde) <= 1e-12):
                worst["order"] = worst["order"] or float(mu)
            px, py = self.apply(mu, (self.p, self.p))
            if (abs(px - self.p) > 1e-12 or abs(py - self.p) > 1e-12
                    or self.base.df(mu, self.p) <= self.base.c1):
                worst["fixed"] = worst["fixed"] or float(mu)
            h_col, t_col = self.columns(mu)
            if not (g.lo <= h_col[0] and h_col[1] < t_col[0] and t_col[1] <= g.top):
                worst["cols"] = worst["cols"] or float(mu)
        names = {"width": "strip_width", "order": "strip_order",
                 "fixed": "saddle_p", "cols": "image_columns_disjoint"}
        for key, name in names.items():
            checks.append(InvariantCheck(name, worst[key] is None, "",
                                         {"mu": worst[key]}))
        return checks


def _geometry_raw(h: HorseshoeMap2D, mu):
    base = h.base
    lo = base.p - base.delta2
    top = base.upper(mu)
    width = (top - lo) / h.sigma_tilde
    room = top - base.p_tilde
    if width >= room:
        raise GeometryError("strip of width %.6g does not fit in (p_tilde, F) "
                            "at mu=%r" % (width, mu))
    l = base.p_tilde + 0.5 * (room - width)
    target = lo + h.column_centre * (top - lo)
    off = target - h.p + h.lam * (0.5 * (lo + top) - h.p)
    return Geometry(mu=mu, lo=lo, top=top, h_lo=float(base.inverse(mu, lo)),
                    h_hi=base.p_tilde, l=l, l_tilde=l + width, x_offset=off,
                    cx=0.5 * (lo + top), radius=0.5 * (top - lo))


@lru_cache(maxsize=4096)
def _geometry(h, mu):
    return _geometry_raw(h, mu)


def strip_width_bound(base: GlobalMap1D, mu_grid=None):
    """Least sigma~ making every strip fit: ``max (F - lo)/(F - p_tilde)``."""
    if mu_grid is None:
        mu_grid = base.mu_grid(200, closed=True)
    lo = base.p - base.delta2
    best = 0.0
    for mu in mu_grid:
        top = base.upper(mu)
        best = max(best, (top - lo) / (top - base.p_tilde))
    return best


def solve_constants(base: GlobalMap1D, zeta=2.0, headroom=1.25,
                    lambda_factor=0.5, consts: EscapeConstants | None = None,
                    lam=None, sigma_tilde=None, column_centre=0.75,
                    check=True) -> HorseshoeMap2D:
    """Choose ``sigma~`` and ``lambda`` and verify the horseshoe invariants.

    ``lam`` and ``sigma_tilde`` override the automatic choice; the result is
    still verified, so bad overrides raise :class:`GeometryError`.
    """
    if not zeta > 1:
        raise GeometryError("zeta must exceed 1")
    if consts is None:
        consts = compute_constants(base)
    if sigma_tilde is None:
        need = zeta / (consts.sigma1 * consts.sigma2 * consts.sigma3)
        sigma_tilde = max(need, strip_width_bound(base)) * headroom
    if lam is None:
        lam = lambda_factor * min(base.c2 / 2.0, 1.0 / zeta)
    h = HorseshoeMap2D(base, consts, float(lam), float(sigma_tilde), float(zeta),
                       column_centre)
    if check:
        bad = [c for c in h.verify() if not c.passed]
        if bad:
            err = GeometryError("horseshoe invariants violated: "
                                + "; ".join(c.detail or c.name for c in bad))
            err.failures = bad
            raise err
    return h

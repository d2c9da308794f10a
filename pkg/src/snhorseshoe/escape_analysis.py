"""Passage and escape counts with their uniform derivative lower bounds.

Three regions of the line are crossed by every orbit that returns to the
repeller's neighbourhood: the fundamental interval ``I = [a, b]`` (slow
passage near the saddle-node ghost), the gap ``[p + delta2, a)`` on the
left and the gap ``(b, f(p_tilde)]`` on the right.  For each we compute the
iteration count and a lower bound of the derivative of the composed map.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import (BasinError, BudgetError, DegenerateGapError, DomainError,
                     ScopeError)
from .global_map import SAFETY_MARGIN, GlobalMap1D

DEFAULT_BUDGET = 100_000_000
ESCAPE_CAP = 10_000_000
GAP_FLOOR = 1e-9


@dataclass(frozen=True)
class EscapeConstants:
    sigma0: float
    sigma1: float
    r: float
    m_cap: int
    sigma2: float
    r_tilde: float
    m_tilde_cap: int
    sigma3: float
    c2: float

    def as_dict(self):
        return asdict(self)


def passage_count(g: GlobalMap1D, mu, budget=DEFAULT_BUDGET):
    """``n(mu) = min{n : f^n(a) >= b}``."""
    if not (0 < mu < g.core.t1):
        raise DomainError("passage count needs 0 < mu < t1, got %r" % mu)
    n = kernels.passage_count(g.table(mu), g.a, g.b, int(budget))
    if n < 0:
        raise BudgetError("n(mu) exceeds the budget %d at mu=%r" % (budget, mu))
    return int(n)


def flow_ratio(g: GlobalMap1D, mu, y, n):
    """Chain-rule derivative of the n-fold flow map and ``Y(f^n y)/Y(y)``.

    Uses the time-one map of the field itself (no extension pieces), so the
    two numbers agree up to rounding whenever the orbit exists.
    """
    core = g.core
    c, d = core.mobius(mu)
    prod = 1.0
    z = y
    for _ in range(n):
        den = 1.0 - d * z
        if den <= 0:
            raise ScopeError("flow orbit of %r blows up" % y)
        prod *= (1.0 + c * d) / (den * den)
        z = (z + c) / den
    return prod, core.field(mu, z) / core.field(mu, y)


def prop1_bound(g: GlobalMap1D, mu, y, n=None):
    """``(d/dy f^{n(mu)}(y), Y(f^{n(mu)} y)/Y(y))`` along the global map.

    Every point at which a derivative is taken must lie in the flow piece.
    """
    if not (g.a <= y <= g.b):
        raise DomainError("y=%r outside [a, b]" % y)
    if n is None:
        n = passage_count(g, mu)
    tab = g.table(mu)
    prod = 1.0
    z = float(y)
    for _ in range(n):
        if not g.in_flow_piece(z):
            raise ScopeError("orbit of %r leaves the flow piece at %r" % (y, z))
        prod *= kernels.f_deriv(tab, z)
        z = kernels.f_eval(tab, z)
    return prod, g.core.field(mu, z) / g.core.field(mu, y)


def escape_below(g: GlobalMap1D, mu, y):
    """Least ``m`` with ``f^m(y) >= a`` and the derivative of ``f^m`` at y."""
    g.check_mu(mu)
    if not (g.p + g.delta2 <= y < g.a):
        raise DomainError("y=%r outside [p + delta2, a)" % y)
    m, prod = kernels.escape_count(g.table(mu), float(y), g.a, False, ESCAPE_CAP)
    if m < 0:
        raise BudgetError("no escape below within %d steps" % ESCAPE_CAP)
    return int(m), prod


def escape_above(g: GlobalMap1D, mu, y):
    """Least ``m`` with ``f^m(y) > f(p_tilde)`` and the derivative of ``f^m``."""
    g.check_mu(mu)
    top = g.upper(mu)
    if not (g.b < y <= top):
        raise DomainError("y=%r outside (b, f(p_tilde)]" % y)
    if mu < 0:
        q = g.core.field_zeros(mu)[1]
        if y <= q:
            raise BasinError("y=%r <= q_mu=%r is attracted to s_mu" % (y, q))
    m, prod = kernels.escape_count(g.table(mu), float(y), top, True, ESCAPE_CAP)
    if m < 0:
        raise BudgetError("no escape above within %d steps" % ESCAPE_CAP)
    return int(m), prod


def constants_mu_grid(g: GlobalMap1D, n=201, refine=12):
    """Closed ``mu`` grid with geometric refinement towards both ends."""
    lo, hi = -g.core.t2, g.core.t1
    base = np.linspace(lo, hi, n)
    steps = (hi - lo) * np.logspace(-8, -2, refine)
    return np.unique(np.concatenate([base, lo + steps, hi - steps, [0.0]]))


def sigma0(g: GlobalMap1D):
    """``inf_{0 < mu < t1} Y(b)/Y(a)``; monotone in mu so an endpoint wins."""
    core = g.core

    def ratio(mu):
        return (core.alpha * g.b ** 2 + core.beta * mu) / (core.alpha * g.a ** 2 + core.beta * mu)

    return min(ratio(0.0), ratio(core.t1))


def compute_constants(g: GlobalMap1D, n_y=5001) -> EscapeConstants:
    s0 = sigma0(g)
    r = r_t = math.inf
    top_max = -math.inf
    left = np.linspace(g.p + g.delta2, g.a, n_y)[:-1]
    for mu in constants_mu_grid(g):
        tab = g.table(mu)
        r = min(r, float(np.min(kernels.f_eval_array(tab, left) - left)))
        top = kernels.f_eval(tab, g.p_tilde)
        top_max = max(top_max, top)
        right = np.linspace(g.b, top, n_y)[1:]
        r_t = min(r_t, float(np.min(kernels.f_eval_array(tab, right) - right)))
    if r < GAP_FLOOR or r_t < GAP_FLOOR:
        raise DegenerateGapError("identity distance %.3g / %.3g below %.0e"
                                 % (r, r_t, GAP_FLOOR))
    r *= 1.0 - SAFETY_MARGIN
    r_t *= 1.0 - SAFETY_MARGIN
    m_cap = int((g.a - (g.p + g.delta2)) / r)
    mt_cap = int((top_max - g.b) / r_t)
    c2 = g.c2
    return EscapeConstants(sigma0=s0, sigma1=min(s0, 1.0), r=r, m_cap=m_cap,
                           sigma2=c2 ** (m_cap + 1), r_tilde=r_t,
                           m_tilde_cap=mt_cap, sigma3=c2 ** (mt_cap + 1), c2=c2)


def intermittency_scaling(g: GlobalMap1D, mu_list, budget=DEFAULT_BUDGET):
    """Rows ``(mu, n(mu), n(mu)*sqrt(mu), T(mu)*sqrt(mu))``.

    ``T`` is the exact flow time from a to b, the continuous counterpart of
    the passage count.
    """
    rows = []
    for mu in mu_list:
        n = passage_count(g, mu, budget)
        t = g.core.passage_time(mu, g.a, g.b)
        s = math.sqrt(mu)
        rows.append((float(mu), n, n * s, t * s))
    return rows

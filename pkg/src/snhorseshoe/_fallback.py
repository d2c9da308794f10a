"""Pure-Python kernels.  Same signatures as the compiled ``_kernels`` module.

``tab`` is the 18-entry piece table produced by
:meth:`snhorseshoe.global_map.GlobalMap1D.table`:

    0 p        1 slope_p   2 b0 (end of left affine)   3 b1 (flow start)
    4 b2 (flow end)        5 b3 (end of right blend)
    6..9   left cubic, power basis in t = (y - b0)/(b1 - b0)
    10 c   11 d            flow piece (y + c)/(1 - d*y)
    12..15 right cubic, power basis in t = (y - b2)/(b3 - b2)
    16 value at b3         17 right slope
"""

import numpy as np


def f_eval(tab, y):
    if y < tab[2]:
        return tab[0] + tab[1] * (y - tab[0])
    if y < tab[3]:
        t = (y - tab[2]) / (tab[3] - tab[2])
        return ((tab[9] * t + tab[8]) * t + tab[7]) * t + tab[6]
    if y <= tab[4]:
        return (y + tab[10]) / (1.0 - tab[11] * y)
    if y <= tab[5]:
        t = (y - tab[4]) / (tab[5] - tab[4])
        return ((tab[15] * t + tab[14]) * t + tab[13]) * t + tab[12]
    return tab[16] + tab[17] * (y - tab[5])


def f_deriv(tab, y):
    if y < tab[2]:
        return tab[1]
    if y < tab[3]:
        h = tab[3] - tab[2]
        t = (y - tab[2]) / h
        return ((3.0 * tab[9] * t + 2.0 * tab[8]) * t + tab[7]) / h
    if y <= tab[4]:
        den = 1.0 - tab[11] * y
        return (1.0 + tab[10] * tab[11]) / (den * den)
    if y <= tab[5]:
        h = tab[5] - tab[4]
        t = (y - tab[4]) / h
        return ((3.0 * tab[15] * t + 2.0 * tab[14]) * t + tab[13]) / h
    return tab[17]


def f_eval_array(tab, ys):
    ys = np.asarray(ys, dtype=float)
    out = np.empty_like(ys)
    m0 = ys < tab[2]
    m1 = ~m0 & (ys < tab[3])
    m2 = ~m0 & ~m1 & (ys <= tab[4])
    m3 = ~m0 & ~m1 & ~m2 & (ys <= tab[5])
    m4 = ~(m0 | m1 | m2 | m3)
    out[m0] = tab[0] + tab[1] * (ys[m0] - tab[0])
    t = (ys[m1] - tab[2]) / (tab[3] - tab[2])
    out[m1] = ((tab[9] * t + tab[8]) * t + tab[7]) * t + tab[6]
    out[m2] = (ys[m2] + tab[10]) / (1.0 - tab[11] * ys[m2])
    t = (ys[m3] - tab[4]) / (tab[5] - tab[4])
    out[m3] = ((tab[15] * t + tab[14]) * t + tab[13]) * t + tab[12]
    out[m4] = tab[16] + tab[17] * (ys[m4] - tab[5])
    return out


def f_deriv_array(tab, ys):
    ys = np.asarray(ys, dtype=float)
    out = np.empty_like(ys)
    m0 = ys < tab[2]
    m1 = ~m0 & (ys < tab[3])
    m2 = ~m0 & ~m1 & (ys <= tab[4])
    m3 = ~m0 & ~m1 & ~m2 & (ys <= tab[5])
    m4 = ~(m0 | m1 | m2 | m3)
    out[m0] = tab[1]
    h = tab[3] - tab[2]
    t = (ys[m1] - tab[2]) / h
    out[m1] = ((3.0 * tab[9] * t + 2.0 * tab[8]) * t + tab[7]) / h
    den = 1.0 - tab[11] * ys[m2]
    out[m2] = (1.0 + tab[10] * tab[11]) / (den * den)
    h = tab[5] - tab[4]
    t = (ys[m3] - tab[4]) / h
    out[m3] = ((3.0 * tab[15] * t + 2.0 * tab[14]) * t + tab[13]) / h
    out[m4] = tab[17]
    return out


def deriv_product(tab, y, n):
    """``(f^n(y), d/dy f^n(y))`` by the chain rule."""
    tab = tuple(tab)
    prod = 1.0
    for _ in range(n):
        prod *= f_deriv(tab, y)
        y = f_eval(tab, y)
    return y, prod


def passage_count(tab, a, b, budget):
    """Least n with f^n(a) >= b, or -1 when the budget runs out."""
    tab = tuple(tab)
    y = a
    n = 0
    while y < b:
        if n >= budget:
            return -1
        y = f_eval(tab, y)
        n += 1
    return n


def escape_count(tab, y, target, strict, cap):
    """Least m >= 1 with f^m(y) >= target (> target if strict).

    Returns ``(m, d/dy f^m(y))``; ``m == -1`` when the cap is hit.
    """
    tab = tuple(tab)
    prod = 1.0
    m = 0
    while True:
        prod *= f_deriv(tab, y)
        y = f_eval(tab, y)
        m += 1
        if (y > target) if strict else (y >= target):
            return m, prod
        if m >= cap:
            return -1, prod


def orbit_log_products(tab, ys, n):
    """Cumulative log|f'| along forward orbits of many starting points.

    Returns an array of shape ``(n, len(ys))``; row k holds log d/dy f^(k+1).
    """
    y = np.array(ys, dtype=float)
    out = np.empty((n, y.size))
    acc = np.zeros(y.size)
    for k in range(n):
        acc += np.log(f_deriv_array(tab, y))
        out[k] = acc
        y = f_eval_array(tab, y)
    return out


def minplus_step(indptr, indices, logd, cur):
    """One min-plus relaxation over a successor graph in CSR form.

    ``new[i] = logd[i] + min_{j in succ(i)} cur[j]``; returns ``(new, best)``
    with ``best[i]`` the minimising successor (-1 and ``inf`` for sinks).
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    n = indptr.size - 1
    deg = np.diff(indptr)
    has = deg > 0
    best = np.full(n, -1, dtype=np.int64)
    new = np.full(n, np.inf)
    if indices.size:
        vals = np.asarray(cur)[indices]
        order = np.lexsort((vals, np.repeat(np.arange(n), deg)))
        pos = order[indptr[:-1][has]]
        best[has] = indices[pos]
        new[has] = np.asarray(logd)[has] + vals[pos]
    return new, best


def minplus_values(indptr, indices, logd, steps):
    """``W_steps`` of :func:`minplus_first_hit` for every node."""
    indptr = np.asarray(indptr, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    logd = np.asarray(logd, dtype=float)
    n = logd.size
    has = np.diff(indptr) > 0
    starts = indptr[:-1][has]
    cur = np.zeros(n)
    for _ in range(steps):
        new = np.full(n, np.inf)
        if indices.size:
            new[has] = logd[has] + np.minimum.reduceat(cur[indices], starts)
        cur = new
    return cur

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_fallback.py`` for the table layout and semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, INFINITY

cnp.import_array()


cdef inline double _eval(const double[::1] t, double y) noexcept nogil:
    cdef double s
    if y < t[2]:
        return t[0] + t[1] * (y - t[0])
    if y < t[3]:
        s = (y - t[2]) / (t[3] - t[2])
        return ((t[9] * s + t[8]) * s + t[7]) * s + t[6]
    if y <= t[4]:
        return (y + t[10]) / (1.0 - t[11] * y)
    if y <= t[5]:
        s = (y - t[4]) / (t[5] - t[4])
        return ((t[15] * s + t[14]) * s + t[13]) * s + t[12]
    return t[16] + t[17] * (y - t[5])


cdef inline double _deriv(const double[::1] t, double y) noexcept nogil:
    cdef double s, h, den
    if y < t[2]:
        return t[1]
    if y < t[3]:
        h = t[3] - t[2]
        s = (y - t[2]) / h
        return ((3.0 * t[9] * s + 2.0 * t[8]) * s + t[7]) / h
    if y <= t[4]:
        den = 1.0 - t[11] * y
        return (1.0 + t[10] * t[11]) / (den * den)
    if y <= t[5]:
        h = t[5] - t[4]
        s = (y - t[4]) / h
        return ((3.0 * t[15] * s + 2.0 * t[14]) * s + t[13]) / h
    return t[17]


def f_eval(const double[::1] tab, double y):
    return _eval(tab, y)


def f_deriv(const double[::1] tab, double y):
    return _deriv(tab, y)


def f_eval_array(const double[::1] tab, ys):
    cdef const double[::1] y = np.ascontiguousarray(ys, dtype=np.float64).ravel()
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(y.shape[0]):
            o[i] = _eval(tab, y[i])
    return out.reshape(np.shape(ys))


def f_deriv_array(const double[::1] tab, ys):
    cdef const double[::1] y = np.ascontiguousarray(ys, dtype=np.float64).ravel()
    out = np.empty(y.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(y.shape[0]):
            o[i] = _deriv(tab, y[i])
    return out.reshape(np.shape(ys))


def deriv_product(const double[::1] tab, double y, long n):
    cdef double prod = 1.0
    cdef long k
    with nogil:
        for k in range(n):
            prod *= _deriv(tab, y)
            y = _eval(tab, y)
    return y, prod


def passage_count(const double[::1] tab, double a, double b, long budget):
    cdef double y = a
    cdef long n = 0
    with nogil:
        while y < b:
            if n >= budget:
                n = -1
                break
            y = _eval(tab, y)
            n += 1
    return n


def escape_count(const double[::1] tab, double y, double target, bint strict, long cap):
    cdef double prod = 1.0
    cdef long m = 0
    with nogil:
        while True:
            prod *= _deriv(tab, y)
            y = _eval(tab, y)
            m += 1
            if (strict and y > target) or (not strict and y >= target):
                break
            if m >= cap:
                m = -1
                break
    return m, prod


def orbit_log_products(const double[::1] tab, ys, long n):
    y0 = np.array(ys, dtype=np.float64).ravel()
    cdef double[::1] y = y0
    cdef Py_ssize_t m = y.shape[0]
    out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef double acc
    cdef double yy
    cdef Py_ssize_t i
    cdef long k
    with nogil:
        for i in range(m):
            acc = 0.0
            yy = y[i]
            for k in range(n):
                acc += log(_deriv(tab, yy))
                o[k, i] = acc
                yy = _eval(tab, yy)
    return out


def minplus_step(indptr_in, indices_in, logd_in, cur_in):
    cdef const cnp.int64_t[::1] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef const cnp.int64_t[::1] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef const double[::1] logd = np.ascontiguousarray(logd_in, dtype=np.float64)
    cdef const double[::1] cur = np.ascontiguousarray(cur_in, dtype=np.float64)
    cdef Py_ssize_t n = indptr.shape[0] - 1
    new_a = np.empty(n)
    best_a = np.empty(n, dtype=np.int64)
    cdef double[::1] new = new_a
    cdef cnp.int64_t[::1] best = best_a
    cdef Py_ssize_t i, e
    cdef cnp.int64_t b
    cdef double bv, v
    with nogil:
        for i in range(n):
            b = -1
            bv = INFINITY
            for e in range(indptr[i], indptr[i + 1]):
                v = cur[indices[e]]
                if b < 0 or v < bv:
                    bv = v
                    b = indices[e]
            best[i] = b
            new[i] = (logd[i] + bv) if b >= 0 else INFINITY
    return new_a, best_a


def minplus_values(indptr_in, indices_in, logd_in, long steps):
    cdef const cnp.int64_t[::1] indptr = np.ascontiguousarray(indptr_in, dtype=np.int64)
    cdef const cnp.int64_t[::1] indices = np.ascontiguousarray(indices_in, dtype=np.int64)
    cdef const double[::1] logd = np.ascontiguousarray(logd_in, dtype=np.float64)
    cdef Py_ssize_t n = logd.shape[0]
    cur_a = np.zeros(n)
    new_a = np.zeros(n)
    cdef double[::1] cur = cur_a
    cdef double[::1] new = new_a
    cdef Py_ssize_t i, e
    cdef long k
    cdef double bv
    with nogil:
        for k in range(steps):
            for i in range(n):
                bv = INFINITY
                for e in range(indptr[i], indptr[i + 1]):
                    if cur[indices[e]] < bv:
                        bv = cur[indices[e]]
                new[i] = logd[i] + bv
            for i in range(n):
                cur[i] = new[i]
    return cur_a

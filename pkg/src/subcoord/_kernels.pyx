# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: objective sections and the ratio grid.

Mirrors ``_kernels_py.py`` operation for operation; the two must stay
bit-identical (see tests/test_backends.py).
"""
import numpy as np

from libc.math cimport INFINITY, expm1, sqrt

cdef int ONE_MINUS_EXP = 0
cdef int SQRT_SHIFT = 1


def ratio_grid(double a, double b, double eps):
    cdef list points = []
    cdef double z = a
    while z <= b:
        points.append(z)
        z = z + sqrt(eps * z)
    if points[len(points) - 1] != b:  # wraparound is off
        points.append(b)
    return np.array(points, dtype=np.float64)


cdef double _quad(const double[::1] c, const double[:, ::1] Q, double* x, Py_ssize_t n) noexcept nogil:
    cdef double total = 0.0
    cdef double s
    cdef Py_ssize_t i, j
    for i in range(n):
        s = 0.0
        for j in range(n):
            s += Q[i, j] * x[j]
        total += x[i] * (c[i] + 0.5 * s)
    return total


cdef double _clin(const double[::1] w, int kind, double* x, Py_ssize_t n) noexcept nogil:
    cdef double t = 0.0
    cdef Py_ssize_t k
    for k in range(n):
        t += w[k] * x[k]
    if kind == ONE_MINUS_EXP:
        return -expm1(-t)
    return t / (sqrt(t + 1.0) + 1.0)


def quad_value(const double[::1] c, const double[:, ::1] Q, x):
    cdef double[::1] pt = np.array(x, dtype=np.float64)
    return _quad(c, Q, &pt[0], pt.shape[0]) if pt.shape[0] else 0.0


def quad_section(const double[::1] c, const double[:, ::1] Q, x, Py_ssize_t i, const double[::1] ys):
    cdef double[::1] pt = np.array(x, dtype=np.float64)
    cdef Py_ssize_t m = ys.shape[0], n = pt.shape[0], k
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    cdef double xi = pt[i]
    with nogil:
        for k in range(m):
            pt[i] = xi + ys[k]
            res[k] = _quad(c, Q, &pt[0], n)
    return out


def clin_value(const double[::1] w, int kind, x):
    cdef double[::1] pt = np.array(x, dtype=np.float64)
    if pt.shape[0] == 0:
        return _clin(w, kind, NULL, 0)
    return _clin(w, kind, &pt[0], pt.shape[0])


def clin_section(const double[::1] w, int kind, x, Py_ssize_t i, const double[::1] ys):
    cdef double[::1] pt = np.array(x, dtype=np.float64)
    cdef Py_ssize_t m = ys.shape[0], n = pt.shape[0], k
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] res = out
    cdef double xi = pt[i]
    with nogil:
        for k in range(m):
            pt[i] = xi + ys[k]
            res[k] = _clin(w, kind, &pt[0], n)
    return out


def ratio_argmax(const double[::1] values, const double[::1] ys, double offset):
    cdef Py_ssize_t best = 0, k
    cdef double best_ratio = (values[0] - offset) / ys[0]
    cdef double r
    for k in range(1, ys.shape[0]):
        r = (values[k] - offset) / ys[k]
        if r >= best_ratio:
            best = k
            best_ratio = r
    return best, best_ratio


cdef double _eval(int family, const double[::1] params, const double[:, ::1] Q, int kind,
                  double* pt, Py_ssize_t n) noexcept nogil:
    if family == 0:
        return _quad(params, Q, pt, n)
    return _clin(params, kind, pt, n)


cdef tuple _scan(int family, const double[::1] params, const double[:, ::1] Q, int kind, x,
                 const Py_ssize_t[::1] idx, const double[::1] lows, const double[::1] highs,
                 double eps, double shift, double offset):
    cdef double[::1] pt = np.array(x, dtype=np.float64)
    cdef Py_ssize_t n = pt.shape[0], p, i
    cdef Py_ssize_t best_pos = -1
    cdef long evals = 0
    cdef double best_step = 0.0, best_ratio = -INFINITY
    cdef double a, b, xi, z, r, step, ratio, last
    with nogil:
        for p in range(idx.shape[0]):
            i = idx[p]
            a = lows[p]
            b = highs[p]
            xi = pt[i]
            step = a
            pt[i] = xi + a
            ratio = (_eval(family, params, Q, kind, &pt[0], n) - shift - offset) / a
            evals += 1
            last = a
            z = a + sqrt(eps * a)
            while z <= b:
                pt[i] = xi + z
                r = (_eval(family, params, Q, kind, &pt[0], n) - shift - offset) / z
                evals += 1
                if r >= ratio:
                    step = z
                    ratio = r
                last = z
                z = z + sqrt(eps * z)
            if last != b:
                pt[i] = xi + b
                r = (_eval(family, params, Q, kind, &pt[0], n) - shift - offset) / b
                evals += 1
                if r >= ratio:
                    step = b
                    ratio = r
            pt[i] = xi
            if ratio > best_ratio:
                best_pos = p
                best_step = step
                best_ratio = ratio
    return best_pos, best_step, best_ratio, evals


cdef double[:, ::1] _NO_Q = np.zeros((1, 1))


def quad_scan(const double[::1] c, const double[:, ::1] Q, x, const Py_ssize_t[::1] idx,
              const double[::1] lows, const double[::1] highs, double eps, double shift, double offset):
    return _scan(0, c, Q, 0, x, idx, lows, highs, eps, shift, offset)


def clin_scan(const double[::1] w, int kind, x, const Py_ssize_t[::1] idx,
              const double[::1] lows, const double[::1] highs, double eps, double shift, double offset):
    return _scan(1, w, _NO_Q, kind, x, idx, lows, highs, eps, shift, offset)

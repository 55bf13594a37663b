"""Pure-Python kernels, the fallback for the compiled ``_kernels`` module.

Every function here performs its floating-point operations in exactly the
order used by ``_kernels.pyx`` so that both backends return bit-identical
results. Keep the two files in lockstep.
"""
from math import expm1, sqrt

import numpy as np

ONE_MINUS_EXP = 0
SQRT_SHIFT = 1


def ratio_grid(a, b, eps):
    a = float(a)
    b = float(b)
    eps = float(eps)
    points = []
    z = a
    while z <= b:
        points.append(z)
        z = z + sqrt(eps * z)
    if points[-1] != b:
        points.append(b)
    return np.array(points, dtype=np.float64)


def _quad(c, Q, x):
    n = len(x)
    total = 0.0
    for i in range(n):
        row = Q[i]
        s = 0.0
        for j in range(n):
            s += row[j] * x[j]
        total += x[i] * (c[i] + 0.5 * s)
    return total


def _clin(w, kind, x):
    t = 0.0
    for k in range(len(x)):
        t += w[k] * x[k]
    if kind == ONE_MINUS_EXP:
        return -expm1(-t)
    return t / (sqrt(t + 1.0) + 1.0)


def quad_value(c, Q, x):
    return _quad(c.tolist(), Q.tolist(), x.tolist())


def quad_section(c, Q, x, i, ys):
    c = c.tolist()
    Q = Q.tolist()
    pt = x.tolist()
    xi = pt[i]
    out = np.empty(len(ys), dtype=np.float64)
    for k, y in enumerate(ys.tolist()):
        pt[i] = xi + y
        out[k] = _quad(c, Q, pt)
    return out


def clin_value(w, kind, x):
    return _clin(w.tolist(), kind, x.tolist())


def clin_section(w, kind, x, i, ys):
    w = w.tolist()
    pt = x.tolist()
    xi = pt[i]
    out = np.empty(len(ys), dtype=np.float64)
    for k, y in enumerate(ys.tolist()):
        pt[i] = xi + y
        out[k] = _clin(w, kind, pt)
    return out


def ratio_argmax(values, ys, offset):
    """Index and value of the best ``(values - offset) / ys``; ties go to the later entry."""
    best = 0
    best_ratio = (float(values[0]) - offset) / float(ys[0])
    for k in range(1, len(ys)):
        r = (float(values[k]) - offset) / float(ys[k])
        if r >= best_ratio:
            best = k
            best_ratio = r
    return best, best_ratio


def _scan(value, x, idx, lows, highs, eps, shift, offset):
    """Ratio-grid scan over several coordinates; see ``Objective.coordinate_scan``."""
    pt = x.tolist()
    best_pos, best_step, best_ratio = -1, 0.0, float("-inf")
    evals = 0
    for p, (i, a, b) in enumerate(zip(idx.tolist(), lows.tolist(), highs.tolist())):
        xi = pt[i]
        step = a
        pt[i] = xi + a
        ratio = (value(pt) - shift - offset) / a
        evals += 1
        last = a
        z = a + sqrt(eps * a)
        while z <= b:
            pt[i] = xi + z
            r = (value(pt) - shift - offset) / z
            evals += 1
            if r >= ratio:
                step, ratio = z, r
            last = z
            z = z + sqrt(eps * z)
        if last != b:
            pt[i] = xi + b
            r = (value(pt) - shift - offset) / b
            evals += 1
            if r >= ratio:
                step, ratio = b, r
        pt[i] = xi
        if ratio > best_ratio:
            best_pos, best_step, best_ratio = p, step, ratio
    return best_pos, best_step, best_ratio, evals


def quad_scan(c, Q, x, idx, lows, highs, eps, shift, offset):
    c = c.tolist()
    Q = Q.tolist()
    return _scan(lambda pt: _quad(c, Q, pt), x, idx, lows, highs, eps, shift, offset)


def clin_scan(w, kind, x, idx, lows, highs, eps, shift, offset):
    w = w.tolist()
    return _scan(lambda pt: _clin(w, kind, pt), x, idx, lows, highs, eps, shift, offset)

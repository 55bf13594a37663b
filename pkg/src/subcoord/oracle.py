"""Brute-force references for testing the solvers and the 1-d subroutines.

All of these evaluate through ``Objective.values`` (vectorised numpy), a code
path independent of the kernels the solvers use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import conditioned_bound
from .problem import Objective, ProblemInstance, Vector
from .solvers import CaConfig, coordinate_ascent

DEFAULT_CAP = 10**8
_CHUNK = 1 << 18


class GridCapError(ValueError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"grid needs {required} lattice points, above the cap of {cap}; "
                         f"raise the cap to at least {required} or coarsen the resolution")
        self.required = required
        self.cap = cap


@dataclass
class GridSearchResult:
    best_point: Vector
    best_value: float
    resolution: float
    points_evaluated: int


def _axis(upper: float, res: float) -> Vector:
    k = int(math.floor(upper / res))
    ticks = np.arange(k + 1) * res
    ticks = ticks[ticks <= upper]
    if ticks[-1] < upper:
        ticks = np.append(ticks, upper)
    return ticks


def _better(value, point, best_value, best_point) -> bool:
    if best_point is None or value > best_value:
        return True
    return value == best_value and tuple(point) < tuple(best_point)


def grid_optimum(instance: ProblemInstance, resolution: float, cap: int = DEFAULT_CAP) -> GridSearchResult:
    """Exhaustive search over the lattice ``{0, res, 2 res, ...}`` (plus each ``u_i``).

    Every feasible lattice point is also pushed along each coordinate until the
    budget or the box stops it, since monotone optima sit on that boundary.
    The result is a lower bound on the true optimum. Ties go to the
    lexicographically smallest point.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    u, B, n = instance.upper, instance.budget, instance.n
    required = math.prod(math.ceil(ui / resolution) + 1 for ui in u)
    if required > cap:
        raise GridCapError(required, cap)
    F = instance.objective
    axes = [_axis(ui, resolution) for ui in u]
    shape = tuple(len(a) for a in axes)
    total = math.prod(shape)
    tol = instance.tol

    best_value, best_point = -math.inf, None
    evaluated = 0
    for start in range(0, total, _CHUNK):
        idx = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), shape)
        X = np.column_stack([axes[i][idx[i]] for i in range(n)])
        sums = X.sum(axis=1)
        X = X[sums <= B + tol]
        if len(X) == 0:
            continue
        slack = B - X.sum(axis=1)
        batches = [X]
        for k in range(n):
            P = X.copy()
            P[:, k] = np.minimum(u[k], X[:, k] + np.maximum(slack, 0.0))
            batches.append(P)
        pts = np.concatenate(batches)
        vals = F.values(pts)
        evaluated += len(pts)
        top = vals.max()
        tied = pts[vals == top]
        first = tied[np.lexsort(tied.T[::-1])[0]]
        if _better(top, first, best_value, best_point):
            best_value, best_point = float(top), first.copy()
    return GridSearchResult(best_point, best_value, float(resolution), evaluated)


def _section_points(x: Vector, i: int, ys: Vector) -> Vector:
    X = np.tile(np.asarray(x, dtype=np.float64), (len(ys), 1))
    X[:, i] = x[i] + ys
    return X


def dense_ratio_oracle(F: Objective, x: Vector, i: int, a: float, b: float, resolution: float,
                       offset: float = 0.0) -> tuple[float, float]:
    """Scan ``y = a, a + res, ..., b`` for the best ``(F(x + y e_i) - offset) / y``."""
    if not (0 < a <= b) or not resolution > 0:
        raise ValueError("need 0 < a <= b and resolution > 0")
    k = int(math.floor((b - a) / resolution))
    ys = a + np.arange(k + 1) * resolution
    ys = ys[ys <= b]
    if ys[-1] != b:
        ys = np.append(ys, b)
    ratios = (F.values(_section_points(x, i, ys)) - offset) / ys
    best = int(np.argmax(ratios))
    return float(ys[best]), float(ratios[best])


def dense_target_oracle(F: Objective, x: Vector, i: int, v: float, resolution: float,
                        upper_i: float) -> Optional[float]:
    """Smallest lattice ``y`` in ``[0, upper_i - x_i]`` with ``F(x + y e_i) >= v``, else ``None``."""
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    room = upper_i - x[i]
    k = int(math.floor(room / resolution))
    ys = np.arange(k + 1) * resolution
    ys = ys[ys <= room]
    if ys[-1] != room:
        ys = np.append(ys, room)
    hit = np.flatnonzero(F.values(_section_points(x, i, ys)) >= v)
    return float(ys[hit[0]]) if len(hit) else None


@dataclass
class ConditionedReport:
    """Outcome of checking the good-iteration lower bound along a traced CA run."""

    good_iterations: int
    total_iterations: int
    min_slack: float
    violations: list = field(default_factory=list)  # (h, F(x_h), bound)

    @property
    def ok(self) -> bool:
        return not self.violations


def _is_good(x, y_ref, u, B, tol) -> bool:
    slack = B - x.sum()
    for i in np.flatnonzero(x < u):
        if y_ref[i] - x[i] > min(u[i] - x[i], slack) + tol:
            return False
    return True


def verify_conditioned_guarantee(instance: ProblemInstance, cfg: CaConfig, y_ref: Vector) -> ConditionedReport:
    """Re-run CA with a trace and check the progress bound against ``y_ref``.

    An iteration is good when, at its start, every open coordinate could still
    be raised to ``y_ref`` without breaking feasibility. For the prefix of good
    iterations, ``F(x_h) >= (1 - exp(-|x_h| / (|y| + eps B))) F(y) - |x_h| eps L``.
    """
    y_ref = np.asarray(y_ref, dtype=np.float64)
    u, B, L, eps = instance.upper, instance.budget, instance.smoothness, cfg.eps
    res = coordinate_ascent(instance, CaConfig(eps, trace=True))
    trace = res.trace
    good = 0
    for entry in trace[:-1]:
        if not _is_good(entry.point, y_ref, u, B, instance.tol):
            break
        good += 1
    f_ref = instance.objective.eval(y_ref)
    ref_norm = float(y_ref.sum())
    report = ConditionedReport(good, res.main_iterations, math.inf)
    tol = 1e-9 * max(1.0, abs(f_ref))
    for entry in trace[: good + 1]:
        norm = float(entry.point.sum())
        bound = conditioned_bound(norm, ref_norm, f_ref, eps, B, L)
        slack = entry.value - bound
        report.min_slack = min(report.min_slack, slack)
        if slack < -tol:
            report.violations.append((entry.iteration, entry.value, bound))
    return report

"""One-dimensional subroutines along a coordinate section ``y -> F(x + y e_i)``.

* :func:`maximize_ratio` scans the sqrt-spaced grid ``z_0 = a``,
  ``z_k = z_{k-1} + sqrt(eps z_{k-1})`` (plus ``b``) and returns the best
  per-unit gain; the grid spacing keeps the loss below ``eps * L``.
* :func:`find_target_value` bisects for the first point reaching a target
  value and finishes with a slope-corrected linear interpolation that never
  overshoots the true first crossing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .problem import Objective, Vector


@dataclass(frozen=True)
class RatioGrid:
    points: Vector
    a: float
    b: float
    eps: float

    def __len__(self):
        return len(self.points)


def ratio_grid_size_bound(a: float, eps: float, B: float) -> int:
    """Upper bound on the number of grid points for any ``b <= B``."""
    return max(math.ceil(math.log2(eps / a)), 0) + math.ceil(4.0 * math.sqrt(B / eps)) + 3


def _check_eps(eps):
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def build_ratio_grid(a: float, b: float, eps: float, B: float | None = None) -> RatioGrid:
    if not a > 0:
        raise ValueError(f"grid start a must be positive, got {a}")
    if a > b:
        raise ValueError(f"empty range: a={a} > b={b}")
    _check_eps(eps)
    if B is not None and b > B:
        raise ValueError(f"b={b} exceeds the budget {B}")
    return RatioGrid(_backend.kernels.ratio_grid(a, b, eps), float(a), float(b), float(eps))


def maximize_ratio(F: Objective, x: Vector, i: int, a: float, b: float, eps: float,
                   offset: float = 0.0) -> tuple[float, float]:
    """Approximately maximise ``(F(x + y e_i) - offset) / y`` over ``y in [a, b]``.

    Returns ``(y, ratio)`` with ``y`` on the grid; ties go to the largest ``y``.
    Costs exactly one evaluation per grid point. The caller guarantees
    ``b <= u_i - x_i``. Coordinate ascent passes ``offset = F(x)`` to rank
    marginal gains; the default ranks ``F(x + y e_i) / y`` itself.
    """
    grid = build_ratio_grid(a, b, eps).points
    vals = F.section(x, i, grid)
    k, ratio = _backend.kernels.ratio_argmax(vals, grid, float(offset))
    return float(grid[k]), float(ratio)


class TargetSearch(NamedTuple):
    y: float
    lo: float  # final bracket
    hi: float
    slope: float  # interpolation slope d


def target_search(F: Objective, x: Vector, i: int, v: float, eps: float, upper_i: float) -> TargetSearch:
    """Full result of :func:`find_target_value`, including the final bracket."""
    _check_eps(eps)
    room = float(upper_i) - float(x[i])
    if room < 0:
        raise ValueError(f"x[{i}]={x[i]} lies above its upper bound {upper_i}")
    f_lo, f_hi = F.section(x, i, [0.0, room])
    tol = 1e-9 * max(1.0, abs(f_hi))
    if not f_lo - tol <= v <= f_hi + tol:
        raise ValueError(f"target {v} outside the reachable range [{f_lo}, {f_hi}]")

    lo, hi = 0.0, room
    while hi - lo >= eps:
        m = (lo + hi) / 2
        fm = F.section(x, i, [m])[0]
        if fm >= v:
            hi, f_hi = m, fm
        else:
            lo, f_lo = m, fm
    width = hi - lo
    if width <= 0:
        return TargetSearch(lo, lo, hi, 0.0)
    d = (f_hi - f_lo) / width + eps * F.smoothness / 2
    if d <= 0:
        # only for a flat section with L = 0, where v == F(x + lo e_i)
        return TargetSearch(lo, lo, hi, d)
    r = min(max((v - f_lo) / d, 0.0), width)
    return TargetSearch(lo + r, lo, hi, d)


def find_target_value(F: Objective, x: Vector, i: int, v: float, eps: float, upper_i: float) -> float:
    """Smallest-ish ``y in [0, upper_i - x_i]`` with ``F(x + y e_i) >= v - eps * L``.

    No ``y' < y`` reaches ``v`` itself. Requires ``F(x) <= v <= F(x v upper_i e_i)``.
    Uses at most ``ceil(log2(room / eps)) + 3`` evaluations.
    """
    return target_search(F, x, i, v, eps, upper_i).y


def target_eval_bound(B: float, eps: float) -> int:
    return max(math.ceil(math.log2(B / eps)), 0) + 3

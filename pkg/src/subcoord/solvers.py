"""Coordinate ascent (CA), enhanced CA (ECA) and fully enhanced CA (FECA).

CA greedily pushes the coordinate with the best approximate marginal gain per
unit of budget, never stepping less than ``delta = eps * B / n`` unless the
box or the budget forces it. ECA also tries every single-coordinate corner.
FECA guesses the two most valuable coordinates of an optimum and their values
on an ``eps``-ladder, fixes them, and completes each guess with CA on the
contracted problem; the guesses are independent and run in parallel.
"""
from __future__ import annotations

import pickle
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .onedim import find_target_value
from .problem import (
    Objective,
    ProblemInstance,
    SolveResult,
    TraceEntry,
    Vector,
    contract,
)


@dataclass(frozen=True)
class CaConfig:
    eps: float
    trace: bool = False

    def __post_init__(self):
        if not 0.0 < self.eps < 0.25:
            raise ValueError(f"eps must lie in (0, 0.25), got {self.eps}")


def coordinate_ascent(instance: ProblemInstance, cfg: CaConfig) -> SolveResult:
    F = instance.objective
    u = instance.upper
    B = instance.budget
    n = instance.n
    eps = cfg.eps
    delta = eps * B / n
    start = F.eval_count

    x = np.zeros(n)
    fx = F.eval(x)
    trace = [TraceEntry(0, x.copy(), fx)] if cfg.trace else None
    iterations = 0
    while True:
        slack = B - x.sum()
        if slack <= instance.tol:
            break
        candidates = np.flatnonzero(x < u)
        if len(candidates) == 0:
            break
        # per-coordinate maximize_ratio with offset F(x), fused into one kernel call
        reach = np.minimum(u[candidates] - x[candidates], slack)
        pos, best_step, _ = F.coordinate_scan(x, candidates, np.minimum(reach, delta), reach, eps, offset=fx)
        best_j = candidates[pos]
        if best_step >= u[best_j] - x[best_j]:
            x[best_j] = u[best_j]  # snap: x + (u - x) can miss u by an ulp
        else:
            x[best_j] += best_step
        fx = F.eval(x)
        iterations += 1
        if trace is not None:
            trace.append(TraceEntry(iterations, x.copy(), fx))
    x.setflags(write=False)
    return SolveResult(x, fx, iterations, F.eval_count - start, trace)


def enhanced_ca(instance: ProblemInstance, cfg: CaConfig) -> SolveResult:
    """Best of the CA output and the ``n`` corner points ``u_i e_i``."""
    F = instance.objective
    start = F.eval_count
    res = coordinate_ascent(instance, cfg)
    best_point, best_value = res.point, res.value
    for i in range(instance.n):
        corner = np.zeros(instance.n)
        corner[i] = instance.upper[i]
        value = F.eval(corner)
        if value > best_value:
            best_point, best_value = corner, value
    return SolveResult(best_point, best_value, res.main_iterations, F.eval_count - start, res.trace)


@dataclass(frozen=True)
class GuessSet:
    values: Vector
    step: float

    def __len__(self):
        return len(self.values)


def guess_set(F: Objective, x: Vector, h: int, eps: float, upper_h: float) -> GuessSet:
    """The ladder ``F(x) + j * eps * F(u_h e_h)``, ``j = 0, 1, ...``, capped at ``F(x v u_h e_h)``."""
    x = np.asarray(x, dtype=np.float64)
    base, top = F.section(x, h, [0.0, upper_h - x[h]])
    corner = np.zeros(F.dimension)
    corner[h] = upper_h
    step = eps * F.eval(corner)
    # values stay inside [F(x), F(x v u_h e_h)], the admissible target range, by construction
    if step <= 0 or top <= base:
        return GuessSet(np.array([base]), step)
    tol = 1e-9 * max(1.0, abs(top))
    values = []
    j = 0
    while True:
        v = base + j * step
        if v > top + tol:
            break
        values.append(min(v, top))
        j += 1
    return GuessSet(np.array(values), step)


@dataclass(frozen=True)
class Candidate:
    h1: int
    h2: int  # -1 when there is no second guess (n == 1)
    v1_index: int
    v2_index: int
    point: Vector
    value: float
    inner_iterations: int

    @property
    def key(self):
        return (self.h1, self.h2, self.v1_index, self.v2_index)


def _complete(instance: ProblemInstance, cfg: CaConfig, x: Vector, fixed) -> tuple[Vector, int]:
    """Fill the coordinates outside ``fixed`` with CA on the contracted problem."""
    n = instance.n
    keep = [i for i in range(n) if i not in fixed]
    residual = instance.budget - x.sum()
    point = x.copy()
    if not keep or residual <= instance.tol:
        return point, 0
    sub = ProblemInstance(
        contract(instance.objective, x, fixed), instance.upper[keep], residual
    )
    g = coordinate_ascent(sub, CaConfig(cfg.eps))
    point[keep] = g.point
    return point, g.main_iterations


def _pair_candidates(instance: ProblemInstance, cfg: CaConfig, h1: int, h2: int):
    """Best candidate over all value guesses for one coordinate pair, plus evaluations spent."""
    F = instance.objective
    u = instance.upper
    eps = cfg.eps
    start = F.eval_count
    origin = np.zeros(instance.n)
    best: Optional[Candidate] = None

    def offer(cand):
        nonlocal best
        if best is None or cand.value > best.value:
            best = cand

    for i1, v1 in enumerate(guess_set(F, origin, h1, eps, u[h1]).values):
        x1 = origin.copy()
        x1[h1] = find_target_value(F, origin, h1, v1, eps, u[h1])
        if h2 < 0:
            point, iters = _complete(instance, cfg, x1, {h1})
            offer(Candidate(h1, h2, i1, 0, point, F.eval(point), iters))
            continue
        for i2, v2 in enumerate(guess_set(F, x1, h2, eps, u[h2]).values):
            x = x1.copy()
            x[h2] = find_target_value(F, x1, h2, v2, eps, u[h2])
            if x.sum() > instance.budget + instance.tol:
                continue
            point, iters = _complete(instance, cfg, x, {h1, h2})
            offer(Candidate(h1, h2, i1, i2, point, F.eval(point), iters))
    return best, F.eval_count - start


def _pair_task(args):
    return _pair_candidates(*args)


def _picklable(obj) -> bool:
    try:
        pickle.dumps(obj)
    except Exception:
        return False
    return True


def fully_enhanced_ca(instance: ProblemInstance, cfg: CaConfig, workers: int = 1) -> SolveResult:
    """Guess two heavy coordinates and their values, complete each guess with CA.

    Candidate pairs are distributed over ``workers`` processes (threads when
    the objective cannot be pickled). The reduction keeps the highest value,
    ties broken by the smallest ``(h1, h2, v1_index, v2_index)``, so the
    result does not depend on ``workers``.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    F = instance.objective
    start = F.eval_count
    n = instance.n
    pairs = [(h, -1) for h in range(n)] if n == 1 else list(permutations(range(n), 2))
    tasks = [(instance, cfg, h1, h2) for h1, h2 in pairs]

    if workers == 1 or len(tasks) == 1:
        results = [_pair_task(t) for t in tasks]
    elif _picklable(instance):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_task, tasks))
        # evaluations happened on worker copies; fold them into the caller's counter
        F._tick(sum(evals for _, evals in results))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_pair_task, tasks))

    best: Optional[Candidate] = None
    for cand, _ in results:
        if cand is not None and (best is None or cand.value > best.value):
            best = cand
    if best is None:
        # unreachable for valid instances: the j = 0 guesses give y = 0 and are feasible
        raise RuntimeError("no feasible candidate generated")
    point = best.point.copy()
    point.setflags(write=False)
    return SolveResult(point, best.value, best.inner_iterations, F.eval_count - start, candidate=best)

"""Problem data model: objectives, instances, feasibility and instance transforms.

Points are plain 1-d ``float64`` numpy arrays. Every objective keeps a
thread-safe evaluation counter; the solvers report evaluation totals from it.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import _backend

Vector = NDArray[np.float64]


def feasibility_tol(budget: float) -> float:
    return 1e-9 * max(1.0, budget)


def _frozen(a: ArrayLike) -> Vector:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


class Objective:
    """Black-box monotone objective ``F`` on a box, with smoothness constant ``L``.

    Subclasses implement ``_value``; ``_section`` and ``_values`` default to
    looping over it and may be overridden with faster equivalents. The public
    ``eval``, ``section`` and ``values`` methods do the counting, so a wrapper
    that delegates to its parent's public methods is counted on both.
    """

    def __init__(self, dimension: int, smoothness: float):
        if dimension < 0:
            raise ValueError("dimension must be non-negative")
        smoothness = float(smoothness)
        if not np.isfinite(smoothness) or smoothness < 0:
            raise ValueError(f"smoothness constant must be finite and >= 0, got {smoothness}")
        self.dimension = int(dimension)
        self.smoothness = smoothness
        self._count = 0
        self._lock = threading.Lock()

    @property
    def eval_count(self) -> int:
        return self._count

    def _tick(self, k: int) -> None:
        with self._lock:
            self._count += k

    def _point(self, x: ArrayLike) -> Vector:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dimension,):
            raise ValueError(f"expected a point of dimension {self.dimension}, got shape {x.shape}")
        return x

    def eval(self, x: ArrayLike) -> float:
        x = self._point(x)
        self._tick(1)
        return float(self._value(x))

    __call__ = eval

    def section(self, x: ArrayLike, i: int, ys: ArrayLike) -> Vector:
        """Values ``F(x + y e_i)`` for each ``y`` in ``ys``; counts ``len(ys)`` evaluations."""
        x = self._point(x)
        if not 0 <= i < self.dimension:
            raise IndexError(f"coordinate {i} out of range for dimension {self.dimension}")
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        self._tick(len(ys))
        return self._section(x, i, ys)

    def values(self, X: ArrayLike) -> Vector:
        """Batch evaluation over the rows of ``X``."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise ValueError(f"expected an (m, {self.dimension}) array, got shape {X.shape}")
        self._tick(X.shape[0])
        return self._values(X)

    def coordinate_scan(self, x: ArrayLike, coords, lows, highs, eps: float,
                        offset: float = 0.0, shift: float = 0.0) -> tuple[int, float, float]:
        """One coordinate-ascent selection step in a single call.

        For each ``coords[p]`` scan the ratio grid on ``[lows[p], highs[p]]``
        ranking ``(F(x + y e_i) - shift - offset) / y``, ties to the largest
        ``y``; across coordinates the first strict maximum wins. Returns
        ``(p, y, ratio)``. Same result and evaluation count as calling
        ``onedim.maximize_ratio`` per coordinate.
        """
        x = self._point(x)
        coords = np.ascontiguousarray(coords, dtype=np.intp)
        if (coords < 0).any() or (coords >= self.dimension).any():
            raise IndexError("scan coordinates out of range")
        lows = np.ascontiguousarray(lows, dtype=np.float64)
        highs = np.ascontiguousarray(highs, dtype=np.float64)
        if not (len(lows) == len(highs) == len(coords)) or (lows <= 0).any() or (lows > highs).any():
            raise ValueError("need 0 < lows[p] <= highs[p] for every scanned coordinate")
        p, y, ratio, _ = self._counted_scan(x, coords, lows, highs, float(eps), float(offset), float(shift))
        return int(p), float(y), float(ratio)

    def _counted_scan(self, x, coords, lows, highs, eps, offset, shift):
        # unchecked: arguments were validated by the public entry point
        result = self._scan(x, coords, lows, highs, eps, offset, shift)
        self._tick(result[3])
        return result

    def _scan(self, x, coords, lows, highs, eps, offset, shift):
        k = _backend.kernels
        best_pos, best_step, best_ratio, evals = -1, 0.0, -np.inf, 0
        for p, (i, a, b) in enumerate(zip(coords, lows, highs)):
            grid = k.ratio_grid(a, b, eps)
            vals = self._section(x, int(i), grid) - shift
            evals += len(grid)
            j, ratio = k.ratio_argmax(vals, grid, offset)
            if ratio > best_ratio:
                best_pos, best_step, best_ratio = p, float(grid[j]), ratio
        return best_pos, best_step, best_ratio, evals

    def _value(self, x: Vector) -> float:
        raise NotImplementedError

    def _section(self, x: Vector, i: int, ys: Vector) -> Vector:
        out = np.empty(len(ys))
        pt = x.copy()
        xi = x[i]
        for k, y in enumerate(ys):
            pt[i] = xi + y
            out[k] = self._value(pt)
        return out

    def _values(self, X: Vector) -> Vector:
        return np.array([self._value(row) for row in X], dtype=np.float64)

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()


class FunctionObjective(Objective):
    """Wraps a plain callable ``func(x) -> float``."""

    def __init__(self, func: Callable[[Vector], float], dimension: int, smoothness: float = 0.0):
        super().__init__(dimension, smoothness)
        self.func = func

    def _value(self, x):
        return self.func(x)


class ShiftedObjective(Objective):
    def __init__(self, parent: Objective, shift: ArrayLike):
        super().__init__(parent.dimension, parent.smoothness)
        self.parent = parent
        self.shift = _frozen(shift)

    def _value(self, x):
        return self.parent.eval(x + self.shift)


class RescaledObjective(Objective):
    def __init__(self, parent: Objective, weights: ArrayLike):
        w = _frozen(weights)
        super().__init__(parent.dimension, parent.smoothness / float(np.min(w)) ** 2)
        self.parent = parent
        self.weights = w

    def _value(self, y):
        return self.parent.eval(y / self.weights)

    def _values(self, Y):
        return self.parent.values(Y / self.weights)


class ContractedObjective(Objective):
    """``F'(x') = F(embed(x') + base) - F(base)`` over the kept coordinates."""

    def __init__(self, parent: Objective, base: ArrayLike, keep: Sequence[int]):
        keep = np.asarray(keep, dtype=np.intp)
        super().__init__(len(keep), parent.smoothness)
        self.parent = parent
        self.base = _frozen(base)
        self.keep = keep
        self.offset = parent.eval(self.base)

    def embed(self, x: Vector) -> Vector:
        full = self.base.copy()
        full[self.keep] = x
        return full

    def _value(self, x):
        return self.parent.eval(self.embed(x)) - self.offset

    def _section(self, x, i, ys):
        return self.parent.section(self.embed(x), int(self.keep[i]), ys) - self.offset

    def _scan(self, x, coords, lows, highs, eps, offset, shift):
        # (F - offset) - 0.0 == F - (offset + 0.0): bit-identical to scanning our own sections
        # only for shift == 0, which is the only way the solvers call it
        if shift != 0.0:
            return super()._scan(x, coords, lows, highs, eps, offset, shift)
        return self.parent._counted_scan(
            self.embed(x), self.keep[coords], lows, highs, eps, offset, self.offset
        )

    def _values(self, X):
        full = np.tile(self.base, (X.shape[0], 1))
        full[:, self.keep] = X
        return self.parent.values(full) - self.offset


@dataclass(frozen=True)
class ProblemInstance:
    """``max F(x)`` over ``0 <= x <= upper``, ``sum(x) <= budget``.

    Upper bounds above the budget are clamped to it on construction.
    """

    objective: Objective
    upper: Vector
    budget: float
    name: str = ""

    def __post_init__(self):
        budget = float(self.budget)
        if not np.isfinite(budget) or budget <= 0:
            raise ValueError(f"budget must be finite and positive, got {budget}")
        upper = np.asarray(self.upper, dtype=np.float64)
        if upper.ndim != 1 or len(upper) == 0:
            raise ValueError("upper bounds must be a non-empty vector")
        if not np.all(np.isfinite(upper)) or np.any(upper <= 0):
            raise ValueError("upper bounds must be finite and positive")
        if self.objective.dimension != len(upper):
            raise ValueError(
                f"objective dimension {self.objective.dimension} != domain dimension {len(upper)}"
            )
        object.__setattr__(self, "budget", budget)
        object.__setattr__(self, "upper", _frozen(np.minimum(upper, budget)))

    @property
    def n(self) -> int:
        return len(self.upper)

    @property
    def smoothness(self) -> float:
        return self.objective.smoothness

    @property
    def tol(self) -> float:
        return feasibility_tol(self.budget)


class TraceEntry(NamedTuple):
    iteration: int
    point: Vector
    value: float


@dataclass
class SolveResult:
    point: Vector
    value: float
    main_iterations: int
    evaluations: int
    trace: Optional[list] = field(default=None, repr=False)
    candidate: Optional[Any] = field(default=None, repr=False)  # winning FECA guess


def feasible(instance: ProblemInstance, x: ArrayLike) -> bool:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (instance.n,):
        raise ValueError(f"expected a point of dimension {instance.n}, got shape {x.shape}")
    tol = instance.tol
    if not np.all(np.isfinite(x)):
        return False
    if np.any(x < -tol) or np.any(x > instance.upper + tol):
        return False
    return bool(x.sum() <= instance.budget + tol)


def shift_domain(F: Objective, a: ArrayLike) -> Objective:
    """``G(x) = F(x + a)``; moves a box ``[a, a + u]`` to ``[0, u]``."""
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (F.dimension,):
        raise ValueError(f"shift must have dimension {F.dimension}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("shift must be finite")
    return ShiftedObjective(F, a)


def rescale_weights(F: Objective, w: ArrayLike, u: ArrayLike, B: float) -> ProblemInstance:
    """Turn ``sum(w_i x_i) <= B`` into an l1 budget via ``y_i = w_i x_i``.

    The smoothness constant of the new objective is ``L / min(w)**2``.
    """
    w = np.asarray(w, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if w.shape != (F.dimension,) or u.shape != (F.dimension,):
        raise ValueError("weights and upper bounds must match the objective dimension")
    if np.any(~np.isfinite(w)) or np.any(w <= 0):
        raise ValueError("weights must be finite and positive")
    return ProblemInstance(RescaledObjective(F, w), w * u, B)


def contract(F: Objective, base: ArrayLike, removed) -> Objective:
    """Fix the ``removed`` coordinates at ``base`` and measure gains relative to it.

    Contracting an already contracted objective is flattened onto the root, so
    two successive contractions are exactly one contraction with the summed base.
    """
    base = np.asarray(base, dtype=np.float64)
    if base.shape != (F.dimension,):
        raise ValueError(f"base must have dimension {F.dimension}, got shape {base.shape}")
    removed = sorted(set(int(h) for h in removed))
    if any(h < 0 or h >= F.dimension for h in removed):
        raise IndexError(f"removed coordinates {removed} out of range for dimension {F.dimension}")
    keep = [i for i in range(F.dimension) if i not in set(removed)]
    if np.any(base[keep] != 0):
        raise ValueError("base must be zero outside the removed coordinates")
    if isinstance(F, ContractedObjective):
        full = F.embed(np.zeros(F.dimension))
        full[F.keep] = base
        return ContractedObjective(F.parent, full, F.keep[keep])
    return ContractedObjective(F, base, keep)

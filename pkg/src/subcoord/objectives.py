"""Test objective families and empirical property checkers.

Two families with known smoothness constants:

* quadratic ``F(x) = c.x + x.Q.x / 2`` with non-positive off-diagonal ``Q``
  (submodular; DR only when the diagonal is non-positive too),
* concave-of-linear ``F(x) = g(w.x)`` with ``g`` concave, nondecreasing, ``g(0) = 0``.

Scalar evaluation and 1-d sections go through the kernel backend; batch
evaluation is plain vectorised numpy and serves the brute-force oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .problem import Objective, Vector

KINDS = {"one_minus_exp": 0, "sqrt_shift": 1}
_CURVATURE = {"one_minus_exp": 1.0, "sqrt_shift": 0.25}  # max |g''| on [0, inf)


def spectral_norm(Q, tol=1e-8, max_iter=10_000) -> float:
    """Largest singular value of ``Q`` by power iteration on ``Q^T Q``."""
    Q = np.asarray(Q, dtype=np.float64)
    n = Q.shape[0]
    if n == 0 or not np.any(Q):
        return 0.0
    v = np.linspace(1.0, 2.0, n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = Q.T @ (Q @ v)
        new = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector in the null space; deterministic fallback
            return float(np.linalg.norm(Q, 2))
        v = w / norm
        if abs(new - lam) <= tol * new:
            return float(np.sqrt(new))
        lam = new
    return float(np.linalg.norm(Q, 2))


@dataclass(frozen=True)
class QuadraticSpec:
    c: Vector
    Q: Vector

    def __post_init__(self):
        c = np.ascontiguousarray(self.c, dtype=np.float64)
        Q = np.ascontiguousarray(self.Q, dtype=np.float64)
        n = len(c)
        if c.ndim != 1 or Q.shape != (n, n):
            raise ValueError(f"Q must be {n}x{n} to match c")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(Q))):
            raise ValueError("quadratic coefficients must be finite")
        if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * max(1.0, float(np.abs(Q).max(initial=0)))):
            raise ValueError("Q must be symmetric")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "Q", Q)

    def validate(self, upper) -> None:
        """Raise unless the spec is submodular and certifiably monotone on ``[0, upper]``."""
        off = self.Q - np.diag(np.diag(self.Q))
        if np.any(off > 0):
            raise ValueError("off-diagonal entries of Q must be <= 0 for submodularity")
        if np.any(self.c < 0):
            raise ValueError("linear term c must be non-negative")
        u = np.asarray(upper, dtype=np.float64)
        slack = self.c + np.minimum(self.Q * u[None, :], 0.0).sum(axis=1)
        if np.any(slack < 0):
            bad = int(np.argmin(slack))
            raise ValueError(
                f"monotonicity certificate fails at coordinate {bad}: "
                f"c_i + sum_j min(Q_ij u_j, 0) = {slack[bad]:.6g} < 0"
            )


@dataclass(frozen=True)
class ConcaveLinearSpec:
    w: Vector
    kind: str = "one_minus_exp"

    def __post_init__(self):
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        if w.ndim != 1 or not np.all(np.isfinite(w)):
            raise ValueError("w must be a finite vector")
        if np.any(w < 0):
            raise ValueError("weights of a concave-linear objective must be non-negative")
        if self.kind not in KINDS:
            raise ValueError(f"unknown concave kind {self.kind!r}; expected one of {sorted(KINDS)}")
        object.__setattr__(self, "w", w)


class _KernelObjective(Objective):
    """Holds a kernel backend by name so instances pickle (modules do not)."""

    def _use_backend(self, backend):
        self.backend = _backend.NAME if backend is None else backend
        self.kernels = _backend.get(self.backend)

    def __getstate__(self):
        state = super().__getstate__()
        del state["kernels"]
        return state

    def __setstate__(self, state):
        super().__setstate__(state)
        self.kernels = _backend.get(self.backend)


class QuadraticObjective(_KernelObjective):
    """``c.x + x.Q.x / 2`` with ``L = ||Q||_2``. No submodularity checks here."""

    def __init__(self, c, Q, smoothness=None, backend=None):
        spec = QuadraticSpec(c, Q)
        L = spectral_norm(spec.Q) if smoothness is None else smoothness
        super().__init__(len(spec.c), L)
        self.c = spec.c
        self.Q = spec.Q
        self._use_backend(backend)

    def _value(self, x):
        return self.kernels.quad_value(self.c, self.Q, x)

    def _section(self, x, i, ys):
        return self.kernels.quad_section(self.c, self.Q, x, i, ys)

    def _scan(self, x, coords, lows, highs, eps, offset, shift):
        return self.kernels.quad_scan(self.c, self.Q, x, coords, lows, highs, eps, shift, offset)

    def _values(self, X):
        # column loops rather than BLAS: each row's value must not depend on the batch
        n = X.shape[1]
        lin = np.zeros(X.shape[0])
        quad = np.zeros(X.shape[0])
        for i in range(n):
            lin += self.c[i] * X[:, i]
            row = np.zeros(X.shape[0])
            for j in range(n):
                row += self.Q[i, j] * X[:, j]
            quad += X[:, i] * row
        return lin + 0.5 * quad


class ConcaveLinearObjective(_KernelObjective):
    """``g(w.x)`` with ``L = max|g''| * ||w||^2``."""

    def __init__(self, w, kind="one_minus_exp", smoothness=None, backend=None):
        spec = ConcaveLinearSpec(w, kind)
        L = _CURVATURE[kind] * float(spec.w @ spec.w) if smoothness is None else smoothness
        super().__init__(len(spec.w), L)
        self.w = spec.w
        self.kind = kind
        self._code = KINDS[kind]
        self._use_backend(backend)

    def _value(self, x):
        return self.kernels.clin_value(self.w, self._code, x)

    def _section(self, x, i, ys):
        return self.kernels.clin_section(self.w, self._code, x, i, ys)

    def _scan(self, x, coords, lows, highs, eps, offset, shift):
        return self.kernels.clin_scan(self.w, self._code, x, coords, lows, highs, eps, shift, offset)

    def _values(self, X):
        t = np.zeros(X.shape[0])
        for j in range(X.shape[1]):
            t += self.w[j] * X[:, j]
        if self.kind == "one_minus_exp":
            return -np.expm1(-t)
        return t / (np.sqrt(t + 1.0) + 1.0)


def make_submodular_quadratic(spec: QuadraticSpec, u, smoothness=None, backend=None) -> QuadraticObjective:
    if len(np.asarray(u)) != len(spec.c):
        raise ValueError("upper bounds must match the quadratic dimension")
    spec.validate(u)
    return QuadraticObjective(spec.c, spec.Q, smoothness=smoothness, backend=backend)


def make_concave_linear(spec: ConcaveLinearSpec, u, smoothness=None, backend=None) -> ConcaveLinearObjective:
    if len(np.asarray(u)) != len(spec.w):
        raise ValueError("upper bounds must match the weight dimension")
    return ConcaveLinearObjective(spec.w, spec.kind, smoothness=smoothness, backend=backend)


# -- property checkers ---------------------------------------------------------

@dataclass
class PropertyReport:
    trials: int
    violations: int = 0
    worst_violation: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


MAX_WITNESSES = 10
CHECK_RTOL = 1e-9


def _report(trials, gap, scale, pairs) -> PropertyReport:
    """``gap > 0`` means the inequality is broken by that much; ``pairs[k]`` is the witness."""
    bad = np.flatnonzero(gap > CHECK_RTOL * scale)
    rep = PropertyReport(trials=trials, violations=len(bad))
    if len(bad):
        rep.worst_violation = float(gap[bad].max())
        rep.witnesses = [pairs(int(k)) for k in bad[:MAX_WITNESSES]]
    return rep


def _sample_pairs(upper, trials, seed):
    if trials < 1:
        raise ValueError("trials must be >= 1")
    u = np.asarray(upper, dtype=np.float64)
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, u, size=(trials, len(u)))
    Y = rng.uniform(0.0, u, size=(trials, len(u)))
    return rng, u, X, Y


def check_submodular(F: Objective, upper, trials: int, seed: int) -> PropertyReport:
    """Sample pairs and test ``F(x) + F(y) >= F(x v y) + F(x ^ y)``."""
    _, _, X, Y = _sample_pairs(upper, trials, seed)
    fx, fy = F.values(X), F.values(Y)
    fj, fm = F.values(np.maximum(X, Y)), F.values(np.minimum(X, Y))
    scale = np.maximum(1.0, np.abs(fx) + np.abs(fy))
    return _report(trials, (fj + fm) - (fx + fy), scale, lambda k: (X[k].copy(), Y[k].copy()))


def check_monotone(F: Objective, upper, trials: int, seed: int) -> PropertyReport:
    """Sample ordered pairs ``x <= x v y`` and test ``F(x) <= F(x v y)``."""
    _, _, X, Y = _sample_pairs(upper, trials, seed)
    J = np.maximum(X, Y)
    fx, fj = F.values(X), F.values(J)
    scale = np.maximum(1.0, np.abs(fx) + np.abs(fj))
    return _report(trials, fx - fj, scale, lambda k: (X[k].copy(), J[k].copy()))


def check_dr(F: Objective, upper, trials: int, seed: int) -> PropertyReport:
    """Test diminishing returns: ``F(lo + z e_i) - F(lo) >= F(hi + z e_i) - F(hi)`` for ``lo <= hi``."""
    rng, u, X, Y = _sample_pairs(upper, trials, seed)
    lo, hi = np.minimum(X, Y), np.maximum(X, Y)
    idx = rng.integers(0, len(u), size=trials)
    rows = np.arange(trials)
    z = rng.uniform(0.0, 1.0, size=trials) * (u[idx] - hi[rows, idx])
    lo_step, hi_step = lo.copy(), hi.copy()
    lo_step[rows, idx] += z
    hi_step[rows, idx] += z
    flo, fhi = F.values(lo), F.values(hi)
    gain_lo = F.values(lo_step) - flo
    gain_hi = F.values(hi_step) - fhi
    scale = np.maximum(1.0, np.abs(flo) + np.abs(fhi))
    return _report(
        trials, gain_hi - gain_lo, scale,
        lambda k: (lo[k].copy(), hi[k].copy(), int(idx[k]), float(z[k])),
    )


def _fd_gradients(F: Objective, X, h):
    n = X.shape[1]
    G = np.empty_like(X)
    for i in range(n):
        step = np.zeros(n)
        step[i] = h[i]
        G[:, i] = (F.values(X + step) - F.values(X - step)) / (2.0 * h[i])
    return G


def estimate_smoothness(F: Objective, upper, samples: int, seed: int) -> float:
    """Empirical lower bound on ``L``: max gradient-difference quotient over random pairs.

    Gradients are central differences with step ``1e-5 * u_i``.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    u = np.asarray(upper, dtype=np.float64)
    h = 1e-5 * u
    rng = np.random.default_rng(seed)
    X = rng.uniform(h, u - h, size=(samples, len(u)))
    Y = rng.uniform(h, u - h, size=(samples, len(u)))
    dist = np.linalg.norm(X - Y, axis=1)
    diff = np.linalg.norm(_fd_gradients(F, X, h) - _fd_gradients(F, Y, h), axis=1)
    keep = dist > 0
    return float(np.max(diff[keep] / dist[keep], initial=0.0))

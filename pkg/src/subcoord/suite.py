"""Seeded random instances and the fixed benchmark suites.

Instances are produced as instance-file documents (see ``instances``) so the
same data can be written to disk and fed to the CLI.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instances import instance_from_dict
from .problem import ProblemInstance

SUITE_SEED = 20240611


def random_quadratic_doc(rng: np.random.Generator, n: int, B: float = 1.0, name: str = "",
                         dr: bool | None = None) -> dict:
    """Submodular quadratic with a passing monotonicity certificate.

    ``dr=False`` forces a positive diagonal (submodular but not DR), ``dr=True``
    a non-positive one; ``None`` draws the diagonal sign freely.
    """
    u = rng.uniform(0.3, 1.0, size=n) * B
    off = -rng.uniform(0.0, 0.8, size=(n, n))
    Q = np.triu(off, 1)
    Q = Q + Q.T
    if dr is None:
        diag = rng.uniform(-0.5, 0.5, size=n)
    elif dr:
        diag = -rng.uniform(0.0, 0.5, size=n)
    else:
        diag = rng.uniform(0.1, 0.5, size=n)
    Q[np.diag_indices(n)] = diag
    need = -np.minimum(Q * u[None, :], 0.0).sum(axis=1)
    c = need + rng.uniform(0.05, 1.0, size=n)
    return {
        "name": name,
        "objective": {"quadratic": {"c": c.tolist(), "Q": Q.tolist()}},
        "u": u.tolist(),
        "B": float(B),
    }


def random_concave_doc(rng: np.random.Generator, n: int, B: float = 1.0, name: str = "",
                       kind: str | None = None) -> dict:
    u = rng.uniform(0.3, 1.0, size=n) * B
    w = rng.uniform(0.2, 2.0, size=n)
    if kind is None:
        kind = ("one_minus_exp", "sqrt_shift")[int(rng.integers(2))]
    return {
        "name": name,
        "objective": {"concave_linear": {"w": w.tolist(), "kind": kind}},
        "u": u.tolist(),
        "B": float(B),
    }


@dataclass(frozen=True)
class SuiteCase:
    doc: dict
    eps: float
    resolution: float  # grid-oracle lattice spacing

    @property
    def name(self) -> str:
        return self.doc["name"]

    def instance(self) -> ProblemInstance:
        return instance_from_dict(self.doc)


def oracle_resolution(n: int, B: float) -> float:
    return B / 100 if n <= 2 else B / 30


def acceptance_suite(seed: int = SUITE_SEED) -> list[SuiteCase]:
    """24 instances: every (n, eps, family) with n in {2,3,4}, eps in {0.05,0.1,0.2},
    plus six extras (two hand-written n=2 cases, four non-DR quadratics)."""
    rng = np.random.default_rng(seed)
    cases = []
    for n in (2, 3, 4):
        for eps in (0.05, 0.1, 0.2):
            B = float(rng.choice([0.5, 1.0, 1.5]))
            q = random_quadratic_doc(rng, n, B, f"quad-n{n}-e{eps}")
            g = random_concave_doc(rng, n, B, f"clin-n{n}-e{eps}")
            res = oracle_resolution(n, B)
            cases += [SuiteCase(q, eps, res), SuiteCase(g, eps, res)]
    for k, (n, eps) in enumerate([(2, 0.05), (3, 0.1), (4, 0.2), (4, 0.05)]):
        d = random_quadratic_doc(rng, n, 1.0, f"quad-nondr-{k}-n{n}", dr=False)
        cases.append(SuiteCase(d, eps, oracle_resolution(n, 1.0)))
    cases.append(SuiteCase(pair_quadratic_doc(), 0.05, 0.01))
    cases.append(SuiteCase({
        "name": "clin-pair",
        "objective": {"concave_linear": {"w": [1.0, 1.0], "kind": "one_minus_exp"}},
        "u": [1.0, 1.0],
        "B": 1.0,
    }, 0.1, 0.01))
    return cases


def pair_quadratic_doc() -> dict:
    """``x1 + x2 - x1 x2 / 2`` on the unit box with unit budget; optimum 1 at a corner."""
    return {
        "name": "quad-pair",
        "objective": {"quadratic": {"c": [1.0, 1.0], "Q": [[0.0, -0.5], [-0.5, 0.0]]}},
        "u": [1.0, 1.0],
        "B": 1.0,
    }


def small_coordinate_suite(seed: int = SUITE_SEED + 1) -> list[SuiteCase]:
    """Instances with every ``u_i <= B / 5`` (n in {4, 5}), where plain CA is strong."""
    rng = np.random.default_rng(seed)
    cases = [SuiteCase({
        "name": "clin-flat-n5",
        "objective": {"concave_linear": {"w": [1.0] * 5, "kind": "one_minus_exp"}},
        "u": [0.2] * 5,
        "B": 1.0,
    }, 0.05, 0.02)]
    for k, (n, eps) in enumerate([(4, 0.05), (5, 0.1), (4, 0.1), (5, 0.05), (5, 0.2)]):
        B = float(rng.choice([1.0, 2.0]))
        if k % 2:
            d = random_concave_doc(rng, n, B, f"small-clin-{k}-n{n}")
        else:
            d = random_quadratic_doc(rng, n, B, f"small-quad-{k}-n{n}")
        u = rng.uniform(0.05, 0.2, size=n) * B
        d["u"] = u.tolist()
        if "quadratic" in d["objective"]:
            # re-certify monotonicity for the new box
            Q = np.asarray(d["objective"]["quadratic"]["Q"])
            need = -np.minimum(Q * u[None, :], 0.0).sum(axis=1)
            c = np.maximum(np.asarray(d["objective"]["quadratic"]["c"]), need + 0.05)
            d["objective"]["quadratic"]["c"] = c.tolist()
        cases.append(SuiteCase(d, eps, B / 50))
    return cases

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import subcoord as sc
from subcoord.onedim import ratio_grid_size_bound, target_eval_bound, target_search
from subcoord.oracle import dense_ratio_oracle, dense_target_oracle
from subcoord.suite import acceptance_suite


def fn(f, L=0.0):
    return sc.FunctionObjective(lambda x: f(x[0]), 1, L)


def recurrence(a, b, eps):
    """Reference grid written straight from the recurrence, in plain floats."""
    pts = [a]
    while True:
        z = pts[-1] + math.sqrt(eps * pts[-1])
        if z > b:
            break
        pts.append(z)
    if pts[-1] != b:
        pts.append(b)
    return pts


# -- grid ------------------------------------------------------------------------

def test_grid_degenerate_range():
    assert sc.build_ratio_grid(0.5, 0.5, 0.3).points.tolist() == [0.5]


def test_grid_first_points():
    pts = sc.build_ratio_grid(0.25, 1.0, 0.04).points
    assert pts[0] == 0.25 and pts[1] == pytest.approx(0.35, abs=1e-15)


def test_grid_size_example():
    pts = sc.build_ratio_grid(0.01, 1.0, 0.1, B=1.0).points
    assert len(pts) == len(recurrence(0.01, 1.0, 0.1))
    assert ratio_grid_size_bound(0.01, 0.1, 1.0) == 20
    assert len(pts) <= 20


@pytest.mark.parametrize("a, b, eps, B", [(0.0, 1.0, 0.1, None), (-1.0, 1.0, 0.1, None),
                                          (0.6, 0.5, 0.1, None), (0.1, 1.0, 0.0, None),
                                          (0.1, 1.0, 1.0, None), (0.1, 2.0, 0.1, 1.0)])
def test_grid_rejects_bad_ranges(a, b, eps, B):
    with pytest.raises(ValueError):
        sc.build_ratio_grid(a, b, eps, B)


@given(st.floats(1e-6, 1.0), st.floats(0.0, 1.0), st.floats(1e-3, 0.999), st.floats(1.0, 5.0))
def test_grid_laws(a, frac, eps, B):
    b = a + frac * (B - a)
    pts = sc.build_ratio_grid(a, b, eps, B).points
    assert pts.tolist() == recurrence(a, b, eps)
    assert pts[0] == a and pts[-1] == b
    assert np.all(np.diff(pts) > 0)  # sorted, no duplicate of b
    for p, q in zip(pts[:-2], pts[1:-1]):
        assert q - p <= math.sqrt(eps * p) + 1e-12
        assert (q - p) ** 2 / (2 * p) <= eps
    assert len(pts) <= ratio_grid_size_bound(a, eps, B)


# -- maximize_ratio ------------------------------------------------------------------

def test_ratio_linear_section_picks_largest_tie():
    F = fn(lambda y: y)
    y, ratio = sc.maximize_ratio(F, np.zeros(1), 0, 0.1, 1.0, 0.1)
    assert (y, ratio) == (1.0, 1.0)


def test_ratio_sqrt_section_peaks_at_start():
    F = fn(math.sqrt)
    y, ratio = sc.maximize_ratio(F, np.zeros(1), 0, 0.25, 1.0, 0.05)
    assert (y, ratio) == (0.25, 2.0)
    G = sc.FunctionObjective(lambda X: np.sqrt(X[:, 0]), 1)
    G._values = lambda X: np.sqrt(X[:, 0])
    assert dense_ratio_oracle(G, np.zeros(1), 0, 0.25, 1.0, 1e-4) == (0.25, 2.0)


def test_ratio_costs_one_eval_per_grid_point():
    F = sc.ConcaveLinearObjective([1.0, 2.0])
    grid = sc.build_ratio_grid(0.01, 0.8, 0.05).points
    before = F.eval_count
    sc.maximize_ratio(F, np.array([0.1, 0.0]), 1, 0.01, 0.8, 0.05)
    assert F.eval_count - before == len(grid)


def test_ratio_offset_ranks_marginal_gains():
    F = sc.ConcaveLinearObjective([1.0, 1.0])
    x = np.array([0.5, 0.0])
    fx = F.eval(x)
    y, r = sc.maximize_ratio(F, x, 1, 0.1, 0.5, 0.1, offset=fx)
    grid = sc.build_ratio_grid(0.1, 0.5, 0.1).points
    ref = [(F.eval(x + [0.0, g]) - fx) / g for g in grid]
    assert r == max(ref)


def test_ratio_rejects_bad_range():
    with pytest.raises(ValueError):
        sc.maximize_ratio(fn(lambda y: y), np.zeros(1), 0, 0.0, 1.0, 0.1)


def _sections(count, seed):
    """Random (F, x, i, room) sections drawn from the suite objectives."""
    rng = np.random.default_rng(seed)
    cases = acceptance_suite()
    for _ in range(count):
        inst = cases[int(rng.integers(len(cases)))].instance()
        i = int(rng.integers(inst.n))
        x = rng.uniform(0, 1, inst.n) * inst.upper * 0.5
        yield inst.objective, x, i, float(inst.upper[i] - x[i]), inst.budget


def test_ratio_within_eps_l_of_dense_oracle():
    rng = np.random.default_rng(99)
    for F, x, i, room, B in _sections(50, 1):
        eps = float(rng.choice([0.05, 0.1, 0.2]))
        a = float(rng.uniform(0.01, 0.5)) * room
        y, r = sc.maximize_ratio(F, x, i, a, room, eps)
        _, r_ref = dense_ratio_oracle(F, x, i, a, room, 1e-3)
        assert a <= y <= room
        assert r >= r_ref - eps * F.smoothness
        assert len(sc.build_ratio_grid(a, room, eps).points) <= ratio_grid_size_bound(a, eps, B)


# -- find_target_value ----------------------------------------------------------------

def test_target_at_start_value_is_zero():
    F = sc.ConcaveLinearObjective([1.0])
    x = np.array([0.2])
    assert sc.find_target_value(F, x, 0, F.eval(x), 0.05, 1.0) == 0.0


def test_target_linear_section_is_exact():
    F = fn(lambda y: y)
    assert sc.find_target_value(F, np.zeros(1), 0, 0.5, 0.05, 1.0) == 0.5


def test_target_square_section():
    F = fn(lambda y: y * y, L=2.0)
    G = sc.FunctionObjective(lambda x: x[0] ** 2, 1, 2.0)
    G._values = lambda X: X[:, 0] ** 2
    eps = 0.01
    y = sc.find_target_value(F, np.zeros(1), 0, 0.25, eps, 1.0)
    y_lo = dense_target_oracle(G, np.zeros(1), 0, 0.25 - eps * 2.0, 1e-5, 1.0)
    assert y_lo <= y <= 0.5
    assert y * y >= 0.25 - 0.02
    assert dense_target_oracle(G, np.zeros(1), 0, 0.25, 1e-5, 1.0) == pytest.approx(0.5, abs=1e-5)


def test_target_rejects_unreachable_values():
    F = sc.ConcaveLinearObjective([1.0])
    x = np.array([0.3])
    with pytest.raises(ValueError):
        sc.find_target_value(F, x, 0, F.eval([1.0]) + 0.01, 0.05, 1.0)
    with pytest.raises(ValueError):
        sc.find_target_value(F, x, 0, F.eval(x) - 0.01, 0.05, 1.0)
    with pytest.raises(ValueError):
        sc.find_target_value(F, x, 0, 0.5, 1.5, 1.0)


def test_target_flat_section_returns_bracket_start():
    F = fn(lambda y: 1.0)
    res = target_search(F, np.zeros(1), 0, 1.0, 0.1, 1.0)
    assert res.y == res.lo == 0.0


def _bisection_steps(room, eps):
    k = 0
    while room / 2**k >= eps:
        k += 1
    return k


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99), st.sampled_from([0.01, 0.05, 0.1, 0.2]),
       st.floats(0.1, 3.0))
def test_target_guarantees_and_exact_eval_count(t, x0, eps, w):
    F = sc.ConcaveLinearObjective([w])
    x = np.array([x0 * 0.5])
    room = 1.0 - x[0]
    lo_v, hi_v = F.eval(x), F.eval([1.0])
    v = lo_v + t * (hi_v - lo_v)
    before = F.eval_count
    res = target_search(F, x, 0, v, eps, 1.0)
    used = F.eval_count - before
    assert used == 2 + _bisection_steps(room, eps)
    assert used <= target_eval_bound(1.0, eps)
    assert 0.0 <= res.y <= room
    assert F.eval(x + res.y) >= v - eps * F.smoothness
    # minimality: the exact first crossing is -log(1 - v)/w - x0
    if v < 1.0:
        first = -math.log1p(-v) / w - x[0]
        assert res.y <= first + 1e-12


def test_target_minimality_against_dense_oracle():
    rng = np.random.default_rng(5)
    for F, x, i, room, B in _sections(40, 2):
        eps = float(rng.choice([0.05, 0.1, 0.2]))
        f0 = F.eval(x)
        top = F.eval(x + room * np.eye(len(x))[i])
        v = f0 + float(rng.uniform()) * (top - f0)
        y = sc.find_target_value(F, x, i, v, eps, x[i] + room)
        e = np.eye(len(x))[i]
        assert F.eval(x + y * e) >= v - eps * F.smoothness
        y_ref = dense_target_oracle(F, x, i, v, 1e-4, x[i] + room)
        assert y_ref is None or y_ref >= y


def _fd(F, x, i, y, h=1e-6):
    e = np.eye(len(x))[i]
    return (F.eval(x + (y + h) * e) - F.eval(x + (y - h) * e)) / (2 * h)


@pytest.mark.parametrize("kind", ["one_minus_exp", "sqrt_shift"])
def test_interpolation_slope_brackets_the_derivative(kind):
    rng = np.random.default_rng(11)
    for _ in range(20):
        w = rng.uniform(0.3, 2.0, 3)
        F = sc.ConcaveLinearObjective(w, kind)
        x = rng.uniform(0, 0.3, 3)
        i = int(rng.integers(3))
        eps = float(rng.choice([0.05, 0.1, 0.2]))
        upper = x[i] + 1.0
        f0 = F.eval(x)
        top = F.eval(x + np.eye(3)[i])
        v = f0 + rng.uniform(0.05, 0.95) * (top - f0)
        res = target_search(F, x, i, v, eps, upper)
        L = F.smoothness
        tol = 1e-6 * max(1.0, L)
        for y in np.linspace(res.lo, res.hi, 12)[1:-1]:
            g = _fd(F, x, i, y)
            assert res.slope - eps * L - tol <= g <= res.slope + tol


def test_interpolation_slope_on_quadratic_section():
    F = sc.QuadraticObjective([1.0, 1.0], [[0.3, -0.5], [-0.5, -0.2]])
    x = np.array([0.0, 0.2])
    res = target_search(F, x, 0, 0.9, 0.1, 1.0)
    L = F.smoothness
    for y in np.linspace(res.lo, res.hi, 12)[1:-1]:
        g = _fd(F, x, 0, y)
        assert res.slope - 0.1 * L - 1e-6 <= g <= res.slope + 1e-6

import pickle
import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import subcoord as sc
from subcoord.problem import ContractedObjective, feasibility_tol

from conftest import nondr_quadratic, pair_quadratic


def linear(weights, L=0.0):
    w = np.asarray(weights, dtype=float)
    return sc.FunctionObjective(lambda x: float(w @ x), len(w), L)


# -- instances and feasibility -------------------------------------------------

def test_instance_clamps_upper_to_budget():
    inst = sc.ProblemInstance(pair_quadratic(), [3.0, 0.5], 1.0)
    assert inst.upper.tolist() == [1.0, 0.5]
    assert not inst.upper.flags.writeable


@pytest.mark.parametrize("upper, budget", [([1.0, 0.0], 1.0), ([1.0, np.inf], 1.0), ([1.0, 1.0], 0.0),
                                           ([1.0, 1.0], -1.0), ([1.0], 1.0)])
def test_instance_rejects_bad_domains(upper, budget):
    with pytest.raises(ValueError):
        sc.ProblemInstance(pair_quadratic(), upper, budget)


def test_feasible_examples(pair_instance):
    assert sc.feasible(pair_instance, [0.0, 0.0])
    assert not sc.feasible(pair_instance, [0.6, 0.6])
    assert sc.feasible(pair_instance, [1.0, 0.0])


def test_feasible_tolerance_and_errors(pair_instance):
    tol = feasibility_tol(1.0)
    assert sc.feasible(pair_instance, [1.0 + 0.5 * tol, 0.0])
    assert not sc.feasible(pair_instance, [1.0 + 2 * tol, 0.0])
    assert not sc.feasible(pair_instance, [-2 * tol, 0.0])
    assert not sc.feasible(pair_instance, [np.nan, 0.0])
    with pytest.raises(ValueError):
        sc.feasible(pair_instance, [0.0, 0.0, 0.0])


# -- evaluation accounting -------------------------------------------------------

def test_eval_counts_one_per_call():
    F = pair_quadratic()
    for k in range(1, 6):
        F.eval([0.1 * k, 0.2])
        assert F.eval_count == k
    F.section([0.0, 0.0], 0, [0.1, 0.2, 0.3])
    assert F.eval_count == 8
    F.values(np.zeros((4, 2)))
    assert F.eval_count == 12


def test_eval_deterministic():
    F = pair_quadratic()
    x = np.array([0.3, 0.7])
    assert F.eval(x) == F.eval(x.copy())


def test_eval_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        pair_quadratic().eval([1.0])
    with pytest.raises(IndexError):
        pair_quadratic().section([0.0, 0.0], 2, [0.1])


def test_counter_is_exact_under_threads():
    F = pair_quadratic()

    def work():
        for _ in range(500):
            F.eval([0.2, 0.3])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert F.eval_count == 4000


def test_pickle_roundtrip_keeps_counter():
    F = pair_quadratic()
    F.eval([0.1, 0.1])
    G = pickle.loads(pickle.dumps(F))
    assert G.eval_count == 1
    assert G.eval([0.4, 0.5]) == F.eval([0.4, 0.5])


def test_smoothness_must_be_finite_non_negative():
    with pytest.raises(ValueError):
        sc.FunctionObjective(lambda x: 0.0, 1, -1.0)
    with pytest.raises(ValueError):
        sc.FunctionObjective(lambda x: 0.0, 1, np.inf)


# -- shift ---------------------------------------------------------------------

def test_shift_identity():
    F = pair_quadratic()
    G = sc.shift_domain(F, [0.0, 0.0])
    for x in np.random.default_rng(0).uniform(0, 1, size=(20, 2)):
        assert G.eval(x) == F.eval(x)
    assert G.smoothness == F.smoothness


def test_shift_linear_example():
    G = sc.shift_domain(linear([1.0]), [1.0])
    assert G.eval([0.5]) == 1.5


@given(st.integers(0, 2**32 - 1))
def test_shift_is_exact_re_evaluation(seed):
    rng = np.random.default_rng(seed)
    F = sc.ConcaveLinearObjective(rng.uniform(0, 2, 3), "sqrt_shift")
    a = rng.uniform(0, 1, 3)
    G = sc.shift_domain(F, a)
    for x in rng.uniform(0, 1, size=(100, 3)):
        assert G.eval(x) - F.eval(x + a) == 0.0


def test_shift_rejects_bad_vectors():
    with pytest.raises(ValueError):
        sc.shift_domain(pair_quadratic(), [1.0])
    with pytest.raises(ValueError):
        sc.shift_domain(pair_quadratic(), [np.nan, 0.0])


# -- rescale ---------------------------------------------------------------------

def test_rescale_identity():
    F = pair_quadratic()
    inst = sc.rescale_weights(F, [1.0, 1.0], [1.0, 1.0], 1.0)
    assert inst.upper.tolist() == [1.0, 1.0] and inst.budget == 1.0
    assert inst.smoothness == F.smoothness
    for x in np.random.default_rng(1).uniform(0, 1, size=(20, 2)):
        assert inst.objective.eval(x) == F.eval(x)


def test_rescale_linear_example_and_smoothness():
    inst = sc.rescale_weights(linear([1.0, 1.0], L=3.0), [2.0, 1.0], [1.0, 1.0], 5.0)
    assert inst.objective.eval([1.0, 0.0]) == 0.5
    assert inst.upper.tolist() == [2.0, 1.0]
    # chain rule: the inverse scaling has norm 1/min(w), applied on both sides
    inst = sc.rescale_weights(linear([1.0, 1.0], L=3.0), [0.5, 4.0], [1.0, 1.0], 5.0)
    assert inst.smoothness == pytest.approx(3.0 / 0.25)


def test_rescale_feasible_set_equivalence():
    rng = np.random.default_rng(7)
    w = np.array([0.5, 2.0, 1.5])
    u = np.array([1.0, 0.4, 0.8])
    B = 1.2
    inst = sc.rescale_weights(linear([1, 1, 1]), w, u, B)
    hits = 0
    for y in rng.uniform(0, inst.upper, size=(400, 3)):
        if not sc.feasible(inst, y):
            continue
        hits += 1
        x = y / w
        assert w @ x <= B + feasibility_tol(B)
        assert np.all(x <= u + 1e-12)
    assert hits >= 100


def test_rescale_rejects_non_positive_weights():
    with pytest.raises(ValueError):
        sc.rescale_weights(pair_quadratic(), [1.0, 0.0], [1.0, 1.0], 1.0)


def test_rescale_smoothness_bounds_the_estimate():
    F = sc.QuadraticObjective([1.0, 1.0], [[-0.3, -0.5], [-0.5, -0.2]])
    w = np.array([0.5, 1.0])
    inst = sc.rescale_weights(F, w, [1.0, 1.0], 2.0)
    est = sc.estimate_smoothness(inst.objective, inst.upper, 200, 3)
    assert est <= inst.smoothness * (1 + 1e-3)
    # a scale of min(w) instead of min(w)**2 would be too small here
    assert est > F.smoothness / w.min()


# -- contraction ---------------------------------------------------------------

def test_contract_zero_is_zero():
    F = pair_quadratic()
    G = sc.contract(F, [0.7, 0.0], {0})
    assert G.eval([0.0]) == 0.0
    assert G.dimension == 1 and G.smoothness == F.smoothness


def test_contract_example():
    G = sc.contract(pair_quadratic(), [1.0, 0.0], {0})
    assert G.eval([1.0]) == 0.5


def test_contract_counts_on_parent():
    F = pair_quadratic()
    G = sc.contract(F, [1.0, 0.0], {0})
    before = F.eval_count
    G.eval([0.5])
    assert G.eval_count == 1
    assert F.eval_count == before + 1


def test_contract_errors():
    F = pair_quadratic()
    with pytest.raises(IndexError):
        sc.contract(F, [0.0, 0.0], {2})
    with pytest.raises(ValueError):
        sc.contract(F, [0.5, 0.5], {0})
    with pytest.raises(ValueError):
        sc.contract(F, [0.5], {0})


def test_contract_preserves_submodularity_on_nondr_quadratic():
    F = sc.QuadraticObjective([1.0, 1.0, 1.0], [[0.4, -0.5, -0.2], [-0.5, 0.4, -0.1], [-0.2, -0.1, 0.3]])
    G = sc.contract(F, [0.0, 0.6, 0.0], {1})
    rep = sc.check_submodular(G, [1.0, 1.0], 1000, 1)
    assert rep.ok, rep.witnesses


@given(st.integers(0, 2**32 - 1), st.permutations(range(4)))
def test_contract_twice_equals_contract_once(seed, order):
    rng = np.random.default_rng(seed)
    F = sc.ConcaveLinearObjective(rng.uniform(0, 2, 4))
    h1, h2 = order[0], order[1]
    t1, t2 = rng.uniform(0, 1, 2)
    base1 = np.zeros(4)
    base1[h1] = t1
    G1 = sc.contract(F, base1, {h1})
    keep1 = [i for i in range(4) if i != h1]
    base2 = np.zeros(3)
    base2[keep1.index(h2)] = t2
    G12 = sc.contract(G1, base2, {keep1.index(h2)})
    combined = base1.copy()
    combined[h2] = t2
    G = sc.contract(F, combined, {h1, h2})
    assert isinstance(G12, ContractedObjective) and G12.parent is F
    for x in rng.uniform(0, 1, size=(30, 2)):
        assert G12.eval(x) == G.eval(x)
    # direct definition
    keep = [i for i in range(4) if i not in (h1, h2)]
    x = rng.uniform(0, 1, 2)
    full = combined.copy()
    full[keep] = x
    assert G.eval(x) == F.eval(full) - F.eval(combined)


def test_contract_batch_matches_scalar():
    F = nondr_quadratic()
    G = sc.contract(F, [0.3, 0.0], {0})
    X = np.linspace(0, 1, 11)[:, None]
    batch = G.values(X)
    scalar = np.array([G.eval(x) for x in X])
    assert np.allclose(batch, scalar, rtol=0, atol=1e-14)

import numpy as np
import pytest

from instrorder import (
    DimensionMismatch,
    LabelMismatch,
    Povm,
    StochasticMatrix,
    apply_post_processing,
    find_post_processing,
    is_indecomposable_povm,
    is_trivial,
    max_effect_distance,
    minimal_sufficient,
    povm_equivalent,
    proportional_inequivalent_pair,
    random_distribution,
    random_povm,
    relabel,
    trivial_povm,
    validate_povm,
)
from instrorder.linalg import frob_dist

from helpers import basis_pvm, random_stochastic


def test_validate_accepts_basis_pvm():
    assert validate_povm(basis_pvm(2)).ok


def test_validate_flags_completeness():
    P = Povm(2, [("a", np.eye(2)), ("b", np.eye(2))])
    report = validate_povm(P)
    assert not report.ok
    assert any("completeness" in v for v in report.violations)


def test_validate_flags_positivity():
    P = Povm(2, [("a", np.diag([1.1, 1.0])), ("b", np.diag([-0.1, 0.0]))])
    report = validate_povm(P)
    assert not report.ok
    assert any("positivity" in v and "b" in v for v in report.violations)


def test_validate_flags_duplicate_labels():
    P = Povm(2, [("a", 0.5 * np.eye(2)), ("a", 0.5 * np.eye(2))])
    assert not validate_povm(P).ok


def test_stochastic_matrix_invariants():
    StochasticMatrix(["x"], ["u", "v"], [[0.25, 0.75]])
    with pytest.raises(ValueError):
        StochasticMatrix(["x"], ["u", "v"], [[0.5, 0.6]])
    with pytest.raises(ValueError):
        StochasticMatrix(["x"], ["u", "v"], [[-0.2, 1.2]])
    with pytest.raises(ValueError):
        StochasticMatrix(["x"], ["u"], [[1.0], [1.0]])


def test_apply_identity_permutation():
    A = random_povm(3, 2, seed=0)
    nu = StochasticMatrix(A.labels, A.labels, np.eye(3))
    assert max_effect_distance(apply_post_processing(A, nu), A) < 1e-12


def test_apply_merge_to_single_outcome():
    A = basis_pvm(2)
    nu = StochasticMatrix(A.labels, ["all"], [[1.0], [1.0]])
    B = apply_post_processing(A, nu)
    assert B.labels == ["all"]
    assert frob_dist(B.effect("all"), np.eye(2)) < 1e-12


def test_apply_constant_rows_give_trivial():
    A = random_povm(3, 2, seed=1)
    p = random_distribution(2, seed=2)
    nu = StochasticMatrix(A.labels, ["0", "1"], np.tile(p, (3, 1)))
    B = apply_post_processing(A, nu)
    q = is_trivial(B)
    assert q is not None
    assert np.linalg.norm(q - p) < 1e-12


def test_apply_requires_matching_rows():
    A = random_povm(2, 2, seed=3)
    nu = StochasticMatrix(["p", "q"], ["u"], [[1.0], [1.0]])
    with pytest.raises(LabelMismatch):
        apply_post_processing(A, nu)


def test_find_identity_feasible():
    A = random_povm(3, 2, seed=4)
    nu = find_post_processing(A, A)
    assert nu is not None
    assert max_effect_distance(apply_post_processing(A, nu), A) < 1e-9


def test_find_reaches_trivial():
    for seed in range(10):
        A = random_povm(2 + seed % 3, 2 + seed % 2, seed)
        p = random_distribution(2, seed + 90)
        T = trivial_povm(p, A.dim)
        nu = find_post_processing(A, T)
        assert nu is not None
        assert max_effect_distance(apply_post_processing(A, nu), T) < 1e-9


def test_find_rejects_weight_mismatched_pair():
    A, B = proportional_inequivalent_pair()
    assert find_post_processing(A, B) is None
    assert find_post_processing(B, A) is None


def test_find_rejects_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        find_post_processing(random_povm(2, 2, 0), random_povm(2, 3, 0))


def test_find_soundness_and_completeness():
    # forward-construct B = nu(A), then recover some feasible post-processing
    for seed in range(500):
        nA = 2 + seed % 3
        nB = 1 + seed % 3
        d = 2 + seed % 2
        A = random_povm(nA, d, seed)
        nu = random_stochastic(A.labels, [str(i) for i in range(nB)], seed + 1)
        B = apply_post_processing(A, nu)
        found = find_post_processing(A, B)
        assert found is not None
        assert max_effect_distance(apply_post_processing(A, found), B) < 1e-9


def test_relabel_bijection():
    A = random_povm(3, 2, seed=7)
    B = relabel(A, {"0": "c", "1": "a", "2": "b"})
    assert sorted(B.labels) == ["a", "b", "c"]
    assert frob_dist(B.effect("c"), A.effect("0")) < 1e-15


def test_relabel_constant_map():
    A = random_povm(3, 2, seed=8)
    B = relabel(A, lambda x: "all")
    assert B.labels == ["all"]
    assert frob_dist(B.effect("all"), np.eye(2)) < 1e-9


def test_relabel_merges_named_outcomes():
    A = basis_pvm(3)
    B = relabel(A, {"0": "low", "1": "low", "2": "high"})
    assert frob_dist(B.effect("low"), np.diag([1.0, 1.0, 0.0])) < 1e-15
    assert frob_dist(B.effect("high"), np.diag([0.0, 0.0, 1.0])) < 1e-15


def test_relabel_matches_delta_post_processing():
    A = random_povm(4, 2, seed=9)
    f = {"0": "u", "1": "v", "2": "u", "3": "v"}
    entries = [[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]
    nu = StochasticMatrix(A.labels, ["u", "v"], entries)
    assert max_effect_distance(relabel(A, f), apply_post_processing(A, nu)) < 1e-15


def test_relabel_requires_total_map():
    with pytest.raises(LabelMismatch):
        relabel(random_povm(2, 2, 0), {"0": "a"})


def test_is_trivial_examples():
    p = is_trivial(Povm(2, [("0", 0.5 * np.eye(2)), ("1", 0.5 * np.eye(2))]))
    assert p is not None and np.allclose(p, [0.5, 0.5])
    assert is_trivial(basis_pvm(2)) is None
    q = is_trivial(trivial_povm([0.3, 0.7], 3))
    assert q is not None and np.allclose(q, [0.3, 0.7])


def test_indecomposable_examples():
    assert is_indecomposable_povm(basis_pvm(2))
    assert not is_indecomposable_povm(trivial_povm([0.5, 0.5], 2))
    A, _ = proportional_inequivalent_pair()
    assert is_indecomposable_povm(A)


def test_indecomposable_ignores_zero_effects():
    A = Povm(2, [("0", np.diag([1.0, 0.0])), ("z", np.zeros((2, 2))), ("1", np.diag([0.0, 1.0]))])
    assert is_indecomposable_povm(A)


def test_minimal_sufficient_independent_input():
    A = random_povm(3, 3, seed=11)
    R, g = minimal_sufficient(A)
    assert R.labels == A.labels
    assert max_effect_distance(R, A) < 1e-12
    assert all(abs(g.weights[x] - 1.0) < 1e-12 for x in A.labels)


def test_minimal_sufficient_merges_proportional():
    P0 = np.diag([1.0, 0.0])
    P1 = np.diag([0.0, 1.0])
    A = Povm(2, [("a", 0.5 * P0), ("b", 0.5 * P0), ("c", P1)])
    R, g = minimal_sufficient(A)
    assert len(R) == 2
    assert g.class_of["a"] == g.class_of["b"]
    assert abs(g.weights["a"] - 0.5) < 1e-12
    assert abs(g.weights["b"] - 0.5) < 1e-12
    assert abs(g.weights["c"] - 1.0) < 1e-12
    assert frob_dist(R.effect(g.class_of["a"]), P0) < 1e-12


def test_minimal_sufficient_collapses_trivial():
    T = trivial_povm([0.25, 0.25, 0.5], 2)
    R, g = minimal_sufficient(T)
    assert len(R) == 1
    assert frob_dist(R.effects[0], np.eye(2)) < 1e-12


def test_minimal_sufficient_drops_zero_effects():
    A = Povm(2, [("0", np.eye(2) * 0.5), ("z", np.zeros((2, 2))), ("1", np.eye(2) * 0.5)])
    R, g = minimal_sufficient(A)
    assert "z" in g.dropped
    assert len(R) == 1  # both halves of identity merge


def test_minimal_sufficient_idempotent_and_reconstructs():
    for seed in range(40):
        A = random_povm(2 + seed % 4, 2 + seed % 3, seed)
        R, g = minimal_sufficient(A)
        # reconstruction A(x) = c_x * R([x])
        for x in A.labels:
            assert frob_dist(A.effect(x), g.weights[x] * R.effect(g.class_of[x])) < 1e-9
        R2, g2 = minimal_sufficient(R)
        assert R2.labels == R.labels
        assert all(abs(g2.weights[x] - 1.0) < 1e-12 for x in R.labels)
        # pairwise linear independence of the reduced effects
        effs = [E / np.trace(E).real for E in R.effects]
        for i in range(len(effs)):
            for j in range(i + 1, len(effs)):
                assert frob_dist(effs[i], effs[j]) > 1e-9


def test_equivalent_to_own_minimal_form():
    for seed in range(15):
        A = random_povm(2 + seed % 3, 2, seed + 40)
        R, _ = minimal_sufficient(A)
        assert povm_equivalent(A, R) is not None


def test_equivalent_under_bijective_relabeling():
    A = random_povm(3, 2, seed=12)
    B = relabel(A, {"0": "x", "1": "y", "2": "z"})
    out = povm_equivalent(A, B)
    assert out is not None
    nu, mu = out
    assert max_effect_distance(apply_post_processing(B, nu), A) < 1e-9
    assert max_effect_distance(apply_post_processing(A, mu), B) < 1e-9
    # permutation matrices: single unit entry per row
    assert np.allclose(np.sort(np.asarray(nu.entries), axis=1)[:, -1], 1.0)


def test_equivalent_after_outcome_split():
    A = random_povm(3, 2, seed=13)
    split = [("0a", 0.5 * A.effect("0")), ("0b", 0.5 * A.effect("0"))]
    B = Povm(2, split + [(x, A.effect(x)) for x in A.labels[1:]])
    out = povm_equivalent(A, B)
    assert out is not None
    nu, mu = out
    assert max_effect_distance(apply_post_processing(B, nu), A) < 1e-9
    assert max_effect_distance(apply_post_processing(A, mu), B) < 1e-9


def test_equivalence_rejects_weight_mismatch():
    A, B = proportional_inequivalent_pair()
    assert povm_equivalent(A, B) is None


def test_trivial_stays_trivial_under_post_processing():
    for seed in range(10):
        p = random_distribution(3, seed)
        T = trivial_povm(p, 2)
        mu = random_stochastic(T.labels, ["a", "b"], seed + 5)
        assert is_trivial(apply_post_processing(T, mu)) is not None


def test_trivial_povm_labels():
    T = trivial_povm([0.5, 0.5], 2, labels=["hi", "lo"])
    assert T.labels == ["hi", "lo"]
    assert validate_povm(T).ok

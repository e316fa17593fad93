import numpy as np
import pytest

from instrorder import (
    DimensionMismatch,
    Instrument,
    OutcomeSetMismatch,
    QuantumOperation,
    State,
    StochasticMatrix,
    UnknownLabel,
    apply,
    apply_post_processing,
    choi,
    choi_distance,
    compose_post_processing,
    detailed_instrument,
    identity_instrument,
    induced_povm,
    instrument_distance,
    is_trivial,
    luders,
    luders_refinement_witness,
    max_effect_distance,
    measure_and_prepare,
    minimal_kraus,
    mix,
    pair_label,
    random_distribution,
    random_instrument,
    random_povm,
    random_state,
    random_unitary,
    relabel_instrument,
    total_channel,
    tracked_mix,
    trash_and_prepare,
    trivial_povm,
    validate_instrument,
    validate_state,
    zero_operation,
)
from instrorder.linalg import frob_dist, numerical_rank

from helpers import basis_pvm

PAULI = [
    np.eye(2, dtype=complex),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
]


def depolarizing_channel():
    return Instrument(2, 2, [("0", QuantumOperation(2, 2, [P / 2.0 for P in PAULI]))])


def test_validate_accepts_luders():
    assert validate_instrument(luders(basis_pvm(2))).ok


def test_validate_flags_scaled_kraus():
    L = luders(basis_pvm(2))
    bad = Instrument(
        2, 2, [(x, QuantumOperation(2, 2, [2.0 * K for K in L.operation(x).kraus])) for x in L.labels]
    )
    report = validate_instrument(bad)
    assert not report.ok
    assert any("normalization" in v or "subnormalization" in v for v in report.violations)


def test_validate_accepts_identity_channel():
    assert validate_instrument(identity_instrument(3)).ok


def test_apply_identity():
    rho = random_state(2, seed=0)
    out, prob = apply(identity_instrument(2), "0", rho)
    assert frob_dist(out, rho.matrix) < 1e-12
    assert abs(prob - 1.0) < 1e-12


def test_apply_luders_basis():
    out, prob = apply(luders(basis_pvm(2)), "0", State(2, np.diag([1.0, 0.0]).astype(complex)))
    assert frob_dist(out, np.diag([1.0, 0.0])) < 1e-12
    assert abs(prob - 1.0) < 1e-12


def test_apply_trash_and_prepare():
    p = [0.3, 0.7]
    xs = [random_state(2, 1), random_state(2, 2)]
    T = trash_and_prepare(p, xs, dim_in=3)
    rho = random_state(3, seed=3)
    for k, x in enumerate(T.labels):
        out, prob = apply(T, x, rho)
        assert abs(prob - p[k]) < 1e-12
        assert frob_dist(out, p[k] * xs[k].matrix) < 1e-12


def test_apply_errors():
    I = identity_instrument(2)
    with pytest.raises(UnknownLabel):
        apply(I, "missing", random_state(2, 0))
    with pytest.raises(DimensionMismatch):
        apply(I, "0", random_state(3, 0))


def test_induced_povm_of_luders():
    A = random_povm(3, 2, seed=4)
    assert max_effect_distance(induced_povm(luders(A)), A) < 1e-12


def test_induced_povm_of_trash_and_prepare():
    p = random_distribution(3, seed=5)
    T = trash_and_prepare(p, [random_state(2, 10 + i) for i in range(3)], dim_in=2)
    q = is_trivial(induced_povm(T))
    assert q is not None and np.linalg.norm(q - p) < 1e-9


def test_induced_povm_of_measure_and_prepare():
    A = random_povm(3, 2, seed=6)
    M = measure_and_prepare(A, [random_state(2, 20 + i) for i in range(3)])
    assert max_effect_distance(induced_povm(M), A) < 1e-9


def test_choi_of_identity():
    C = choi(identity_instrument(2).operation("0"))
    expected = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            expected[i * 2 + i, j * 2 + j] = 1.0
    assert frob_dist(C, expected) < 1e-15
    assert numerical_rank(C) == 1


def test_choi_of_depolarizing():
    C = choi(depolarizing_channel().operation("0"))
    # oracle: independent spectral decomposition
    w = np.linalg.eigvalsh(C)
    assert np.allclose(w, 0.5)
    assert numerical_rank(C) == 4


def test_minimal_kraus_collapses_duplicates():
    K = random_unitary(2, seed=7) * 0.7
    op = QuantumOperation(2, 2, [K / np.sqrt(2.0), K / np.sqrt(2.0)])
    m = minimal_kraus(op)
    assert len(m.kraus) == 1
    assert choi_distance(op, m) < 1e-12


def test_minimal_kraus_counts_choi_rank():
    op = depolarizing_channel().operation("0")
    m = minimal_kraus(op)
    assert len(m.kraus) == numerical_rank(choi(op)) == 4
    assert choi_distance(op, m) < 1e-12


def test_minimal_kraus_of_zero_operation():
    m = minimal_kraus(zero_operation(2, 3))
    assert len(m.kraus) == 1
    assert frob_dist(m.kraus[0], np.zeros((3, 2))) == 0.0


def test_compose_delta_identity_recovers_instrument():
    I = random_instrument(2, 2, 2, 2, seed=8)
    processors = {}
    for x in I.labels:
        outcomes = []
        for y in I.labels:
            if y == x:
                outcomes.append((y, QuantumOperation(2, 2, [np.eye(2, dtype=complex)])))
            else:
                outcomes.append((y, zero_operation(2, 2)))
        processors[x] = Instrument(2, 2, outcomes)
    J = compose_post_processing(I, processors)
    assert instrument_distance(J, I) < 1e-12


def test_compose_identity_source_gives_processor():
    R = random_instrument(3, 2, 2, 1, seed=9)
    J = compose_post_processing(identity_instrument(2), {"0": R})
    assert instrument_distance(J, R) < 1e-12


def test_compose_luders_with_preparations_is_measure_and_prepare():
    basis = basis_pvm(2)
    L = luders(basis)
    prep = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    processors = {}
    for k, x in enumerate(L.labels):
        outcomes = []
        for j, y in enumerate(L.labels):
            if y == x:
                ket = np.zeros((2, 1), dtype=complex)
                ket[k, 0] = 1.0
                # trash everything to |k>
                kraus = [ket @ np.eye(1, 2, m, dtype=complex) for m in range(2)]
                outcomes.append((y, QuantumOperation(2, 2, kraus)))
            else:
                outcomes.append((y, zero_operation(2, 2)))
        processors[x] = Instrument(2, 2, outcomes)
    J = compose_post_processing(L, processors)
    M = measure_and_prepare(basis, [State(2, prep[0]), State(2, prep[1])])
    assert instrument_distance(J, M) < 1e-12


def test_compose_validates_dimensions_and_outcomes():
    I = random_instrument(2, 2, 2, 1, seed=10)
    bad_dim = {x: identity_instrument(3) for x in I.labels}
    with pytest.raises(DimensionMismatch):
        compose_post_processing(I, bad_dim)
    p0 = identity_instrument(2)
    p1 = relabel_instrument(identity_instrument(2), {"0": "other"})
    with pytest.raises(OutcomeSetMismatch):
        compose_post_processing(I, {I.labels[0]: p0, I.labels[1]: p1})


def test_luders_of_trivial_povm():
    p = [0.25, 0.75]
    L = luders(trivial_povm(p, 2))
    for k, x in enumerate(L.labels):
        assert frob_dist(L.operation(x).kraus[0], np.sqrt(p[k]) * np.eye(2)) < 1e-12


def test_luders_induced_matches_input():
    for seed in range(10):
        A = random_povm(2 + seed % 3, 2 + seed % 3, seed)
        assert max_effect_distance(induced_povm(luders(A)), A) < 1e-9


def test_trash_and_prepare_single_target():
    T = trash_and_prepare([1.0], [State(2, np.diag([1.0, 0.0]).astype(complex))], dim_in=2)
    rho = random_state(2, seed=11)
    out, prob = apply(T, T.labels[0], rho)
    assert abs(prob - 1.0) < 1e-12
    assert frob_dist(out, np.diag([1.0, 0.0])) < 1e-12


def test_measure_and_prepare_probabilities():
    plus = np.full((2, 2), 0.5, dtype=complex)
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex)
    M = measure_and_prepare(basis_pvm(2), [State(2, plus), State(2, minus)])
    out, prob = apply(M, "0", State(2, np.diag([1.0, 0.0]).astype(complex)))
    assert abs(prob - 1.0) < 1e-12
    assert frob_dist(out, plus) < 1e-12


def test_detailed_of_indecomposable_is_relabeling():
    L = luders(random_povm(2, 2, seed=12))
    D = detailed_instrument(L)
    assert D.labels == [pair_label(1, x) for x in L.labels]
    for x in L.labels:
        assert choi_distance(D.operation(pair_label(1, x)), L.operation(x)) < 1e-12


def test_detailed_of_multi_kraus_channel():
    D = detailed_instrument(depolarizing_channel())
    assert len(D) == 4
    assert choi_distance(total_channel(D), total_channel(depolarizing_channel())) < 1e-12


def test_detailed_preserves_total_channel():
    for seed in range(10):
        I = random_instrument(2, 2, 3, 2, seed)
        D = detailed_instrument(I)
        assert choi_distance(total_channel(D), total_channel(I)) < 1e-9
        assert all(len(op.kraus) == 1 for op in D.operations)


def test_mix_single_component():
    I = random_instrument(2, 2, 2, 1, seed=13)
    assert instrument_distance(mix([I], [1.0]), I) < 1e-15


def test_mix_identical_components():
    I = random_instrument(2, 2, 2, 1, seed=14)
    assert instrument_distance(mix([I, I], [0.5, 0.5]), I) < 1e-12


def test_tracked_mix_of_identity_and_unitary():
    U = random_unitary(2, seed=15)
    I1 = identity_instrument(2)
    I2 = Instrument(2, 2, [("0", QuantumOperation(2, 2, [U]))])
    T = tracked_mix([I1, I2], [0.5, 0.5])
    assert len(T) == 2
    assert frob_dist(T.operation(pair_label(1, "0")).kraus[0], np.sqrt(0.5) * np.eye(2)) < 1e-12
    assert frob_dist(T.operation(pair_label(2, "0")).kraus[0], np.sqrt(0.5) * U) < 1e-12


def test_relabel_merging_tracked_mix_gives_mix():
    for seed in range(5):
        parts = [random_instrument(2, 2, 2, 1, seed + 30), random_instrument(2, 2, 2, 2, seed + 60)]
        p = random_distribution(2, seed + 90)
        T = tracked_mix(parts, p)
        merge = {pair_label(i + 1, x): x for i, c in enumerate(parts) for x in c.labels}
        assert instrument_distance(relabel_instrument(T, merge), mix(parts, p)) < 1e-12


def test_mix_choi_additivity():
    parts = [random_instrument(2, 2, 2, 2, seed) for seed in (16, 17, 18)]
    p = random_distribution(3, seed=19)
    M = mix(parts, p)
    for x in M.labels:
        expected = sum(pi * choi(c.operation(x)) for pi, c in zip(p, parts))
        assert frob_dist(choi(M.operation(x)), expected) < 1e-13


def test_mix_pads_missing_outcomes_with_zero():
    I1 = identity_instrument(2)
    I2 = relabel_instrument(identity_instrument(2), {"0": "other"})
    M = mix([I1, I2], [0.5, 0.5])
    assert sorted(M.labels) == ["0", "other"]
    assert validate_instrument(M).ok


def test_luders_refinement_of_luders():
    A = random_povm(2, 2, seed=20)
    L = luders(A)
    phi = luders_refinement_witness(L)
    assert instrument_distance(compose_post_processing(luders(induced_povm(L)), phi), L) < 1e-12


def test_luders_refinement_of_measure_and_prepare():
    A = random_povm(2, 2, seed=21)
    M = measure_and_prepare(A, [random_state(2, 40 + i) for i in range(2)])
    phi = luders_refinement_witness(M)
    assert instrument_distance(compose_post_processing(luders(induced_povm(M)), phi), M) < 1e-9


def test_luders_refinement_random_instruments():
    for seed in range(12):
        I = random_instrument(3, 2, 2, 2, seed + 100)
        phi = luders_refinement_witness(I)
        L = luders(induced_povm(I))
        assert instrument_distance(compose_post_processing(L, phi), I) < 1e-9


def test_probability_conservation():
    for seed in range(20):
        I = random_instrument(2 + seed % 3, 2 + seed % 2, 2 + seed % 3, 1 + seed % 2, seed)
        rho = random_state(I.dim_in, seed + 500)
        total = sum(apply(I, x, rho)[1] for x in I.labels)
        assert abs(total - 1.0) < 1e-9


def test_composed_induced_povm_matches_trace_rule():
    # measure-and-prepare source: induced POVM of the composition equals the
    # post-processing of the induced POVM by nu_xy = tr[R^(x)_y(sigma_x)]
    for seed in range(8):
        A = random_povm(2, 2, seed + 200)
        sigmas = [random_state(2, seed + 210 + i) for i in range(2)]
        M = measure_and_prepare(A, sigmas)
        processors = {x: random_instrument(2, 2, 2, 1, seed + 220 + k) for k, x in enumerate(M.labels)}
        J = compose_post_processing(M, processors)
        entries = np.zeros((2, 2))
        for k, x in enumerate(M.labels):
            R = processors[x]
            for j, y in enumerate(R.labels):
                out, prob = apply(R, y, sigmas[k])
                entries[k, j] = prob
        nu = StochasticMatrix(M.labels, processors[M.labels[0]].labels, entries)
        assert max_effect_distance(induced_povm(J), apply_post_processing(induced_povm(M), nu)) < 1e-9


def test_validate_state():
    assert validate_state(random_state(3, seed=23)).ok
    assert not validate_state(State(2, np.diag([0.6, 0.6]).astype(complex))).ok
    assert not validate_state(State(2, np.array([[1.0, 1.0], [0.0, 0.0]]))).ok
    assert not validate_state(State(2, np.diag([1.5, -0.5]).astype(complex))).ok

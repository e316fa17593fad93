"""Shared constructions used across the test modules."""
import numpy as np

from instrorder import (
    Instrument,
    Povm,
    QuantumOperation,
    StochasticMatrix,
    compose_post_processing,
    luders,
    random_distribution,
    random_isometry,
    random_rank1_povm,
    random_unitary,
    zero_operation,
)


def basis_pvm(d):
    outcomes = []
    for i in range(d):
        E = np.zeros((d, d), dtype=complex)
        E[i, i] = 1.0
        outcomes.append((str(i), E))
    return Povm(d, outcomes)


def random_stochastic(row_labels, col_labels, seed):
    rows = [random_distribution(len(col_labels), seed + 7919 * i) for i in range(len(row_labels))]
    return StochasticMatrix(list(row_labels), list(col_labels), np.array(rows))


def projective_povm(d, sizes, seed):
    # PVM whose effects are projectors onto groups of columns of a random unitary
    assert sum(sizes) == d
    U = random_unitary(d, seed)
    outcomes = []
    start = 0
    for g, size in enumerate(sizes):
        block = U[:, start : start + size]
        outcomes.append((str(g), block @ block.conj().T))
        start += size
    return Povm(d, outcomes)


def random_identity_class_instrument(n, d_in, branch_counts, seed):
    # per outcome x: branch_counts[x] isometries with pairwise orthogonal ranges
    total = sum(branch_counts)
    weights = random_distribution(total, seed)
    d_out = d_in * max(branch_counts)
    outcomes = []
    pos = 0
    for x, k in enumerate(branch_counts):
        W = random_isometry(k * d_in, d_out, seed + 104729 * (x + 1))
        kraus = []
        for i in range(k):
            V = W[:, i * d_in : (i + 1) * d_in]
            kraus.append(np.sqrt(weights[pos]) * V)
            pos += 1
        outcomes.append((str(x), QuantumOperation(d_in, d_out, kraus)))
    return Instrument(d_in, d_out, outcomes)


def random_indecomposable(n, d, seed):
    return luders(random_rank1_povm(n, d, seed))


def split_and_dress(I, d_out, seed):
    """Post-process I into an indecomposable-preserving target.

    Each outcome x is split into one or two target labels with classical
    weights, and each branch is dressed by an isometry dim_out -> d_out.
    Returns (J, processors); J = compose_post_processing(I, processors).
    """
    targets = []
    plan = {}
    for k, x in enumerate(I.labels):
        n_split = 2 if (seed + k) % 2 == 0 else 1
        w = random_distribution(n_split, seed + 31 * k) if n_split > 1 else np.array([1.0])
        entry = []
        for j in range(n_split):
            label = f"{x}.{j}"
            V = random_isometry(I.dim_out, d_out, seed + 1009 * k + 101 * j)
            entry.append((label, w[j], V))
            targets.append(label)
        plan[x] = entry
    processors = {}
    for x in I.labels:
        outcomes = []
        covered = {lbl: (w, V) for lbl, w, V in plan[x]}
        for label in targets:
            if label in covered:
                w, V = covered[label]
                op = QuantumOperation(I.dim_out, d_out, [np.sqrt(w) * V])
            else:
                op = zero_operation(I.dim_out, d_out)
            outcomes.append((label, op))
        processors[x] = Instrument(I.dim_out, d_out, outcomes)
    return compose_post_processing(I, processors), processors


def weighted_rank1_pair(d, seed):
    """Two rank-1 POVMs on the same 2d rays whose weights make them inequivalent.

    First splits every basis-pair ray evenly, second with a 2/3 vs 4/3 skew on
    the second basis, so no effect of one is proportional to a merge of the
    other's classes.
    """
    U = random_unitary(d, seed)
    V = random_unitary(d, seed + 1)
    rays = [U[:, [i]] @ U[:, [i]].conj().T for i in range(d)]
    rays += [V[:, [i]] @ V[:, [i]].conj().T for i in range(d)]
    a = [(str(k), 0.5 * P) for k, P in enumerate(rays)]
    b = [(str(k), (1.0 / 3.0) * P) for k, P in enumerate(rays[:d])]
    b += [(str(k + d), (2.0 / 3.0) * P) for k, P in enumerate(rays[d:])]
    return Povm(d, a), Povm(d, b)

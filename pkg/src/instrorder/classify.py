"""Structural classification of instruments.

Certificates are concrete decompositions that other modules replay: the
measure-and-prepare certificate carries the POVM and the prepared states,
the identity-class certificate carries per-outcome weights and mutually
orthogonal isometries I_x(rho) = Σ_i p_xi V_xi rho V_xi†.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instrument import (
    Instrument,
    State,
    is_zero_operation,
    minimal_kraus,
    partial_trace_input,
    partial_trace_output,
)
from .linalg import DEFAULT_TOL, Tolerance, frob_dist, hermitize, numerical_rank


@dataclass(eq=False)
class MapPrepCertificate:
    """Witnesses I_x(rho) = tr[A(x) rho] xi_x."""

    povm: object
    states: list


@dataclass(eq=False)
class IdentityClassCertificate:
    """Per outcome, the list of (weight, isometry) branches of I_x."""

    dim_in: int
    dim_out: int
    branches: dict


def is_indecomposable_instrument(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when every nonvanishing operation has Choi rank one."""
    for op in I.operations:
        if is_zero_operation(op, tol):
            continue
        if numerical_rank(op.choi_matrix, tol) != 1:
            return False
    return True


def is_trash_and_prepare(I: Instrument, tol: Tolerance = DEFAULT_TOL):
    """If I_x(rho) = tr[rho] p_x xi_x for all x, return (p, states), else None."""
    d_in, d_out = I.dim_in, I.dim_out
    ground = np.zeros((d_out, d_out), dtype=complex)
    ground[0, 0] = 1.0
    p = np.empty(len(I))
    states = []
    for i, (_, op) in enumerate(I.outcomes):
        C = op.choi_matrix
        block = partial_trace_input(C, d_in, d_out) / d_in
        weight = np.trace(block).real
        if weight <= tol.eq_abs:
            if frob_dist(C, np.zeros_like(C)) > tol.eq_abs:
                return None
            p[i] = max(weight, 0.0)
            states.append(State(d_out, ground))
            continue
        if frob_dist(C, np.kron(np.eye(d_in), block)) > tol.eq_abs:
            return None
        p[i] = weight
        states.append(State(d_out, hermitize(block) / weight))
    return p, states


def is_measure_and_prepare(I: Instrument, tol: Tolerance = DEFAULT_TOL):
    """If I_x(rho) = tr[A(x) rho] xi_x for all x, return the certificate."""
    from .povm import Povm

    d_in, d_out = I.dim_in, I.dim_out
    ground = np.zeros((d_out, d_out), dtype=complex)
    ground[0, 0] = 1.0
    effects = []
    states = []
    for label, op in I.outcomes:
        C = op.choi_matrix
        E_t = partial_trace_output(C, d_in, d_out)
        weight = np.trace(E_t).real
        if weight <= tol.eq_abs:
            if frob_dist(C, np.zeros_like(C)) > tol.eq_abs:
                return None
            effects.append((label, np.zeros((d_in, d_in), dtype=complex)))
            states.append(State(d_out, ground))
            continue
        xi = hermitize(partial_trace_input(C, d_in, d_out)) / weight
        if frob_dist(C, np.kron(E_t, xi)) > tol.eq_abs:
            return None
        effects.append((label, hermitize(E_t).T))
        states.append(State(d_out, xi))
    return MapPrepCertificate(Povm(d_in, effects), states)


def identity_class_certificate(I: Instrument, tol: Tolerance = DEFAULT_TOL):
    """Decompose each operation as Σ_i p_xi V_xi rho V_xi† with isometries
    that are mutually orthogonal within the outcome, or return None.

    The test runs on the minimal Kraus matrices A_i of each operation: the
    decomposition exists iff every A_i'† A_i is a multiple β_i'i of the
    identity; diagonalizing β = W diag(γ) W† and combining C_k = Σ_i W_ik A_i
    yields the branches p_k = γ_k, V_k = C_k / √γ_k.
    """
    d_in, d_out = I.dim_in, I.dim_out
    if d_out < d_in:
        return None
    eye = np.eye(d_in)
    branches = {}
    for label, op in I.outcomes:
        if is_zero_operation(op, tol):
            branches[label] = []
            continue
        A = minimal_kraus(op, tol).kraus
        n = len(A)
        beta = np.zeros((n, n), dtype=complex)
        for i2 in range(n):
            for i in range(n):
                P = A[i2].conj().T @ A[i]
                s = np.trace(P) / d_in
                if frob_dist(P, s * eye) > tol.eq_abs:
                    return None
                beta[i2, i] = s
        gamma, W = np.linalg.eigh(hermitize(beta))
        entries = []
        top = gamma.max(initial=0.0)
        for k in range(n - 1, -1, -1):
            if gamma[k] <= tol.rank_rel * top:
                continue
            C = np.zeros((d_out, d_in), dtype=complex)
            for i in range(n):
                C += W[i, k] * A[i]
            entries.append((float(gamma[k]), C / np.sqrt(gamma[k])))
        branches[label] = entries
    cert = IdentityClassCertificate(d_in, d_out, branches)
    if certificate_error(I, cert) > tol.eq_abs:
        return None
    total = sum(w for entry in branches.values() for w, _ in entry)
    if abs(total - 1.0) > 1e-12:
        return None
    return cert


def certificate_error(I: Instrument, cert: IdentityClassCertificate) -> float:
    """Worst defect of the certificate against I: isometry and orthogonality
    defects of the branches plus Choi distance of the rebuilt operations."""
    from .instrument import QuantumOperation, zero_operation

    worst = 0.0
    eye = np.eye(cert.dim_in)
    for label, op in I.outcomes:
        entry = cert.branches.get(label)
        if entry is None:
            return np.inf
        for i, (w, V) in enumerate(entry):
            worst = max(worst, frob_dist(V.conj().T @ V, eye))
            for w2, V2 in entry[i + 1 :]:
                worst = max(worst, frob_dist(V2.conj().T @ V, np.zeros_like(eye)))
        if entry:
            rebuilt = QuantumOperation(
                cert.dim_in, cert.dim_out, [np.sqrt(w) * V for w, V in entry]
            )
        else:
            rebuilt = zero_operation(cert.dim_in, cert.dim_out)
        worst = max(worst, frob_dist(rebuilt.choi_matrix, op.choi_matrix))
    return worst


def is_extreme(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Extremality in the convex set of instruments on I's outcome set:
    the products K_i† K_j of the pooled minimal Kraus matrices (per outcome)
    must be linearly independent, checked via the rank of their Gram matrix."""
    prods = []
    for op in I.operations:
        if is_zero_operation(op, tol):
            continue
        ks = minimal_kraus(op, tol).kraus
        for Ki in ks:
            for Kj in ks:
                prods.append((Ki.conj().T @ Kj).reshape(-1))
    if not prods:
        return True
    stack = np.array(prods)
    gram = stack @ stack.conj().T
    return numerical_rank(gram, tol) == len(prods)


def is_post_processing_clean(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Nothing strictly above I in the post-processing order: holds exactly
    when the identity-class certificate exists."""
    return identity_class_certificate(I, tol) is not None


def is_simulation_irreducible(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Any simulation of I by mixing post-processed instruments must already
    contain I's equivalence class; coincides with the identity class."""
    return identity_class_certificate(I, tol) is not None

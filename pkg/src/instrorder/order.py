"""Post-processing relations between instruments, in replayable form.

Every function here that claims J is reachable from I returns a witness: a
processor instrument per source outcome, plus the target's per-outcome Choi
matrices as fingerprint.  replay_witness pushes the source back through
compose_post_processing so the claim can always be checked numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import (
    certificate_error,
    identity_class_certificate,
    is_indecomposable_instrument,
    is_measure_and_prepare,
)
from .errors import (
    CertificateMismatch,
    DimensionMismatch,
    LabelMismatch,
    NotIndecomposable,
    NotMeasureAndPrepare,
    PreconditionViolated,
)
from .instrument import (
    Instrument,
    QuantumOperation,
    _minimal_branches,
    compose_post_processing,
    identity_instrument,
    induced_povm,
    is_zero_operation,
    minimal_kraus,
    trash_and_prepare,
    zero_operation,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    frob_dist,
    partial_isometry_factor,
    range_projector,
)
from .povm import find_post_processing, povm_equivalent


@dataclass(eq=False)
class InstrumentWitness:
    """Processors realizing a declared target as a post-processing of some
    source instrument; the target is fingerprinted by its Choi matrices."""

    source_labels: list
    processors: dict
    target_labels: list
    target_chois: dict


@dataclass(eq=False)
class EquivalenceWitness:
    """Two-way post-processing between instruments I and J.

    stoch_forward realizes A^J from A^I (rows labeled by I), stoch_backward
    the reverse; ratios_forward[(x, y)] is the constant with
    A^I(x) = c * A^J(y) on supported pairs, ratios_backward[(y, x)] its
    inverse direction.
    """

    forward: InstrumentWitness
    backward: InstrumentWitness
    stoch_forward: object
    stoch_backward: object
    ratios_forward: dict
    ratios_backward: dict


def replay_witness(source: Instrument, w: InstrumentWitness) -> Instrument:
    """Rebuild the witness's target from the source instrument."""
    if source.labels != w.source_labels:
        raise LabelMismatch("witness was built for a source with different outcome labels")
    return compose_post_processing(source, w.processors)


def witness_error(source: Instrument, w: InstrumentWitness) -> float:
    """Largest per-outcome Choi distance between replay and the fingerprint."""
    replay = replay_witness(source, w)
    return max(
        frob_dist(replay.operation(y).choi_matrix, w.target_chois[y])
        for y in w.target_labels
    )


def _witness(source: Instrument, processors: dict, target: Instrument) -> InstrumentWitness:
    return InstrumentWitness(
        source_labels=list(source.labels),
        processors=processors,
        target_labels=list(target.labels),
        target_chois={label: op.choi_matrix for label, op in target.outcomes},
    )


def _checked(source, processors, target, tol) -> InstrumentWitness:
    w = _witness(source, processors, target)
    err = witness_error(source, w)
    if err > tol.eq_abs:
        raise RuntimeError(f"witness replay missed its target by {err:.3e}")
    return w


def _trash_channel_op(dim_in, dim_out) -> QuantumOperation:
    """Channel sending everything to the first basis state of the target."""
    ground = np.zeros(dim_out, dtype=complex)
    ground[0] = 1.0
    ks = [np.outer(ground, np.eye(dim_in)[k]) for k in range(dim_in)]
    return QuantumOperation(dim_in, dim_out, ks)


def _sink(dim_in, dim_out, labels, to_label) -> Instrument:
    """Instrument routing its whole input to one outcome as a trash channel.

    Used for source outcomes whose operation vanishes: any channel works
    there, since its contribution to every replay is negligible.
    """
    outcomes = [
        (l, _trash_channel_op(dim_in, dim_out) if l == to_label else zero_operation(dim_in, dim_out))
        for l in labels
    ]
    return Instrument(dim_in, dim_out, outcomes)


def witness_detailed_to_original(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> InstrumentWitness:
    """Witness from the detailed instrument of I back to I: the branch
    outcome (i, x) is forwarded unchanged to x."""
    branches = _minimal_branches(I, tol)
    if not branches:
        raise PreconditionViolated("instrument has no nonvanishing operation")
    d = I.dim_out
    detailed = Instrument(
        I.dim_in, d, [(pl, QuantumOperation(I.dim_in, d, [K])) for pl, _, K in branches]
    )
    ident = QuantumOperation(d, d, [np.eye(d)])
    processors = {}
    for pl, src, _ in branches:
        outcomes = [(y, ident if y == src else zero_operation(d, d)) for y in I.labels]
        processors[pl] = Instrument(d, d, outcomes)
    return _checked(detailed, processors, I, tol)


def witness_original_to_detailed(I: Instrument, tol: Tolerance = DEFAULT_TOL):
    """Witness from I to its detailed instrument, present iff the minimal
    Kraus matrices of each operation have pairwise orthogonal products.

    When K_ix† K_jx = 0 for i != j the ranges of the branches are mutually
    orthogonal; measuring the range projectors after I recovers which branch
    fired.  The first branch's projector absorbs the leftover of the output
    space so the processor is trace preserving.
    """
    branches = _minimal_branches(I, tol)
    if not branches:
        raise PreconditionViolated("instrument has no nonvanishing operation")
    d = I.dim_out
    per_src = {}
    for pl, src, K in branches:
        per_src.setdefault(src, []).append((pl, K))
    for ks in per_src.values():
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                gap = frob_dist(ks[i][1].conj().T @ ks[j][1], np.zeros((I.dim_in, I.dim_in)))
                if gap > tol.eq_abs:
                    return None
    detailed = Instrument(
        I.dim_in, d, [(pl, QuantumOperation(I.dim_in, d, [K])) for pl, _, K in branches]
    )
    det_labels = detailed.labels
    processors = {}
    for x in I.labels:
        if x not in per_src:
            processors[x] = _sink(d, d, det_labels, det_labels[0])
            continue
        own = per_src[x]
        projs = [range_projector(K, tol) for _, K in own]
        first = np.eye(d)
        for P in projs[1:]:
            first = first - P
        ops = {own[0][0]: first}
        for (pl, _), P in zip(own[1:], projs[1:]):
            ops[pl] = P
        outcomes = [
            (
                pl,
                QuantumOperation(d, d, [ops[pl]]) if pl in ops else zero_operation(d, d),
            )
            for pl in det_labels
        ]
        processors[x] = Instrument(d, d, outcomes)
    return _checked(I, processors, detailed, tol)


def witness_identity_reversal(
    I: Instrument, cert=None, tol: Tolerance = DEFAULT_TOL
) -> InstrumentWitness:
    """Channels R^(x) with Σ_x R^(x) ∘ I_x = identity, from an
    identity-class certificate: R^(x) applies the adjoints of the branch
    isometries and funnels the remaining output subspace into the first
    basis state of the input space."""
    if cert is None:
        cert = identity_class_certificate(I, tol)
        if cert is None:
            raise PreconditionViolated("instrument is not in the identity class")
    if certificate_error(I, cert) > tol.eq_abs:
        raise CertificateMismatch("certificate does not reproduce the instrument")
    d_in, d_out = I.dim_in, I.dim_out
    ground = np.zeros(d_in, dtype=complex)
    ground[0] = 1.0
    processors = {}
    for x in I.labels:
        entry = cert.branches[x]
        if not entry:
            processors[x] = Instrument(d_out, d_in, [("0", _trash_channel_op(d_out, d_in))])
            continue
        ks = [V.conj().T for _, V in entry]
        leftover = np.eye(d_out)
        for _, V in entry:
            leftover = leftover - V @ V.conj().T
        w, v = np.linalg.eigh((leftover + leftover.conj().T) / 2.0)
        for k in np.nonzero(w > 0.5)[0]:
            ks.append(np.outer(ground, v[:, k].conj()))
        processors[x] = Instrument(
            d_out, d_in, [("0", QuantumOperation(d_out, d_in, ks))]
        )
    return _checked(I, processors, identity_instrument(d_in), tol)


def witness_to_trash_and_prepare(
    I: Instrument, p, states, labels=None, tol: Tolerance = DEFAULT_TOL
) -> InstrumentWitness:
    """Witness from any instrument to the trash-and-prepare target given by
    (p, states): every outcome gets the same trash-and-prepare processor."""
    target = trash_and_prepare(p, states, dim_in=I.dim_in, labels=labels)
    template = trash_and_prepare(p, states, dim_in=I.dim_out, labels=labels)
    processors = {x: template for x in I.labels}
    return _checked(I, processors, target, tol)


def _single_branch(op, tol):
    """The unique minimal Kraus matrix of a Choi-rank-1 operation, or None
    when the operation vanishes."""
    if is_zero_operation(op, tol):
        return None
    return minimal_kraus(op, tol).kraus[0]


def witness_indecomposable_equivalence(
    I: Instrument, J: Instrument, tol: Tolerance = DEFAULT_TOL
):
    """Two-way witnesses between indecomposable instruments, present exactly
    when their induced POVMs are post-processing equivalent.

    On every supported pair of the equivalence's stochastic matrices the
    single Kraus matrices factor through a partial isometry; the forward
    processors complete the isometry's range with preparations of the first
    basis state, the backward ones use the co-isometry directly.
    """
    if not is_indecomposable_instrument(I, tol):
        raise NotIndecomposable("first instrument has a Choi rank above one")
    if not is_indecomposable_instrument(J, tol):
        raise NotIndecomposable("second instrument has a Choi rank above one")
    if I.dim_in != J.dim_in:
        raise DimensionMismatch("instruments measure different input spaces")
    if I.dim_out < J.dim_out:
        w = witness_indecomposable_equivalence(J, I, tol)
        if w is None:
            return None
        return EquivalenceWitness(
            forward=w.backward,
            backward=w.forward,
            stoch_forward=w.stoch_backward,
            stoch_backward=w.stoch_forward,
            ratios_forward=w.ratios_backward,
            ratios_backward=w.ratios_forward,
        )

    pov_i = induced_povm(I)
    pov_j = induced_povm(J)
    eq = povm_equivalent(pov_i, pov_j, tol)
    if eq is None:
        return None
    nu, mu = eq  # nu rebuilds A^I from A^J; mu rebuilds A^J from A^I

    singles_i = {x: _single_branch(op, tol) for x, op in I.outcomes}
    singles_j = {y: _single_branch(op, tol) for y, op in J.outcomes}
    traces_i = {x: np.trace(E).real for x, E in pov_i.outcomes}
    traces_j = {y: np.trace(E).real for y, E in pov_j.outcomes}
    d_k, d_v = I.dim_out, J.dim_out
    xi0 = np.zeros(d_v, dtype=complex)
    xi0[0] = 1.0

    ratios_forward = {}
    ratios_backward = {}

    forward = {}
    for xi, x in enumerate(I.labels):
        if singles_i[x] is None:
            forward[x] = _sink(d_k, d_v, J.labels, J.labels[0])
            continue
        outcomes = []
        for yi, y in enumerate(J.labels):
            s = mu.entries[xi, yi]
            if s <= 1e-15 or singles_j[y] is None:
                outcomes.append((y, zero_operation(d_k, d_v)))
                continue
            c = traces_i[x] / traces_j[y]
            ratios_forward[(x, y)] = c
            U = partial_isometry_factor(singles_i[x], singles_j[y], c, tol)
            root = np.sqrt(s)
            ks = [root * U.conj().T]
            leftover = np.eye(d_k) - U @ U.conj().T
            w_left, v_left = np.linalg.eigh((leftover + leftover.conj().T) / 2.0)
            for k in np.nonzero(w_left > 0.5)[0]:
                ks.append(root * np.outer(xi0, v_left[:, k].conj()))
            outcomes.append((y, QuantumOperation(d_k, d_v, ks)))
        forward[x] = Instrument(d_k, d_v, outcomes)

    backward = {}
    for yi, y in enumerate(J.labels):
        if singles_j[y] is None:
            backward[y] = _sink(d_v, d_k, I.labels, I.labels[0])
            continue
        outcomes = []
        for xi, x in enumerate(I.labels):
            m = nu.entries[yi, xi]
            if m <= 1e-15 or singles_i[x] is None:
                outcomes.append((x, zero_operation(d_v, d_k)))
                continue
            d = traces_j[y] / traces_i[x]
            ratios_backward[(y, x)] = d
            V = partial_isometry_factor(singles_j[y], singles_i[x], d, tol)
            outcomes.append((x, QuantumOperation(d_v, d_k, [np.sqrt(m) * V.conj().T])))
        backward[y] = Instrument(d_v, d_k, outcomes)

    return EquivalenceWitness(
        forward=_checked(I, forward, J, tol),
        backward=_checked(J, backward, I, tol),
        stoch_forward=mu,
        stoch_backward=nu,
        ratios_forward=ratios_forward,
        ratios_backward=ratios_backward,
    )


def witness_map_post_processing(I: Instrument, J: Instrument, tol: Tolerance = DEFAULT_TOL):
    """Witness from measure-and-prepare I to measure-and-prepare J, present
    exactly when A^J is a classical post-processing of A^I: the processor at
    x trashes I's output and prepares J's states with distribution μ_x."""
    cert_i = is_measure_and_prepare(I, tol)
    cert_j = is_measure_and_prepare(J, tol)
    if cert_i is None:
        raise NotMeasureAndPrepare("first instrument is not measure-and-prepare")
    if cert_j is None:
        raise NotMeasureAndPrepare("second instrument is not measure-and-prepare")
    if I.dim_in != J.dim_in:
        raise DimensionMismatch("instruments measure different input spaces")
    mu = find_post_processing(induced_povm(I), induced_povm(J), tol)
    if mu is None:
        return None
    processors = {}
    for xi, x in enumerate(I.labels):
        processors[x] = trash_and_prepare(
            mu.entries[xi], cert_j.states, dim_in=I.dim_out, labels=J.labels
        )
    w = _checked(I, processors, J, tol)
    return w


def check_povm_necessary_condition(I: Instrument, J: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Necessary condition for J being a post-processing of I when J is
    indecomposable: A^I must be a classical post-processing of A^J.  A False
    certifies that no post-processing from I to J exists."""
    if not is_indecomposable_instrument(J, tol):
        raise NotIndecomposable("condition only applies to indecomposable targets")
    return find_post_processing(induced_povm(J), induced_povm(I), tol) is not None

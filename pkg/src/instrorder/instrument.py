"""Quantum operations, instruments, and structural post-processing on them.

Operations are stored in Kraus form; their Choi matrix is cached and is the
canonical fingerprint for equality tests.  The Choi convention pairs the
input index with the row block: C = Σ_k vec(K_k) vec(K_k)† with
vec(K)[i * dim_out + a] = K[a, i], so the identity channel has Choi
Σ_ij |ii⟩⟨jj| and tracing out the output block returns the transposed
induced effect.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, LabelMismatch, OutcomeSetMismatch, UnknownLabel
from .linalg import DEFAULT_TOL, Tolerance, frob_dist, hermitize, is_hermitian, psd_sqrt
from .povm import Povm, ValidationReport


@dataclass(eq=False)
class QuantumOperation:
    """Completely positive map given by Kraus matrices of shape (dim_out, dim_in)."""

    dim_in: int
    dim_out: int
    kraus: list

    def __post_init__(self):
        self.kraus = [np.asarray(K, dtype=complex) for K in self.kraus]
        if not self.kraus:
            raise ValueError("at least one Kraus matrix required (use a zero matrix)")
        for K in self.kraus:
            if K.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus shape {K.shape}, expected ({self.dim_out}, {self.dim_in})"
                )

    @cached_property
    def choi_matrix(self):
        d = self.dim_in * self.dim_out
        C = np.zeros((d, d), dtype=complex)
        for K in self.kraus:
            v = K.T.reshape(-1)
            C += np.outer(v, v.conj())
        return C

    @property
    def effect(self):
        """Σ K†K, the induced effect on the input space."""
        E = np.zeros((self.dim_in, self.dim_in), dtype=complex)
        for K in self.kraus:
            E += K.conj().T @ K
        return E

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"state shape {rho.shape}, expected square of {self.dim_in}")
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for K in self.kraus:
            out += K @ rho @ K.conj().T
        return out


@dataclass(eq=False)
class State:
    """Density matrix wrapper."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)


@dataclass(eq=False)
class Instrument:
    """Outcome-labeled quantum operations summing to a trace-preserving map."""

    dim_in: int
    dim_out: int
    outcomes: list

    def __post_init__(self):
        checked = []
        for label, op in self.outcomes:
            if op.dim_in != self.dim_in or op.dim_out != self.dim_out:
                raise DimensionMismatch(
                    f"operation at {label!r} maps {op.dim_in}->{op.dim_out}, "
                    f"instrument maps {self.dim_in}->{self.dim_out}"
                )
            checked.append((str(label), op))
        self.outcomes = checked

    @property
    def labels(self):
        return [label for label, _ in self.outcomes]

    @property
    def operations(self):
        return [op for _, op in self.outcomes]

    def operation(self, label):
        for known, op in self.outcomes:
            if known == label:
                return op
        raise UnknownLabel(f"no outcome labeled {label!r}")

    def __len__(self):
        return len(self.outcomes)


def choi(op: QuantumOperation) -> np.ndarray:
    return op.choi_matrix


def choi_distance(a: QuantumOperation, b: QuantumOperation) -> float:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionMismatch("operations act between different spaces")
    return frob_dist(a.choi_matrix, b.choi_matrix)


def operations_equal(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    return choi_distance(a, b) <= tol.eq_abs


def instrument_distance(I: Instrument, J: Instrument) -> float:
    """Largest Choi distance between same-label operations."""
    if I.labels != J.labels:
        raise LabelMismatch("instruments carry different outcome labels")
    return max(
        (choi_distance(a, b) for a, b in zip(I.operations, J.operations)),
        default=0.0,
    )


def partial_trace_output(C, dim_in, dim_out):
    """Trace the output block out of a Choi matrix; gives (induced effect)ᵀ."""
    return np.einsum("iaja->ij", C.reshape(dim_in, dim_out, dim_in, dim_out))


def partial_trace_input(C, dim_in, dim_out):
    """Trace the input block out of a Choi matrix."""
    return np.einsum("iaib->ab", C.reshape(dim_in, dim_out, dim_in, dim_out))


def minimal_kraus(op: QuantumOperation, tol: Tolerance = DEFAULT_TOL) -> QuantumOperation:
    """Canonical Kraus form from the Choi eigendecomposition.

    Keeps eigenvalues above tol.rank_rel times the largest, ordered
    decreasingly, so the number of matrices equals the Choi rank.  A
    vanishing operation collapses to a single zero matrix.
    """
    C = hermitize(op.choi_matrix)
    w, v = np.linalg.eigh(C)
    top = w.max(initial=0.0)
    ks = []
    if top > 0.0:
        for i in range(len(w) - 1, -1, -1):
            if w[i] <= tol.rank_rel * top:
                break
            K = np.sqrt(w[i]) * v[:, i].reshape(op.dim_in, op.dim_out).T
            ks.append(K)
    if not ks:
        ks = [np.zeros((op.dim_out, op.dim_in), dtype=complex)]
    return QuantumOperation(op.dim_in, op.dim_out, ks)


def is_zero_operation(op: QuantumOperation, tol: Tolerance = DEFAULT_TOL) -> bool:
    return np.trace(op.choi_matrix).real <= tol.eq_abs


def zero_operation(dim_in, dim_out) -> QuantumOperation:
    return QuantumOperation(dim_in, dim_out, [np.zeros((dim_out, dim_in), dtype=complex)])


def validate_state(s: State, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    violations = []
    if s.matrix.shape != (s.dim, s.dim):
        violations.append(f"shape: expected {s.dim}x{s.dim}, got {s.matrix.shape}")
        return ValidationReport(False, violations)
    if not is_hermitian(s.matrix, tol):
        violations.append("hermiticity")
    elif np.linalg.eigvalsh(hermitize(s.matrix)).min() < -tol.eq_abs:
        violations.append("positivity")
    if abs(np.trace(s.matrix).real - 1.0) > tol.eq_abs:
        violations.append(f"trace: {np.trace(s.matrix).real!r} != 1")
    return ValidationReport(not violations, violations)


def validate_instrument(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Check labels, Kraus shapes, subnormalization per outcome, and that the
    induced effects sum to identity."""
    violations = []
    if I.dim_in <= 0 or I.dim_out <= 0:
        violations.append("dimension: must be positive integers")
        return ValidationReport(False, violations)
    if len(set(I.labels)) != len(I.labels):
        violations.append("labels: duplicate outcome labels")
    total = np.zeros((I.dim_in, I.dim_in), dtype=complex)
    for label, op in I.outcomes:
        E = op.effect
        w = np.linalg.eigvalsh(hermitize(E))
        if w.max(initial=0.0) > 1.0 + tol.eq_abs:
            violations.append(f"subnormalization[{label}]: effect eigenvalue {w.max():.6f} > 1")
        total += E
    gap = frob_dist(total, np.eye(I.dim_in))
    if gap > tol.eq_abs:
        violations.append(f"normalization: induced effects sum off identity by {gap:.3e}")
    return ValidationReport(not violations, violations)


def apply(I: Instrument, label, rho):
    """Unnormalized post-state and outcome probability for input state rho."""
    op = I.operation(label)
    out = op(_state_matrix(rho))
    return out, np.trace(out).real


def induced_povm(I: Instrument) -> Povm:
    return Povm(I.dim_in, [(label, op.effect) for label, op in I.outcomes])


def total_channel(I: Instrument) -> QuantumOperation:
    """Forget the outcome: one operation carrying every Kraus matrix."""
    ks = [K for op in I.operations for K in op.kraus]
    return QuantumOperation(I.dim_in, I.dim_out, ks)


def identity_instrument(dim: int) -> Instrument:
    return Instrument(dim, dim, [("0", QuantumOperation(dim, dim, [np.eye(dim)]))])


def luders(A: Povm) -> Instrument:
    """Instrument with Kraus √A(x) per outcome; output space equals input."""
    outcomes = [
        (label, QuantumOperation(A.dim, A.dim, [psd_sqrt(E)])) for label, E in A.outcomes
    ]
    return Instrument(A.dim, A.dim, outcomes)


def _state_matrix(xi):
    return xi.matrix if isinstance(xi, State) else np.asarray(xi, dtype=complex)


def measure_and_prepare(A: Povm, states, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    """Instrument rho -> tr[A(x) rho] xi_x with rank-one Kraus matrices built
    from the spectral decompositions of each effect and each prepared state."""
    mats = [_state_matrix(s) for s in states]
    if len(mats) != len(A):
        raise DimensionMismatch("one prepared state per outcome required")
    d_out = mats[0].shape[0]
    for m in mats:
        if m.shape != (d_out, d_out):
            raise DimensionMismatch("prepared states live on different spaces")
    outcomes = []
    for (label, E), xi in zip(A.outcomes, mats):
        q, phi = np.linalg.eigh(hermitize(E))
        p, psi = np.linalg.eigh(hermitize(xi))
        q_keep = q > tol.rank_rel * q.max(initial=0.0)
        p_keep = p > tol.rank_rel * p.max(initial=0.0)
        ks = []
        for i in np.nonzero(p_keep)[0]:
            for j in np.nonzero(q_keep)[0]:
                ks.append(np.sqrt(p[i] * q[j]) * np.outer(psi[:, i], phi[:, j].conj()))
        if not ks:
            ks = [np.zeros((d_out, A.dim), dtype=complex)]
        outcomes.append((label, QuantumOperation(A.dim, d_out, ks)))
    return Instrument(A.dim, d_out, outcomes)


def trash_and_prepare(p, states, dim_in: int, labels=None) -> Instrument:
    """Instrument rho -> tr[rho] p_x xi_x; ignores the input entirely."""
    from .povm import trivial_povm

    p = np.asarray(p, dtype=float)
    if len(p) != len(states):
        raise DimensionMismatch("one prepared state per probability required")
    return measure_and_prepare(trivial_povm(p, dim_in, labels), states)


def pair_label(index, label) -> str:
    """Label for refined outcomes: branch index paired with the source label."""
    return f"({index},{label})"


def _minimal_branches(I: Instrument, tol: Tolerance):
    """(pair label, source label, Kraus matrix) for every minimal-Kraus branch
    of every nonvanishing operation, branch indices starting at 1."""
    out = []
    for label, op in I.outcomes:
        if is_zero_operation(op, tol):
            continue
        m = minimal_kraus(op, tol)
        for i, K in enumerate(m.kraus, start=1):
            out.append((pair_label(i, label), label, K))
    return out


def detailed_instrument(I: Instrument, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    """Split every operation into its minimal Kraus branches, one outcome per
    branch; vanishing operations are dropped."""
    outcomes = [
        (pl, QuantumOperation(I.dim_in, I.dim_out, [K]))
        for pl, _, K in _minimal_branches(I, tol)
    ]
    return Instrument(I.dim_in, I.dim_out, outcomes)


def compose_post_processing(I: Instrument, processors) -> Instrument:
    """Process each outcome x of I by its own instrument R^(x) and pool the
    classical results: J_y = Σ_x R^(x)_y ∘ I_x.

    processors maps each outcome label of I to an instrument from I's output
    space to a common target space; all processors must share one outcome
    label sequence, which becomes the composed instrument's.
    """
    if set(processors) != set(I.labels):
        raise OutcomeSetMismatch("processors must be keyed exactly by the instrument's labels")
    ref = processors[I.labels[0]]
    for x in I.labels:
        R = processors[x]
        if R.dim_in != I.dim_out:
            raise DimensionMismatch(
                f"processor for {x!r} expects dimension {R.dim_in}, "
                f"instrument outputs {I.dim_out}"
            )
        if R.dim_out != ref.dim_out:
            raise DimensionMismatch("processors prepare on different spaces")
        if R.labels != ref.labels:
            raise OutcomeSetMismatch("processors must share one outcome label sequence")
    outcomes = []
    for y in ref.labels:
        ks = []
        for x, op in I.outcomes:
            for Rk in processors[x].operation(y).kraus:
                if not np.count_nonzero(Rk):
                    continue
                for Ki in op.kraus:
                    if not np.count_nonzero(Ki):
                        continue
                    prod = Rk @ Ki
                    if np.count_nonzero(prod):
                        ks.append(prod)
        if not ks:
            ks = [np.zeros((ref.dim_out, I.dim_in), dtype=complex)]
        outcomes.append((y, QuantumOperation(I.dim_in, ref.dim_out, ks)))
    return Instrument(I.dim_in, ref.dim_out, outcomes)


def relabel_instrument(I: Instrument, f) -> Instrument:
    """Merge outcomes along the label map f, pooling Kraus matrices."""
    mapper = f.__getitem__ if isinstance(f, dict) else f
    order = []
    merged = {}
    for label, op in I.outcomes:
        try:
            target = str(mapper(label))
        except KeyError:
            raise LabelMismatch(f"label map not defined on {label!r}") from None
        if target not in merged:
            merged[target] = []
            order.append(target)
        merged[target].extend(op.kraus)
    return Instrument(
        I.dim_in,
        I.dim_out,
        [(t, QuantumOperation(I.dim_in, I.dim_out, merged[t])) for t in order],
    )


def scale_operation(op: QuantumOperation, s: float) -> QuantumOperation:
    if s == 0.0:
        return zero_operation(op.dim_in, op.dim_out)
    root = np.sqrt(s)
    return QuantumOperation(op.dim_in, op.dim_out, [root * K for K in op.kraus])


def mix(instruments, p) -> Instrument:
    """Convex mixture Σ_i p_i I^i on the union of the outcome label sets."""
    p = np.asarray(p, dtype=float)
    if len(p) != len(instruments):
        raise ValueError("one weight per instrument required")
    if p.min(initial=0.0) < -1e-12 or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("weights must form a probability distribution")
    first = instruments[0]
    for J in instruments:
        if (J.dim_in, J.dim_out) != (first.dim_in, first.dim_out):
            raise DimensionMismatch("mixed instruments must share input and output spaces")
    labels = []
    for J in instruments:
        for l in J.labels:
            if l not in labels:
                labels.append(l)
    outcomes = []
    for l in labels:
        ks = []
        for w, J in zip(p, instruments):
            if w <= 0.0 or l not in J.labels:
                continue
            for K in J.operation(l).kraus:
                if np.count_nonzero(K):
                    ks.append(np.sqrt(w) * K)
        if not ks:
            ks = [np.zeros((first.dim_out, first.dim_in), dtype=complex)]
        outcomes.append((l, QuantumOperation(first.dim_in, first.dim_out, ks)))
    return Instrument(first.dim_in, first.dim_out, outcomes)


def tracked_mix(instruments, p) -> Instrument:
    """Mixture that remembers which instrument fired: outcome (i,x) carries
    p_i times instrument i's operation at x, with i starting at 1."""
    p = np.asarray(p, dtype=float)
    if len(p) != len(instruments):
        raise ValueError("one weight per instrument required")
    if p.min(initial=0.0) < -1e-12 or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("weights must form a probability distribution")
    first = instruments[0]
    for J in instruments:
        if (J.dim_in, J.dim_out) != (first.dim_in, first.dim_out):
            raise DimensionMismatch("mixed instruments must share input and output spaces")
    outcomes = []
    for i, (w, J) in enumerate(zip(p, instruments), start=1):
        for label, op in J.outcomes:
            outcomes.append((pair_label(i, label), scale_operation(op, float(w))))
    return Instrument(first.dim_in, first.dim_out, outcomes)


def luders_refinement_witness(I: Instrument, tol: Tolerance = DEFAULT_TOL):
    """Channels Φ^(x) recovering I from the Lüders instrument of its induced
    POVM: I_x = Φ^(x) ∘ (Lüders of A at x).

    Each Φ^(x) composes I's Kraus matrices with the pseudo-inverse square
    root of the effect and routes the kernel of the effect to the first
    basis state, which keeps the channel trace preserving.
    """
    from .linalg import psd_support

    channels = {}
    for label, op in I.outcomes:
        E = op.effect
        w, v, keep = psd_support(E, tol)
        inv_sqrt = np.zeros((I.dim_in, I.dim_in), dtype=complex)
        for i in np.nonzero(keep)[0]:
            inv_sqrt += np.outer(v[:, i], v[:, i].conj()) / np.sqrt(w[i])
        ks = []
        for K in op.kraus:
            M = K @ inv_sqrt
            if np.count_nonzero(M):
                ks.append(M)
        ground = np.zeros(I.dim_out, dtype=complex)
        ground[0] = 1.0
        for i in np.nonzero(~keep)[0]:
            ks.append(np.outer(ground, v[:, i].conj()))
        channels[label] = QuantumOperation(I.dim_in, I.dim_out, ks)

    # Each processor keeps its own label and kills the rest, so composing
    # with the Lüders instrument reproduces I outcome by outcome.
    processors = {}
    for x in I.labels:
        outcomes = [
            (y, channels[x] if y == x else zero_operation(I.dim_in, I.dim_out))
            for y in I.labels
        ]
        processors[x] = Instrument(I.dim_in, I.dim_out, outcomes)
    return processors

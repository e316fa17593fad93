"""POVMs and the classical post-processing preorder on them.

A POVM here is an ordered list of (label, effect) pairs on a fixed
finite-dimensional space.  B is a post-processing of A when there is a
row-stochastic matrix ν with B(y) = Σ_x ν_xy A(x); deciding that is a linear
feasibility problem over the real vectorizations of the effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, LabelMismatch, UnknownLabel
from .feasibility import solve_nonnegative
from .linalg import DEFAULT_TOL, Tolerance, frob_dist, hermitize, is_hermitian

_STOCH_TOL = 1e-12


@dataclass(eq=False)
class Povm:
    """Labeled family of effects on a dim-dimensional space summing to identity."""

    dim: int
    outcomes: list

    def __post_init__(self):
        self.outcomes = [
            (str(label), np.asarray(effect, dtype=complex)) for label, effect in self.outcomes
        ]

    @property
    def labels(self):
        return [label for label, _ in self.outcomes]

    @property
    def effects(self):
        return [effect for _, effect in self.outcomes]

    def effect(self, label):
        for known, eff in self.outcomes:
            if known == label:
                return eff
        raise UnknownLabel(f"no outcome labeled {label!r}")

    def __len__(self):
        return len(self.outcomes)


@dataclass(eq=False)
class StochasticMatrix:
    """Row-stochastic matrix with labeled rows (sources) and columns (targets)."""

    row_labels: list
    col_labels: list
    entries: np.ndarray

    def __post_init__(self):
        self.row_labels = [str(l) for l in self.row_labels]
        self.col_labels = [str(l) for l in self.col_labels]
        self.entries = np.asarray(self.entries, dtype=float)
        shape = (len(self.row_labels), len(self.col_labels))
        if self.entries.shape != shape:
            raise ValueError(f"entries shape {self.entries.shape}, expected {shape}")
        if self.entries.min(initial=0.0) < -_STOCH_TOL:
            raise ValueError("negative entry in stochastic matrix")
        sums = self.entries.sum(axis=1)
        if np.abs(sums - 1.0).max(initial=0.0) > _STOCH_TOL:
            raise ValueError("rows of stochastic matrix must sum to 1")

    def __getitem__(self, pair):
        row, col = pair
        return self.entries[self.row_labels.index(row), self.col_labels.index(col)]


@dataclass(eq=False)
class Grouping:
    """How minimal sufficiency merged outcomes: class label, weight, drops."""

    class_of: dict
    weights: dict
    dropped: list = field(default_factory=list)


@dataclass(eq=False)
class ValidationReport:
    ok: bool
    violations: list


def validate_povm(P: Povm, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Check labels, shapes, hermiticity, positivity and completeness."""
    violations = []
    if P.dim <= 0:
        violations.append("dimension: must be a positive integer")
        return ValidationReport(False, violations)
    if len(set(P.labels)) != len(P.labels):
        violations.append("labels: duplicate outcome labels")
    total = np.zeros((P.dim, P.dim), dtype=complex)
    for label, E in P.outcomes:
        if E.shape != (P.dim, P.dim):
            violations.append(f"shape[{label}]: expected {P.dim}x{P.dim}, got {E.shape}")
            continue
        if not is_hermitian(E, tol):
            violations.append(f"hermiticity[{label}]")
        else:
            w = np.linalg.eigvalsh(hermitize(E))
            if w.min() < -tol.eq_abs:
                violations.append(f"positivity[{label}]: eigenvalue {w.min():.3e}")
            if w.max() > 1.0 + tol.eq_abs:
                violations.append(f"effect bound[{label}]: eigenvalue {w.max():.6f} > 1")
        total += E
    if not violations or all("shape" not in v for v in violations):
        gap = frob_dist(total, np.eye(P.dim))
        if gap > tol.eq_abs:
            violations.append(f"completeness: effects sum off identity by {gap:.3e}")
    return ValidationReport(not violations, violations)


def trivial_povm(p, dim: int, labels=None) -> Povm:
    """POVM with effects p_x * identity; carries no information about the state."""
    p = np.asarray(p, dtype=float)
    if labels is None:
        labels = [str(i) for i in range(len(p))]
    if len(labels) != len(p):
        raise LabelMismatch("one label per probability required")
    eye = np.eye(dim)
    return Povm(dim, [(l, w * eye) for l, w in zip(labels, p)])


def apply_post_processing(A: Povm, nu: StochasticMatrix) -> Povm:
    """Coarse-grain A through nu: B(y) = Σ_x nu_xy A(x)."""
    if nu.row_labels != A.labels:
        raise LabelMismatch("stochastic matrix rows must match the POVM's labels")
    effects = []
    for j, col_label in enumerate(nu.col_labels):
        B = np.zeros((A.dim, A.dim), dtype=complex)
        for i, (_, E) in enumerate(A.outcomes):
            B += nu.entries[i, j] * E
        effects.append((col_label, B))
    return Povm(A.dim, effects)


def max_effect_distance(A: Povm, B: Povm) -> float:
    """Largest Frobenius distance between same-label effects."""
    if A.labels != B.labels:
        raise LabelMismatch("POVMs carry different outcome labels")
    return max(
        (frob_dist(Ea, Eb) for Ea, Eb in zip(A.effects, B.effects)),
        default=0.0,
    )


def _vec_hermitian(M: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix: diagonal, then Re/Im above it."""
    d = M.shape[0]
    iu = np.triu_indices(d, 1)
    return np.concatenate([np.diag(M).real, M[iu].real, M[iu].imag])


def find_post_processing(A: Povm, B: Povm, tol: Tolerance = DEFAULT_TOL):
    """Stochastic matrix nu with B(y) = Σ_x nu_xy A(x), or None if none exists.

    Feasibility is decided by the bundled phase-1 simplex; a candidate is
    only returned after replaying it through apply_post_processing and
    checking every reconstructed effect against B within tol.eq_abs.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"POVMs act on different spaces: {A.dim} vs {B.dim}")
    n_a, n_b = len(A), len(B)
    d2 = A.dim * A.dim
    vec_a = [_vec_hermitian(E) for E in A.effects]
    vec_b = [_vec_hermitian(E) for E in B.effects]

    n_var = n_a * n_b  # nu[x, y] at column x * n_b + y
    M = np.zeros((n_b * d2 + n_a, n_var))
    rhs = np.zeros(n_b * d2 + n_a)
    for y in range(n_b):
        rows = slice(y * d2, (y + 1) * d2)
        for x in range(n_a):
            M[rows, x * n_b + y] = vec_a[x]
        rhs[rows] = vec_b[y]
    for x in range(n_a):
        M[n_b * d2 + x, x * n_b : (x + 1) * n_b] = 1.0
        rhs[n_b * d2 + x] = 1.0

    sol = solve_nonnegative(M, rhs, feas_tol=(n_a + n_b) * tol.eq_abs)
    if sol is None:
        return None
    entries = np.clip(sol.reshape(n_a, n_b), 0.0, None)
    entries /= entries.sum(axis=1, keepdims=True)
    nu = StochasticMatrix(A.labels, B.labels, entries)
    if max_effect_distance(apply_post_processing(A, nu), B) > tol.eq_abs:
        return None
    return nu


def relabel(A: Povm, f) -> Povm:
    """Merge outcomes along the label map f (a dict or callable on labels)."""
    mapper = f.__getitem__ if isinstance(f, dict) else f
    order = []
    merged = {}
    for label, E in A.outcomes:
        try:
            target = str(mapper(label))
        except KeyError:
            raise LabelMismatch(f"label map not defined on {label!r}") from None
        if target not in merged:
            merged[target] = np.zeros((A.dim, A.dim), dtype=complex)
            order.append(target)
        merged[target] = merged[target] + E
    return Povm(A.dim, [(t, merged[t]) for t in order])


def is_trivial(A: Povm, tol: Tolerance = DEFAULT_TOL):
    """If every effect is a multiple of identity, return the weights, else None."""
    eye = np.eye(A.dim)
    p = np.empty(len(A))
    for i, E in enumerate(A.effects):
        w = np.trace(E).real / A.dim
        if frob_dist(E, w * eye) > tol.eq_abs:
            return None
        p[i] = max(w, 0.0)
    return p


def is_indecomposable_povm(A: Povm, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when every nonvanishing effect has rank one."""
    from .linalg import numerical_rank

    for E in A.effects:
        if np.trace(E).real <= tol.eq_abs:
            continue
        if numerical_rank(E, tol) != 1:
            return False
    return True


def minimal_sufficient(A: Povm, tol: Tolerance = DEFAULT_TOL):
    """Drop vanishing effects and merge pairwise-proportional ones.

    Returns (reduced POVM, Grouping).  Proportionality is tested on
    trace-normalized effects; merged classes keep the label of their first
    member, and weights record each member's share of the class effect.
    """
    kept = []
    dropped = []
    for label, E in A.outcomes:
        if np.trace(E).real <= tol.eq_abs:
            dropped.append(label)
        else:
            kept.append((label, E))

    n = len(kept)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    normed = [E / np.trace(E).real for _, E in kept]
    for i in range(n):
        for j in range(i + 1, n):
            if frob_dist(normed[i], normed[j]) <= tol.eq_abs:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    members = {}
    roots = []
    for i in range(n):
        r = find(i)
        if r not in members:
            members[r] = []
            roots.append(r)
        members[r].append(i)

    outcomes = []
    class_of = {}
    weights = {}
    for r in roots:
        class_label = kept[r][0]
        total = np.zeros((A.dim, A.dim), dtype=complex)
        for i in members[r]:
            total += kept[i][1]
        class_trace = np.trace(total).real
        for i in members[r]:
            label, E = kept[i]
            class_of[label] = class_label
            weights[label] = np.trace(E).real / class_trace
        outcomes.append((class_label, total))
    return Povm(A.dim, outcomes), Grouping(class_of, weights, dropped)


def povm_equivalent(A: Povm, B: Povm, tol: Tolerance = DEFAULT_TOL):
    """Decide post-processing equivalence by matching minimally sufficient forms.

    Returns (nu, mu) where nu turns B into A and mu turns A into B, both
    supported only where effects are proportional, or None when the reduced
    POVMs are not a relabeling of each other.  Rows belonging to vanishing
    effects distribute their unit mass uniformly; this never affects the
    reconstruction.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"POVMs act on different spaces: {A.dim} vs {B.dim}")
    red_a, grp_a = minimal_sufficient(A, tol)
    red_b, grp_b = minimal_sufficient(B, tol)
    if len(red_a) != len(red_b):
        return None

    match = {}
    used = set()
    for la, Ea in red_a.outcomes:
        hit = None
        for lb, Eb in red_b.outcomes:
            if lb in used:
                continue
            if frob_dist(Ea, Eb) <= tol.eq_abs:
                hit = lb
                break
        if hit is None:
            return None
        match[la] = hit
        used.add(hit)
    inverse = {lb: la for la, lb in match.items()}

    def build(rows, cols, grp_rows, grp_cols, pair):
        # entry[y, x] = weight of x inside its class, placed on every row y
        # of the matched class; vanished rows get spread uniformly.
        out = np.zeros((len(rows), len(cols)))
        for xi, x in enumerate(cols):
            if x in grp_cols.dropped:
                continue
            target_class = pair[grp_cols.class_of[x]]
            for yi, y in enumerate(rows):
                if y in grp_rows.dropped:
                    continue
                if grp_rows.class_of[y] == target_class:
                    out[yi, xi] = grp_cols.weights[x]
        for yi, y in enumerate(rows):
            if y in grp_rows.dropped:
                out[yi, :] = 1.0 / len(cols)
        return out

    nu = StochasticMatrix(B.labels, A.labels, build(B.labels, A.labels, grp_b, grp_a, match))
    mu = StochasticMatrix(A.labels, B.labels, build(A.labels, B.labels, grp_a, grp_b, inverse))
    if max_effect_distance(apply_post_processing(B, nu), A) > tol.eq_abs:
        return None
    if max_effect_distance(apply_post_processing(A, mu), B) > tol.eq_abs:
        return None
    return nu, mu


def proportional_inequivalent_pair():
    """Two qubit POVMs with pairwise-proportional effects that are not
    post-processing equivalent.

    Both measure the same four rank-one directions (computational basis and
    its Hadamard rotation); only the weights differ, (1/2, 1/2, 1/2, 1/2)
    against (1/3, 1/3, 2/3, 2/3).
    """
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    h0 = (e0 + e1) / np.sqrt(2.0)
    h1 = (e0 - e1) / np.sqrt(2.0)
    projs = [np.outer(v, v.conj()) for v in (e0, e1, h0, h1)]
    labels = ["1", "2", "3", "4"]
    wa = [0.5, 0.5, 0.5, 0.5]
    wb = [1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0]
    A = Povm(2, [(l, w * P) for l, w, P in zip(labels, wa, projs)])
    B = Povm(2, [(l, w * P) for l, w, P in zip(labels, wb, projs)])
    return A, B

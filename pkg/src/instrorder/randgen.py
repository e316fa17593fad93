"""Seeded generators for states, isometries, POVMs and instruments.

Randomness comes from an explicit counter-based 64-bit generator so that
identical (parameters, seed) give bit-identical output on any platform and
can be reproduced in other languages from the update equations below:

    output_i = mix(seed + (i + 1) * 0x9E3779B97F4A7C15)   (mod 2^64)
    mix(z):  z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
             z ^= z >> 27;  z *= 0x94D049BB133111EB
             z ^= z >> 31

Uniforms in (0, 1] are ((output >> 11) + 1) * 2^-53; Gaussians come from the
Box-Muller transform.  Callers wanting independent streams use distinct
seeds.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameters
from .instrument import Instrument, QuantumOperation, State
from .povm import Povm

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _check_seed(seed):
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < 2**64:
        raise InvalidParameters("seed must be an unsigned 64-bit integer")


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _uniforms(seed, count, offset=0):
    """count uniforms in (0, 1] from the counter stream starting at offset."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        bits = _mix(np.uint64(seed) + idx * _GOLDEN)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def _gaussians(seed, count):
    half = (count + 1) // 2
    u1 = _uniforms(seed, half, 0)
    u2 = _uniforms(seed, half, half)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]


def _complex_gaussian(seed, rows, cols):
    g = _gaussians(seed, 2 * rows * cols)
    return (g[: rows * cols] + 1j * g[rows * cols :]).reshape(rows, cols)


def random_distribution(n, seed):
    """Point of the probability simplex, uniform (Dirichlet with unit weights)."""
    if n < 1:
        raise InvalidParameters("need at least one outcome")
    _check_seed(seed)
    e = -np.log(_uniforms(seed, n))
    return e / e.sum()


def random_isometry(d_in, d_out, seed) -> np.ndarray:
    """d_out x d_in matrix with orthonormal columns, from the QR
    factorization of a complex Gaussian matrix with phases fixed so the
    triangular factor has positive diagonal."""
    if d_in < 1 or d_out < d_in:
        raise InvalidParameters("need d_out >= d_in >= 1")
    _check_seed(seed)
    G = _complex_gaussian(seed, d_out, d_in)
    Q, R = np.linalg.qr(G)
    diag = np.diag(R).copy()
    diag[diag == 0] = 1.0  # never hit for Gaussian input, keeps the map total
    return Q * (diag / np.abs(diag))


def random_unitary(d, seed) -> np.ndarray:
    return random_isometry(d, d, seed)


def random_state(d, seed) -> State:
    """Normalized Wishart matrix G G† / tr."""
    if d < 1:
        raise InvalidParameters("dimension must be at least 1")
    _check_seed(seed)
    G = _complex_gaussian(seed, d, d)
    W = G @ G.conj().T
    return State(d, W / np.trace(W).real)


def random_povm(n, d, seed) -> Povm:
    """n-outcome POVM on dimension d: bin the rows of a random isometry
    from C^d into C^(n d) into n consecutive blocks and form V_g† V_g."""
    if n < 1 or d < 1:
        raise InvalidParameters("need n, d >= 1")
    V = random_isometry(d, n * d, seed)
    outcomes = []
    for g in range(n):
        block = V[g * d : (g + 1) * d, :]
        outcomes.append((str(g), block.conj().T @ block))
    return Povm(d, outcomes)


def random_rank1_povm(n, d, seed) -> Povm:
    """n-outcome POVM whose effects are all rank one; needs n >= d."""
    if d < 1 or n < d:
        raise InvalidParameters("need n >= d >= 1")
    V = random_isometry(d, n, seed)
    outcomes = []
    for g in range(n):
        row = V[g, :]
        outcomes.append((str(g), np.outer(row.conj(), row)))
    return Povm(d, outcomes)


def random_instrument(n, d_in, d_out, max_kraus, seed) -> Instrument:
    """n-outcome instrument from a random global isometry
    W: C^d_in -> C^(d_out n max_kraus), its d_out x d_in blocks handed
    round-robin to the outcomes as Kraus operators."""
    if n < 1 or d_in < 1 or d_out < 1 or max_kraus < 1:
        raise InvalidParameters("need n, d_in, d_out, max_kraus >= 1")
    m = n * max_kraus
    if d_out * m < d_in:
        raise InvalidParameters("output blocks cannot carry an isometry from d_in")
    W = random_isometry(d_in, d_out * m, seed)
    per_outcome = {str(x): [] for x in range(n)}
    for j in range(m):
        block = W[j * d_out : (j + 1) * d_out, :]
        per_outcome[str(j % n)].append(block)
    outcomes = [
        (x, QuantumOperation(d_in, d_out, ks)) for x, ks in per_outcome.items()
    ]
    return Instrument(d_in, d_out, outcomes)

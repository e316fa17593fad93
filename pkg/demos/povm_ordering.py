"""
Post-processing order on POVMs
==============================

Coarse-graining a sharp measurement, searching for a stochastic matrix
between two POVMs, and a pair of measurements on the same four directions
that cannot be turned into each other.
"""

import numpy as np

from instrorder import (
    apply_post_processing,
    find_post_processing,
    minimal_sufficient,
    povm_equivalent,
    random_povm,
    relabel,
)
from instrorder.povm import Povm, proportional_inequivalent_pair

# A sharp qubit measurement and its coarse-graining to a single outcome.
basis = Povm(2, [("0", np.diag([1.0, 0.0])), ("1", np.diag([0.0, 1.0]))])
merged = relabel(basis, lambda label: "any")
print("coarse-grained effects:", [np.diag(E).real for _, E in merged.outcomes])

# The coarse measurement is reachable from the sharp one ...
nu = find_post_processing(basis, merged)
print("sharp -> merged stochastic matrix:")
print(np.asarray(nu.entries))

# ... but not the other way around: merging loses information.
print("merged -> sharp feasible:", find_post_processing(merged, basis) is not None)

# Reachability is not symmetric even between same-size POVMs.  These two
# measure the same four rank-one directions (a basis and its Hadamard
# rotation); only the outcome weights differ.  Neither reaches the other.
A, B = proportional_inequivalent_pair()
print("A -> B feasible:", find_post_processing(A, B) is not None)
print("B -> A feasible:", find_post_processing(B, A) is not None)
print("equivalent:", povm_equivalent(A, B) is not None)

# Every POVM has a canonical minimal form: zero effects dropped and
# proportional effects merged.  Splitting an effect in two and adding a
# null outcome changes nothing up to equivalence.
P = random_povm(3, 2, seed=7)
split = Povm(
    2,
    [("0a", 0.3 * P.effect("0")), ("0b", 0.7 * P.effect("0"))]
    + [(l, P.effect(l)) for l in ("1", "2")]
    + [("null", np.zeros((2, 2)))],
)
reduced, grouping = minimal_sufficient(split)
print("outcomes before/after reduction:", len(split), "->", len(reduced))
print("dropped outcomes:", grouping.dropped)
print("merge classes:", grouping.class_of)
print("still equivalent to the original:", povm_equivalent(P, reduced) is not None)

# The returned grouping is a reconstruction recipe: each original effect is
# its class effect scaled by the recorded weight.
worst = max(
    np.abs(grouping.weights[l] * reduced.effect(grouping.class_of[l]) - split.effect(l)).max()
    for l in split.labels
    if l not in grouping.dropped
)
print("largest reconstruction error:", worst)

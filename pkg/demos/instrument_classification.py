"""
A zoo of instruments and their structure
========================================

The standard constructions (Lüders, trash-and-prepare, measure-and-prepare,
isometric, detailed) run through every classifier, showing where each one
sits between the least class (trash-and-prepare) and the greatest class
(the identity equivalence class).
"""

import numpy as np

from instrorder import (
    detailed_instrument,
    identity_class_certificate,
    identity_instrument,
    induced_povm,
    is_extreme,
    is_indecomposable_instrument,
    is_measure_and_prepare,
    is_trash_and_prepare,
    isometric_channel,
    luders,
    measure_and_prepare,
    random_isometry,
    random_povm,
    random_state,
    trash_and_prepare,
)
from instrorder.povm import Povm

basis = Povm(2, [("0", np.diag([1.0, 0.0])), ("1", np.diag([0.0, 1.0]))])
xi = [random_state(2, seed) for seed in (1, 2)]

zoo = [
    ("identity channel", identity_instrument(2)),
    ("embedding isometry", isometric_channel(random_isometry(2, 3, seed=3))),
    ("Lüders of the basis PVM", luders(basis)),
    ("Lüders of a fuzzy POVM", luders(random_povm(2, 2, seed=4))),
    ("measure-and-prepare", measure_and_prepare(basis, xi)),
    ("trash-and-prepare", trash_and_prepare([0.4, 0.6], xi, dim_in=2)),
]

for name, I in zoo:
    print(name)
    print("  outcomes:", len(I), " spaces:", I.dim_in, "->", I.dim_out)
    print("  indecomposable:        ", is_indecomposable_instrument(I))
    print("  trash-and-prepare:     ", is_trash_and_prepare(I) is not None)
    print("  measure-and-prepare:   ", is_measure_and_prepare(I) is not None)
    print("  identity class:        ", identity_class_certificate(I) is not None)
    print("  extreme:               ", is_extreme(I))

# The detailed instrument splits each operation into one outcome per
# minimal Kraus branch and refines the induced POVM accordingly.
from instrorder import random_instrument

I = random_instrument(2, 2, 2, 2, seed=5)
D = detailed_instrument(I)
print("detailing a 2-outcome instrument with 2 Kraus branches each:")
print("  outcomes:", I.labels, "->", D.labels)
print("  every detailed operation is indecomposable:", is_indecomposable_instrument(D))
print("  induced POVM effects still sum to identity:")
total = sum(induced_povm(D).effects)
print(np.round(total.real, 12))

"""
Two projections in canonical position
=====================================

Decompose a random pair of projections, rebuild its polynomial from the
invariants alone, and decide equivalence with a conjugated copy.
"""

import numpy as np

from projchar import (
    canonical_form,
    charpoly_det,
    cpp_polynomial,
    equivalent_pairs,
    factorization,
    format_poly,
    halmos_invariants,
)
from projchar.fixtures import make_rng, random_projection_pair, random_unitary
from projchar.poly import max_coeff_diff

rng = make_rng(7)
pair = random_projection_pair(rng, 6, ranks=(3, 2))
inv = halmos_invariants(pair)
print("corner dimensions k1..k4:", inv.corners())
print("generic spectrum of H:", np.round(inv.h_spectrum, 4))

# The closed form needs nothing but the invariants
closed = cpp_polynomial(inv)
print("closed form vs determinant:", max_coeff_diff(closed, charpoly_det(pair.as_tuple())))
for f in factorization(inv):
    print(f"  ({format_poly(f.poly)})^{f.multiplicity}  irreducible={f.irreducible}")

# U P U* is block diagonal in the model coordinates
u, _ = canonical_form(pair)
print("canonical P diagonal:", np.round(np.diag(u @ pair.p @ u.conj().T).real, 6) + 0.0)

# A rotated copy is equivalent, and the witness carries one onto the other
other = pair.conjugate(random_unitary(rng, 6))
verdict = equivalent_pairs(pair, other)
print("equivalent:", verdict.equivalent, " witness residual:", verdict.witness_residual)

# A fresh pair with the same ranks is almost never equivalent
stranger = random_projection_pair(rng, 6, ranks=(3, 2))
print("fresh pair equivalent:", equivalent_pairs(pair, stranger).equivalent)

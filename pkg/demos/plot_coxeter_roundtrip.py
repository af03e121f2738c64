"""
Coxeter matrices from polynomials
=================================

The Tits representation turns a Coxeter matrix into reflections; the
characteristic polynomial of those reflections determines the matrix back.
"""

import numpy as np

from projchar import coxeter_charpoly, format_poly, recover_coxeter
from projchar.coxeter import (
    dihedral,
    hyperplane_equivalence,
    hyperplane_projections,
    tits_representation,
    type_a,
    type_h3,
)
from projchar.fixtures import make_rng, random_orthogonal

print("A2 polynomial:", format_poly(coxeter_charpoly(type_a(2))))

for cm in (type_a(3), type_h3(), dihedral(7)):
    q = coxeter_charpoly(cm)
    back = recover_coxeter(q)
    print(cm.to_dict()["m"], "->", back.to_dict()["m"], "exact:", back == cm)

# Reflections are involutions
rep = tits_representation(type_h3())
print("max |g^2 - I|:", max(np.abs(g @ g - np.eye(3)).max() for g in rep.gens))

# Hyperplane projections of H3 under a random rotation: recover the rotation
rng = make_rng(3)
t = hyperplane_projections(type_h3())
r = random_orthogonal(rng, 3)
u = hyperplane_equivalence(t, t.conjugate(r))
print("recovered rotation up to signs:", np.allclose(np.abs(r.T @ u), np.eye(3)))
print("A2 vs I2(4):", hyperplane_equivalence(hyperplane_projections(type_a(2)),
                                             hyperplane_projections(dihedral(4))))

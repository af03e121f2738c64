"""
Three projections
=================

Triples of projections have no closed-form polynomial; we can still compute
it, check both algorithms agree, and look at the joint spectrum on a line.
"""

import numpy as np

from projchar import MatrixTuple, charpoly_det, charpoly_ps, pencil_spectrum
from projchar.fixtures import make_rng, random_projection
from projchar.poly import canonical_equal

rng = make_rng(11)
t = MatrixTuple(np.stack([random_projection(rng, 4, 2) for _ in range(3)]))
q = charpoly_det(t)
print("variables:", q.nvars, " degree:", q.degree, " terms:", len(q))
print("routes agree:", canonical_equal(q, charpoly_ps(t), 1e-9))

# Along z' = (cos s, sin s, 1) the roots are minus the eigenvalues of the pencil
for s in np.linspace(0, np.pi, 4):
    zp = np.array([np.cos(s), np.sin(s), 1.0])
    roots = pencil_spectrum(t, zp)
    eig = np.linalg.eigvalsh(t.numeric_pencil(zp))
    print(f"s={s:.2f}  roots={np.round(np.sort(-roots.real), 4)}  eig={np.round(eig, 4)}")

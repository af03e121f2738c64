"""
Characteristic polynomials of matrix tuples
===========================================

Build Q_A(z) = det(z0 I + z1 A1 + ... + zn An) two ways and check they agree.
"""

import numpy as np

from projchar import MatrixTuple, charpoly_det, charpoly_ps, format_poly
from projchar.fixtures import make_rng, random_tuple
from projchar.pencil import cofactor_matrix, q_coefficients
from projchar.poly import max_coeff_diff

# A pair of diagonal projections: every factor is linear
t = MatrixTuple.of(np.diag([1.0, 1, 0, 0]), np.diag([1.0, 0, 1, 0]))
print("diagonal pair:", format_poly(charpoly_det(t)))

# A random complex pair; the trace-power route must reproduce the determinant
rng = make_rng(1)
t = random_tuple(rng, 2, 4)
q_det, q_ps = charpoly_det(t), charpoly_ps(t)
print("random 4x4 pair, terms:", len(q_det))
print("largest coefficient gap between the two routes:", max_coeff_diff(q_det, q_ps))

# Expand in powers of z0; q1 is the trace polynomial
qs = q_coefficients(t)
print("q1 =", format_poly(qs[1], names=["z1", "z2"]))

# The trace of the cofactor matrix is the z0-derivative of Q
gap = max_coeff_diff(cofactor_matrix(t).trace(), q_det.partial(0))
print("tr C - dQ/dz0:", gap)

"""Multiparameter characteristic polynomials of matrix tuples.

``Q_A(z) = det(z0 I + z1 A1 + ... + zn An)`` for a tuple of square matrices,
with applications to pairs of projections and to Coxeter groups.
"""

from .errors import (
    CapabilityError,
    ConsistencyError,
    InputError,
    NotTitsPolynomialError,
    NumericalError,
    ProjCharError,
)
from .poly import MultiPoly, canonical_equal, format_poly
from .pencil import (
    MatrixTuple,
    PolyMatrix,
    build_pencil,
    charpoly_det,
    charpoly_ps,
    cofactor_matrix,
    pencil_spectrum,
    q_coefficients,
    qkm_via_cofactor,
)
from .projpair import (
    HalmosInvariants,
    ProjectionPair,
    canonical_form,
    cpp_polynomial,
    equivalent_pairs,
    factorization,
    generic_position,
    halmos_invariants,
    trace_word_criterion,
)
from .coxeter import (
    INF,
    CoxeterMatrix,
    coxeter_charpoly,
    hyperplane_equivalence,
    hyperplane_projections,
    recover_coxeter,
    tits_representation,
)

__version__ = "0.1.0"

"""Seeded random fixtures: unitaries, projections, pairs and tuples.

All generators take a ``numpy.random.Generator``; :func:`make_rng` builds
one on the PCG64 bit generator, whose output for a given seed is fixed
across platforms and numpy versions.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .linalg import orthonormalize
from .pencil import MatrixTuple
from .projpair import HalmosInvariants, ProjectionPair, model_pair

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; negative 64-bit seeds are read as their unsigned twin."""
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


def complex_gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, k: int) -> np.ndarray:
    return orthonormalize(complex_gaussian(rng, (k, k)))


def random_orthogonal(rng, k: int) -> np.ndarray:
    return orthonormalize(rng.standard_normal((k, k))).real


def random_projection(rng, k: int, rank: int) -> np.ndarray:
    """``V V*`` for an orthonormalized random ``k x rank`` matrix ``V``."""
    if not 0 <= rank <= k:
        raise InputError(f"rank {rank} outside [0, {k}]")
    if rank == 0:
        return np.zeros((k, k), dtype=complex)
    v = orthonormalize(complex_gaussian(rng, (k, rank)))
    p = v @ v.conj().T
    return 0.5 * (p + p.conj().T)


def random_projection_pair(rng, k: int, ranks=None) -> ProjectionPair:
    """Pair of random projections; ranks default to uniform draws from ``1..k-1``."""
    if k < 1:
        raise InputError("k must be at least 1")
    if ranks is None:
        lo, hi = (1, k - 1) if k >= 2 else (0, 1)
        ranks = rng.integers(lo, hi, endpoint=True, size=2)
    return ProjectionPair(random_projection(rng, k, int(ranks[0])), random_projection(rng, k, int(ranks[1])))


def random_tuple(rng, n: int, k: int) -> MatrixTuple:
    """``n`` random ``k x k`` matrices with entries uniform in the unit disc."""
    if n < 1 or k < 1:
        raise InputError("n and k must be at least 1")
    radius = np.sqrt(rng.random((n, k, k)))
    angle = 2 * np.pi * rng.random((n, k, k))
    return MatrixTuple(radius * np.exp(1j * angle))


def random_hermitian_tuple(rng, n: int, k: int) -> MatrixTuple:
    a = complex_gaussian(rng, (n, k, k)) / 2
    return MatrixTuple(a + a.conj().transpose(0, 2, 1))


def random_invariants(rng, k: int, min_generic: int = 1) -> HalmosInvariants:
    """Random corner dimensions and a generic spectrum well inside ``(0, 1)``."""
    max_m0 = k // 2
    if max_m0 < min_generic:
        raise InputError(f"k={k} cannot hold {min_generic} generic blocks")
    m0 = int(rng.integers(min_generic, max_m0, endpoint=True))
    rest = k - 2 * m0
    cuts = np.sort(rng.integers(0, rest, endpoint=True, size=3))
    corners = np.diff(np.concatenate([[0], cuts, [rest]]))
    h = rng.uniform(0.05, 0.95, size=m0)
    return HalmosInvariants(*(int(c) for c in corners), tuple(h))


def pair_from_invariants(rng, inv: HalmosInvariants) -> ProjectionPair:
    """The model pair for ``inv`` conjugated by a random unitary."""
    return model_pair(inv).conjugate(random_unitary(rng, inv.k))

"""Coxeter matrices, Tits representations and hyperplane projections.

The Tits representation sends generator ``g_i`` to the reflection
``rho(g_i) e_j = e_j + 2 alpha_ij e_i`` with ``alpha_ij = cos(pi / m_ij)``
(``alpha_ij = 1`` when ``m_ij`` is infinite). It preserves the bilinear form
``B(e_i, e_j) = -alpha_ij``.

The characteristic polynomial of the generators determines the Coxeter
matrix: the ``z0^(n-2) z_i z_j`` coefficient equals
``n^2 - 5n + 8 - 4 alpha_ij^2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapabilityError, InputError, NotTitsPolynomialError, NumericalError
from .linalg import fro
from .pencil import MatrixTuple, charpoly_det
from .poly import MultiPoly, canonical_equal

COXETER_MAX_RANK = 10
M_INF_GUARD = 1000


class _Infinity(enum.Enum):
    INF = "inf"

    def __repr__(self):
        return "INF"


INF = _Infinity.INF


def _check_entry(v):
    if v is INF or v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) and not (
        isinstance(v, float) and v.is_integer()
    ):
        raise InputError(f"Coxeter entries must be integers or 'inf', got {v!r}")
    return int(v)


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of orders ``m_ij`` (``INF`` for infinite order)."""

    m: tuple

    def __post_init__(self):
        rows = tuple(tuple(_check_entry(v) for v in row) for row in self.m)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InputError("Coxeter matrix must be square and non-empty")
        for i in range(n):
            if rows[i][i] != 1:
                raise InputError(f"diagonal entry m[{i}][{i}] must be 1")
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise InputError(f"Coxeter matrix is not symmetric at ({i}, {j})")
                if i != j and rows[i][j] is not INF and rows[i][j] < 2:
                    raise InputError(f"off-diagonal entry m[{i}][{j}] must be >= 2")
        object.__setattr__(self, "m", rows)

    @property
    def n(self) -> int:
        return len(self.m)

    def alphas(self) -> np.ndarray:
        n = self.n
        a = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                v = self.m[i][j]
                a[i, j] = 1.0 if v is INF else math.cos(math.pi / v)
        return a

    def to_dict(self) -> dict:
        return {"n": self.n, "m": [["inf" if v is INF else v for v in row] for row in self.m]}

    @classmethod
    def from_dict(cls, data) -> "CoxeterMatrix":
        try:
            m = data["m"]
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Coxeter JSON: {exc}") from exc
        cm = cls(m)
        if cm.n != n:
            raise InputError(f"declared rank {n} but matrix has rank {cm.n}")
        return cm

    @classmethod
    def from_edges(cls, n: int, edges: dict) -> "CoxeterMatrix":
        """Build from ``{(i, j): m_ij}``; unlisted pairs commute (``m = 2``)."""
        m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        for (i, j), v in edges.items():
            m[i][j] = m[j][i] = v
        return cls(m)


def dihedral(m) -> CoxeterMatrix:
    """``I2(m)``."""
    return CoxeterMatrix(((1, m), (m, 1)))


def type_a(n: int) -> CoxeterMatrix:
    return CoxeterMatrix.from_edges(n, {(i, i + 1): 3 for i in range(n - 1)})


def type_b(n: int) -> CoxeterMatrix:
    edges = {(i, i + 1): 3 for i in range(n - 2)}
    edges[(n - 2, n - 1)] = 4
    return CoxeterMatrix.from_edges(n, edges)


def type_h3() -> CoxeterMatrix:
    return CoxeterMatrix.from_edges(3, {(0, 1): 5, (1, 2): 3})


@dataclass(frozen=True, eq=False)
class TitsRep:
    n: int
    alphas: np.ndarray
    gens: np.ndarray  # (n, n, n) complex with zero imaginary part
    bform: np.ndarray

    def as_tuple(self) -> MatrixTuple:
        return MatrixTuple(self.gens)


def tits_representation(cm: CoxeterMatrix) -> TitsRep:
    """Generators ``rho(g_i) = I + 2 e_i alpha_i^T`` and the form ``B = -alpha``."""
    n = cm.n
    a = cm.alphas()
    gens = np.empty((n, n, n), dtype=complex)
    for i in range(n):
        g = np.eye(n)
        g[i, :] += 2.0 * a[i, :]
        gens[i] = g
    return TitsRep(n, a, gens, -a)


def involution_residual(rep: TitsRep) -> float:
    eye = np.eye(rep.n)
    return max(fro(g @ g - eye) for g in rep.gens)


def bform_residual(rep: TitsRep) -> float:
    """``max_k ||rho_k^T B rho_k - B||_F``, i.e. invariance of the real bilinear form."""
    b = rep.bform
    return max(fro(g.T @ b @ g - b) for g in rep.gens)


def order_relation_residual(rep: TitsRep, cm: CoxeterMatrix) -> float:
    """``max ||(rho_i rho_j)^{m_ij} - I||_F`` over pairs with finite order."""
    eye = np.eye(rep.n)
    worst = 0.0
    for i in range(rep.n):
        for j in range(rep.n):
            m = cm.m[i][j]
            if m is INF:
                continue
            worst = max(worst, fro(np.linalg.matrix_power(rep.gens[i] @ rep.gens[j], m) - eye))
    return worst


def coxeter_charpoly(cm: CoxeterMatrix) -> MultiPoly:
    """``det(z0 I + sum_i z_i rho(g_i))`` in ``n + 1`` variables."""
    if cm.n > COXETER_MAX_RANK:
        raise CapabilityError(f"coxeter_charpoly supports rank <= {COXETER_MAX_RANK}, got {cm.n}")
    q = charpoly_det(tits_representation(cm).as_tuple())
    n = cm.n
    for i in range(1, n + 1):
        e = [0] * (n + 1)
        e[0], e[i] = n - 1, 1
        if abs(q.coeff(e) - (n - 2)) > 1e-9:
            raise NumericalError("linear coefficient of the Tits polynomial is not n - 2")
    return q


def cross_coefficient(n: int, alpha: float) -> float:
    """Coefficient of ``z0^(n-2) z_i z_j`` for a pair with ``alpha_ij = alpha``."""
    return (n - 2) ** 2 - (n - 4) - 4.0 * alpha**2


def _mono(n, pairs):
    e = [0] * (n + 1)
    for idx, k in pairs:
        e[idx] += k
    return tuple(e)


def recover_coxeter(q: MultiPoly, tol: float = 1e-6) -> CoxeterMatrix:
    """Read the Coxeter matrix back from a Tits characteristic polynomial.

    Raises
    ------
    NotTitsPolynomialError
        If the polynomial is not monic of degree ``n`` in ``z0``, if its
        linear or square coefficients do not have the forced values, or if
        some cross coefficient does not correspond to ``cos(pi/m)`` for an
        integer ``m >= 2`` or to ``m = inf``.
    """
    n = q.nvars - 1
    if n < 1:
        raise NotTitsPolynomialError("need at least two variables")
    if abs(q.coeff(_mono(n, [(0, n)])) - 1.0) > tol or q.degree != n:
        raise NotTitsPolynomialError(f"polynomial is not monic of degree {n} in z0")
    for i in range(1, n + 1):
        c = q.coeff(_mono(n, [(0, n - 1), (i, 1)]))
        if abs(c - (n - 2)) > tol:
            raise NotTitsPolynomialError(
                f"coefficient of z0^{n - 1}*z{i} is {c.real:.6g}, expected {n - 2}"
            )
    if n == 1:
        return CoxeterMatrix(((1,),))
    square = 0.5 * (n - 1) * (n - 4)
    for i in range(1, n + 1):
        c = q.coeff(_mono(n, [(0, n - 2), (i, 2)]))
        if abs(c - square) > tol:
            raise NotTitsPolynomialError(
                f"coefficient of z0^{n - 2}*z{i}^2 is {c.real:.6g}, expected {square:.6g}"
            )
    base = n * n - 5 * n + 8
    m = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c = q.coeff(_mono(n, [(0, n - 2), (i + 1, 1), (j + 1, 1)]))
            if abs(c.imag) > tol:
                raise NotTitsPolynomialError(f"cross coefficient of z{i + 1}*z{j + 1} is not real")
            a2 = (base - c.real) / 4.0
            if a2 < -tol or a2 > 1.0 + tol:
                raise NotTitsPolynomialError(
                    f"cross coefficient {c.real:.6g} of z{i + 1}*z{j + 1} is outside the Tits range"
                )
            alpha = math.sqrt(min(max(a2, 0.0), 1.0))
            if alpha >= 1.0 - 1e-9:
                order = INF
            else:
                order = round(math.pi / math.acos(alpha))
                if order > M_INF_GUARD:
                    order = INF
                elif order < 2 or abs(math.cos(math.pi / order) - alpha) > tol:
                    raise NotTitsPolynomialError(
                        f"alpha={alpha:.9g} for z{i + 1}*z{j + 1} is not cos(pi/m) for an integer m"
                    )
            m[i][j] = m[j][i] = order
    return CoxeterMatrix(m)


def hyperplane_projections(cm: CoxeterMatrix) -> MatrixTuple:
    """``p_i = (I + rho(g_i)) / 2``; the kernel of ``p_i`` is spanned by ``e_i``."""
    rep = tits_representation(cm)
    eye = np.eye(cm.n)
    return MatrixTuple(np.stack([(eye + g) / 2.0 for g in rep.gens]))


def _kernel_vector(p):
    # ker p = ran(I - p) for an idempotent; take the dominant column
    c = np.eye(p.shape[0]) - p
    j = int(np.argmax(np.linalg.norm(c, axis=0)))
    v = c[:, j] / np.linalg.norm(c[:, j])
    lead = v[int(np.argmax(np.abs(v)))]
    return v * (abs(lead) / lead)


def _check_hyperplane_tuple(t: MatrixTuple, name: str):
    n, k = t.n, t.k
    if n != k:
        raise InputError(f"{name}: need n = {k} projections in dimension {k}, got {n}")
    for i, p in enumerate(t.mats):
        if fro(p @ p - p) > 1e-8 * (1.0 + fro(p)):
            raise InputError(f"{name}[{i}] is not idempotent")
        if abs(np.trace(p) - (k - 1)) > 1e-6:
            raise InputError(f"{name}[{i}] does not have rank {k - 1}")


def kernel_frame(t: MatrixTuple):
    """Normalized kernel vectors ``e_i`` and their pairing matrix ``G_ij = f_i(e_j)``.

    Each ``p_i`` is ``I - e_i f_i^T``. Kernel vectors start at unit length
    with their largest entry real positive; then, along a spanning forest of
    the pairing graph, each new vector is rescaled so that
    ``G_ij = G_ji <= 0``. This reproduces the Tits convention
    ``G = -alpha`` whenever it is attainable.

    Raises
    ------
    InputError
        If the kernel vectors are not linearly independent.
    NumericalError
        If no rescaling makes the pairing real symmetric with non-positive
        off-diagonal entries (possible for genuinely complex tuples).
    """
    n = t.k
    e = np.stack([_kernel_vector(p) for p in t.mats], axis=1)
    gram = e.conj().T @ e
    if abs(np.linalg.det(gram)) < 1e-8:
        raise InputError("kernel vectors are not linearly independent")
    # p_i e_j = e_j - f_i(e_j) e_i, so f_i(e_j) is coordinate i of (I - p_i) e_j in the e-basis
    def pairing(vecs):
        inv = np.linalg.inv(vecs)
        g = np.empty((n, n), dtype=complex)
        for i in range(n):
            g[i] = (inv @ ((np.eye(n) - t.mats[i]) @ vecs))[i]
        return g

    g = pairing(e)
    scale = np.ones(n, dtype=complex)
    seen = [False] * n
    edge_tol = 1e-9
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if seen[j] or abs(g[i, j]) <= edge_tol:
                    continue
                # ratio r = c_j / c_i gives G_ij -> r G_ij, G_ji -> G_ji / r
                prod = g[i, j] * g[j, i]
                a = np.sqrt(prod)
                r = -a / g[i, j]
                scale[j] = scale[i] * r
                seen[j] = True
                stack.append(j)
    e = e * scale
    g = pairing(e)
    off = g - np.diag(np.diag(g))
    if np.max(np.abs(off.imag), initial=0.0) > 1e-7 or fro(g - g.T) > 1e-7 or np.max(off.real, initial=0.0) > 1e-7:
        raise NumericalError("no phase choice makes the kernel pairing real symmetric and non-positive")
    return e, g.real


def hyperplane_equivalence(p: MatrixTuple, p2: MatrixTuple, tol: float = 1e-7) -> Optional[np.ndarray]:
    """Witness ``U`` with ``U p_i U^-1 = p2_i`` for equivalent hyperplane tuples, else ``None``.

    ``U`` maps the normalized kernel vectors of ``p`` onto those of ``p2``.
    """
    _check_hyperplane_tuple(p, "p")
    _check_hyperplane_tuple(p2, "p2")
    if p.k != p2.k:
        return None
    if not canonical_equal(charpoly_det(p), charpoly_det(p2), tol):
        return None
    e, g = kernel_frame(p)
    e2, g2 = kernel_frame(p2)
    if fro(g - g2) > 1e-6:
        raise NumericalError("polynomials agree but the kernel pairings differ")
    u = e2 @ np.linalg.inv(e)
    uinv = np.linalg.inv(u)
    res = max(fro(u @ a @ uinv - b) for a, b in zip(p.mats, p2.mats))
    if res > tol:
        raise NumericalError(f"witness residual {res:.3g} exceeds {tol}")
    return u


def rank1_reduction(p: MatrixTuple) -> MatrixTuple:
    """Complements ``(I - p_1, ..., I - p_n)`` of rank-one projections."""
    n, k = p.n, p.k
    if n != k:
        raise InputError(f"need {k} rank-one projections in dimension {k}, got {n}")
    for i, a in enumerate(p.mats):
        if abs(np.trace(a) - 1.0) > 1e-6:
            raise InputError(f"p[{i}] does not have rank 1")
        if fro(a @ a - a) > 1e-8 * (1.0 + fro(a)):
            raise InputError(f"p[{i}] is not idempotent")
    return MatrixTuple(np.eye(k) - p.mats)


def complement_charpoly(q: MultiPoly) -> MultiPoly:
    """``Q_{I-p}(z0, z') = Q_p(z0 + sum z_i, -z')`` as a polynomial identity."""
    nv = q.nvars
    images = [MultiPoly.linear([1.0] * nv)]
    for i in range(1, nv):
        images.append(MultiPoly.variable(nv, i, -1.0))
    return q.substitute(images)


def rank1_equivalence(p: MatrixTuple, p2: MatrixTuple) -> Optional[np.ndarray]:
    """Equivalence of rank-one tuples through their hyperplane complements."""
    return hyperplane_equivalence(rank1_reduction(p), rank1_reduction(p2))


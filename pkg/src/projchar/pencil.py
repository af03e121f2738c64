"""Linear pencils ``z0*I + z1*A1 + ... + zn*An`` and their characteristic polynomial.

Two independent routes compute ``Q_A(z) = det(z0 I + sum_j zj Aj)``:

* :func:`charpoly_det` expands the determinant of the polynomial matrix
  with a memoized Laplace expansion over column subsets.
* :func:`charpoly_ps` builds power sums ``tr(A_*(z')^j)`` and turns them into
  elementary symmetric functions with Newton's identities.

Both return a :class:`~projchar.poly.MultiPoly` in ``n + 1`` variables with
``z0`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dyadic import DyadicCharpoly
from .errors import CapabilityError, InputError, NumericalError
from .linalg import as_cmatrix, matrix_from_dict, matrix_to_dict
from .poly import MultiPoly, canonical_equal

DET_MAX_K = 14
PS_MAX_K = 10
COFACTOR_MAX_K = 10


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """An ordered tuple ``(A1, ..., An)`` of ``k x k`` complex matrices."""

    mats: np.ndarray  # shape (n, k, k)

    def __post_init__(self):
        mats = np.array(self.mats, dtype=complex)
        if mats.ndim != 3 or mats.shape[0] < 1 or mats.shape[1] != mats.shape[2] or mats.shape[1] < 1:
            raise InputError(f"expected n >= 1 square matrices of equal size, got shape {mats.shape}")
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @classmethod
    def of(cls, *mats) -> "MatrixTuple":
        shapes = {as_cmatrix(m).shape for m in mats}
        if len(shapes) != 1:
            raise InputError(f"matrices of unequal shapes {sorted(shapes)}")
        return cls(np.stack([as_cmatrix(m) for m in mats]))

    @property
    def n(self) -> int:
        return self.mats.shape[0]

    @property
    def k(self) -> int:
        return self.mats.shape[1]

    def __iter__(self):
        return iter(self.mats)

    def __getitem__(self, i):
        return self.mats[i]

    def conjugate(self, u) -> "MatrixTuple":
        """``(U A1 U*, ..., U An U*)``."""
        u = as_cmatrix(u)
        return MatrixTuple(u @ self.mats @ u.conj().T)

    def numeric_pencil(self, zprime: Sequence[complex]) -> np.ndarray:
        """``A_*(z') = sum_j z'_j A_j`` as a numeric matrix."""
        if len(zprime) != self.n:
            raise InputError(f"need {self.n} coordinates, got {len(zprime)}")
        return np.tensordot(np.asarray(zprime, dtype=complex), self.mats, axes=1)

    def to_dict(self) -> dict:
        return {"k": self.k, "matrices": [matrix_to_dict(m) for m in self.mats]}

    @classmethod
    def from_dict(cls, data) -> "MatrixTuple":
        try:
            mats = [matrix_from_dict(m) for m in data["matrices"]]
            k = int(data["k"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed tuple JSON: {exc}") from exc
        if not mats:
            raise InputError("tuple file holds no matrices")
        if any(m.shape != (k, k) for m in mats):
            raise InputError(f"all matrices must be {k}x{k}")
        return cls(np.stack(mats))


class PolyMatrix:
    """Square grid of polynomials sharing one arity."""

    def __init__(self, entries: Sequence[Sequence[MultiPoly]]):
        rows = [tuple(r) for r in entries]
        k = len(rows)
        if k == 0 or any(len(r) != k for r in rows):
            raise InputError("PolyMatrix must be square and non-empty")
        nv = {p.nvars for r in rows for p in r}
        if len(nv) != 1:
            raise InputError(f"entries have differing nvars {sorted(nv)}")
        self.entries = tuple(rows)
        self.k = k
        self.nvars = nv.pop()

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def trace(self) -> MultiPoly:
        total = MultiPoly.zero(self.nvars)
        for i in range(self.k):
            total = total + self.entries[i][i]
        return total

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[j][i] for j in range(self.k)] for i in range(self.k)])

    def __repr__(self):
        return f"PolyMatrix(k={self.k}, nvars={self.nvars})"


def build_pencil(t: MatrixTuple, include_z0: bool = True) -> PolyMatrix:
    """Polynomial matrix with entries ``z0*delta_ij + sum_m z_m (A_m)_ij``.

    With ``include_z0=False`` the ``z0`` term is omitted, giving ``A_*(z')``
    (still in ``n + 1`` variables).
    """
    nv = t.n + 1
    rows = []
    for i in range(t.k):
        row = []
        for j in range(t.k):
            coeffs = [1.0 if (i == j and include_z0) else 0.0]
            coeffs += [t.mats[m, i, j] for m in range(t.n)]
            row.append(MultiPoly.linear(coeffs))
        rows.append(row)
    return PolyMatrix(rows)


def _subset_det_levels(rows, k, nvars, stop_level=None):
    """Memoized Laplace expansion along the given rows.

    ``dp[S]`` is the determinant of the submatrix formed by the first
    ``|S|`` of ``rows`` and the columns in bitmask ``S`` (ascending).
    Subsets are processed level by level in increasing bitmask order so the
    summation order is fixed.
    """
    level = {0: MultiPoly.constant(nvars, 1.0)}
    depth = len(rows) if stop_level is None else stop_level
    for r in range(depth):
        row = rows[r]
        nxt: dict = {}
        for mask in sorted(level):
            sub = level[mask]
            if sub.is_zero():
                continue
            for j in range(k):
                bit = 1 << j
                if mask & bit or row[j].is_zero():
                    continue
                # sign of placing column j after the columns of mask that exceed j
                above = bin(mask >> (j + 1)).count("1")
                term = row[j] * sub
                if above & 1:
                    term = -term
                new = mask | bit
                nxt[new] = nxt[new] + term if new in nxt else term
        level = nxt
    return level


def poly_det(pm: PolyMatrix) -> MultiPoly:
    """Determinant of a polynomial matrix by column-subset dynamic programming."""
    full = (1 << pm.k) - 1
    level = _subset_det_levels(pm.entries, pm.k, pm.nvars)
    return level.get(full, MultiPoly.zero(pm.nvars))


def charpoly_det(t: MatrixTuple) -> MultiPoly:
    """``Q_A`` via expansion of ``det(A(z))``; capped at ``k <= 14``."""
    if t.k > DET_MAX_K:
        raise CapabilityError(f"charpoly_det supports k <= {DET_MAX_K}, got {t.k}")
    return poly_det(build_pencil(t))


def power_traces(t: MatrixTuple, max_power: int) -> list:
    """Polynomials ``tr(A_*(z')^j)`` for ``j = 1..max_power`` in ``n + 1`` variables.

    ``A_*(z')^j`` is carried as a map from exponent vectors of ``z'`` to
    numeric matrices, so each power costs one matrix product per term and
    generator.
    """
    n, k = t.n, t.k
    current = {(0,) * n: np.eye(k, dtype=complex)}
    traces = []
    for _ in range(max_power):
        nxt: dict = {}
        for exps in sorted(current):
            m = current[exps]
            for g in range(n):
                e = list(exps)
                e[g] += 1
                e = tuple(e)
                prod = m @ t.mats[g]
                if e in nxt:
                    nxt[e] = nxt[e] + prod
                else:
                    nxt[e] = prod
        current = nxt
        traces.append(MultiPoly(n + 1, {(0,) + e: np.trace(m) for e, m in current.items()}))
    return traces


def newton_elementary(power_sums: Sequence[MultiPoly], nvars: int) -> list:
    """Elementary symmetric functions ``c_0..c_k`` from power sums ``p_1..p_k``.

    Uses ``m c_m = sum_{j=1..m} (-1)^(j-1) p_j c_{m-j}``.
    """
    c = [MultiPoly.constant(nvars, 1.0)]
    for m in range(1, len(power_sums) + 1):
        acc = MultiPoly.zero(nvars)
        for j in range(1, m + 1):
            term = power_sums[j - 1] * c[m - j]
            acc = acc + term if j % 2 == 1 else acc - term
        c.append(acc.scale(1.0 / m))
    return c


def charpoly_ps(t: MatrixTuple) -> MultiPoly:
    """``Q_A`` from trace power sums (Newton's identities); capped at ``k <= 10``."""
    if t.k > PS_MAX_K:
        raise CapabilityError(f"charpoly_ps supports k <= {PS_MAX_K}, got {t.k}")
    nv = t.n + 1
    c = newton_elementary(power_traces(t, t.k), nv)
    z0 = MultiPoly.variable(nv, 0)
    total = MultiPoly.zero(nv)
    for m, cm in enumerate(c):
        total = total + (z0 ** (t.k - m)) * cm
    return total


def plemelj_smithies_coefficient(power_sums: Sequence, m: int, nvars: int | None = None):
    """``c_m`` as ``(1/m!)`` times the determinant of the ``m x m`` trace matrix.

    Row ``i`` (1-based) holds ``p_i, p_{i-1}, ..., p_1`` followed by ``m - i``
    on the superdiagonal. ``power_sums`` may be scalars or polynomials; for
    scalars pass ``nvars=None`` and a complex number is returned.
    """
    if m == 0:
        return 1.0 if nvars is None else MultiPoly.constant(nvars, 1.0)
    if m > len(power_sums):
        raise InputError(f"need {m} power sums, got {len(power_sums)}")
    scalar = nvars is None
    nv = 1 if scalar else nvars

    def lift(x):
        return x if isinstance(x, MultiPoly) else MultiPoly.constant(nv, x)

    rows = []
    for i in range(1, m + 1):
        row = []
        for j in range(1, m + 1):
            if j <= i:
                row.append(lift(power_sums[i - j]))
            elif j == i + 1:
                row.append(lift(float(m - i)))
            else:
                row.append(MultiPoly.zero(nv))
        rows.append(row)
    det = poly_det(PolyMatrix(rows)).scale(1.0 / math.factorial(m))
    if scalar:
        return det.coeff((0,))
    return det


def z0_expansion(q: MultiPoly, k: int) -> list:
    """Coefficients ``q_0..q_k`` of ``Q = sum_m z0^(k-m) q_m`` as polynomials in ``z'``."""
    groups = q.collect(0)
    nv = q.nvars - 1
    out = []
    for m in range(k + 1):
        out.append(groups.get(k - m, MultiPoly.zero(nv)))
    extra = set(groups) - set(range(k + 1))
    if extra:
        raise NumericalError(f"z0 powers {sorted(extra)} exceed k={k}")
    return out


def trace_q1(t: MatrixTuple) -> MultiPoly:
    """``q_1 = sum_j z_j tr A_j`` in the ``n`` variables ``z'``."""
    return MultiPoly.linear([np.trace(a) for a in t.mats])


def trace_q2(t: MatrixTuple) -> MultiPoly:
    """``q_2 = 1/2 sum_{i,j} z_i z_j (tr A_i tr A_j - tr(A_i A_j))``."""
    n = t.n
    tr = [np.trace(a) for a in t.mats]
    terms: dict = {}
    for i in range(n):
        for j in range(n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            e = tuple(e)
            val = 0.5 * (tr[i] * tr[j] - np.trace(t.mats[i] @ t.mats[j]))
            terms[e] = terms.get(e, 0j) + val
    return MultiPoly(n, terms)


def q_coefficients(t: MatrixTuple, tol: float = 1e-9) -> list:
    """``[q_0, ..., q_k]`` of the ``z0``-expansion, each in the ``n`` variables ``z'``.

    ``q_1`` and ``q_2`` are cross-checked against their trace closed forms;
    a disagreement beyond ``tol`` raises :class:`NumericalError`.
    """
    qs = z0_expansion(charpoly_det(t), t.k)
    checks = [(1, trace_q1(t))]
    if t.k >= 2:
        checks.append((2, trace_q2(t)))
    for m, closed in checks:
        if not canonical_equal(qs[m], closed, tol):
            raise NumericalError(f"q_{m} from the determinant disagrees with its trace formula")
    return qs


def cofactor_matrix(t: MatrixTuple) -> PolyMatrix:
    """Cofactor matrix ``C_ij = (-1)^(i+j) det(minor_ij)`` of the pencil ``A(z)``.

    For each row ``i`` one subset expansion over the other rows yields all
    ``k`` minors of that row at once.
    """
    if t.k > COFACTOR_MAX_K:
        raise CapabilityError(f"cofactor_matrix supports k <= {COFACTOR_MAX_K}, got {t.k}")
    pm = build_pencil(t)
    k, nv = pm.k, pm.nvars
    if k == 1:
        return PolyMatrix([[MultiPoly.constant(nv, 1.0)]])
    full = (1 << k) - 1
    cof = [[None] * k for _ in range(k)]
    for i in range(k):
        rows = [pm.entries[r] for r in range(k) if r != i]
        level = _subset_det_levels(rows, k, nv)
        for j in range(k):
            minor = level.get(full & ~(1 << j), MultiPoly.zero(nv))
            cof[i][j] = -minor if (i + j) % 2 else minor
    return PolyMatrix(cof)


def qkm_via_cofactor(t: MatrixTuple, m: int) -> MultiPoly:
    """``q_{k-m} = (1/m!) d^(m-1)/dz0^(m-1) tr C_A(z)`` at ``z0 = 0``, in ``z'``."""
    if not 1 <= m <= t.k - 1:
        raise InputError(f"m must satisfy 1 <= m <= k-1 = {t.k - 1}, got {m}")
    d = cofactor_matrix(t).trace()
    for _ in range(m - 1):
        d = d.partial(0)
    return d.drop_variable(0).scale(1.0 / math.factorial(m))


def durand_kerner(
    coeffs: Sequence[complex],
    max_iter: int = 500,
    tol: float = 1e-10,
    start: Sequence[complex] | None = None,
    residual=None,
) -> np.ndarray:
    """All roots of the polynomial ``sum_i coeffs[i] x^(d-i)``.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients, highest degree first. The leading one must be nonzero.
    max_iter, tol : int, float
        Stop after ``max_iter`` sweeps or once every correction is at most
        ``tol * (1 + max|root|)``. The last iterate is returned either way.
    start : sequence of complex, optional
        Initial approximations. By default they sit on a circle of radius
        ``1 + max|coeff|`` at angles offset by a fixed irrational fraction
        of a turn.
    residual : callable, optional
        Evaluates the monic polynomial at a point. Defaults to Horner on the
        normalized ``coeffs``; pass an exact evaluator to refine clustered
        or repeated roots past the rounding floor of the coefficients.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or c[0] == 0:
        raise InputError("leading coefficient must be nonzero")
    c = c / c[0]
    d = c.size - 1
    if d == 0:
        return np.zeros(0, dtype=complex)
    if start is None:
        radius = 1.0 + float(np.max(np.abs(c[1:])))
        roots = radius * np.exp(2j * np.pi * (np.arange(d) / d + 0.1234567))
    else:
        roots = np.array(start, dtype=complex)
        if roots.shape != (d,):
            raise InputError(f"need {d} starting points, got {roots.shape}")
    for _ in range(max_iter):
        vals = np.polyval(c, roots) if residual is None else np.array([residual(z) for z in roots])
        diff = roots[:, None] - roots[None, :]
        np.fill_diagonal(diff, 1.0)
        den = np.prod(diff, axis=1)
        if not np.all(den):
            break  # two approximations coincide exactly
        step = vals / den
        roots = roots - step
        if np.max(np.abs(step)) <= tol * (1.0 + np.max(np.abs(roots))):
            break
    return roots


RESTRICTION_TOL = 1e-8


def pencil_spectrum(t: MatrixTuple, zprime: Sequence[complex]) -> np.ndarray:
    """Roots in ``z0`` of ``Q_A(z0, z')`` with multiplicity, sorted by (real, imag).

    These are the negatives of the eigenvalues of ``A_*(z')``.

    The univariate restriction is rebuilt exactly from the floating-point
    matrix ``A_*(z')`` (see :mod:`projchar.dyadic`) and checked against
    ``Q_A`` evaluated at ``z'``. Durand-Kerner on the rounded coefficients
    gives starting points, and a second pass with exact residuals refines
    them, so repeated roots come out to near machine precision instead of
    ``eps^(1/m)``. Exactly vanishing trailing coefficients give exact zeros.
    """
    if len(zprime) != t.n:
        raise InputError(f"need {t.n} coordinates, got {len(zprime)}")
    qs = z0_expansion(charpoly_det(t), t.k)
    coeffs = np.array([q.evaluate(zprime) for q in qs], dtype=complex)
    exact = DyadicCharpoly.of_matrix(t.numeric_pencil(zprime))
    gap = float(np.max(np.abs(coeffs - exact.to_complex())))
    if gap > RESTRICTION_TOL * (1.0 + float(np.max(np.abs(coeffs)))):
        raise NumericalError(f"Q_A at z' differs from det(z0 I + A_*(z')) by {gap:.3e}")
    zeros, rest = exact.split_zero_roots()
    rough = durand_kerner(rest.to_complex())
    fine = durand_kerner(rest.to_complex(), tol=1e-15, start=rough, residual=rest.evaluate)
    roots = np.concatenate([fine, np.zeros(zeros, dtype=complex)])
    return roots[np.lexsort((roots.imag, roots.real))]

"""Pairs of orthogonal projections: canonical form, invariants and equivalence.

A pair ``(P, Q)`` splits the space into the four corners ``L∩N``, ``L∩N⊥``,
``L⊥∩N``, ``L⊥∩N⊥`` (``L = ran P``, ``N = ran Q``) and a generic part
``M0 ⊕ M1`` on which the pair is modelled by a positive contraction ``H``
with spectrum in ``(0, 1)``. The corner dimensions together with the
spectrum of ``H`` are a complete unitary invariant, and they determine the
characteristic polynomial in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CapabilityError, ConsistencyError, InputError, NumericalError
from .linalg import as_cmatrix, fro, hermitian_eigen, matrix_to_dict, matrix_from_dict, unitary_residual
from .pencil import MatrixTuple, charpoly_det
from .poly import MultiPoly, canonical_equal, product

PROJ_RTOL = 1e-8
BAND = 1e-7
SPECTRUM_TOL = 1e-6
POLY_TOL = 1e-7
WITNESS_TOL = 1e-7
UNITARY_TOL = 1e-8
CANONICAL_TOL = 1e-6


def check_projection(p, name="p") -> np.ndarray:
    p = as_cmatrix(p)
    if p.shape[0] != p.shape[1]:
        raise InputError(f"{name} must be square, got {p.shape}")
    nrm = fro(p)
    if fro(p @ p - p) > PROJ_RTOL * (1.0 + nrm):
        raise InputError(f"{name} is not idempotent")
    if fro(p - p.conj().T) > PROJ_RTOL:
        raise InputError(f"{name} is not self-adjoint")
    return p


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    """Two orthogonal projections of the same size."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = check_projection(self.p, "p")
        q = check_projection(self.q, "q")
        if p.shape != q.shape:
            raise InputError(f"projections have different sizes {p.shape} and {q.shape}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def k(self) -> int:
        return self.p.shape[0]

    def as_tuple(self) -> MatrixTuple:
        return MatrixTuple.of(self.p, self.q)

    def conjugate(self, u) -> "ProjectionPair":
        u = as_cmatrix(u)
        uh = u.conj().T
        return ProjectionPair(u @ self.p @ uh, u @ self.q @ uh)

    def to_dict(self) -> dict:
        return {"k": self.k, "p": matrix_to_dict(self.p), "q": matrix_to_dict(self.q)}

    @classmethod
    def from_dict(cls, data) -> "ProjectionPair":
        try:
            k = int(data["k"])
            p, q = matrix_from_dict(data["p"]), matrix_from_dict(data["q"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed pair JSON: {exc}") from exc
        if p.shape != (k, k) or q.shape != (k, k):
            raise InputError(f"pair matrices must be {k}x{k}")
        return cls(p, q)


@dataclass(frozen=True)
class HalmosInvariants:
    """Corner dimensions and generic spectrum of a projection pair.

    ``k1..k4`` are the dimensions of ``L⊥∩N⊥``, ``L∩N⊥``, ``L⊥∩N`` and
    ``L∩N``; ``h_spectrum`` lists the eigenvalues of ``H`` ascending.
    """

    k1: int
    k2: int
    k3: int
    k4: int
    h_spectrum: tuple = ()
    near_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        dims = (self.k1, self.k2, self.k3, self.k4)
        if any(d < 0 for d in dims):
            raise InputError(f"negative corner dimension in {dims}")
        h = tuple(sorted(float(x) for x in self.h_spectrum))
        if any(not (0.0 < x < 1.0) for x in h):
            raise InputError("h_spectrum must lie strictly inside (0, 1)")
        object.__setattr__(self, "h_spectrum", h)

    @property
    def m0(self) -> int:
        return len(self.h_spectrum)

    @property
    def k(self) -> int:
        return self.k1 + self.k2 + self.k3 + self.k4 + 2 * self.m0

    @property
    def sigma_IH(self) -> tuple:
        """Spectrum of ``I - H`` listed ascending."""
        return tuple(sorted(1.0 - h for h in self.h_spectrum))

    def corners(self) -> tuple:
        return (self.k1, self.k2, self.k3, self.k4)

    def matches(self, other: "HalmosInvariants", tol: float = SPECTRUM_TOL) -> bool:
        if self.corners() != other.corners() or self.m0 != other.m0:
            return False
        return all(abs(a - b) <= tol for a, b in zip(self.h_spectrum, other.h_spectrum))

    def to_dict(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "k3": self.k3,
            "k4": self.k4,
            "m0": self.m0,
            "h_spectrum": list(self.h_spectrum),
        }


def _near_band_edge(values) -> bool:
    for v in values:
        for edge in (0.0, 1.0):
            d = abs(v - edge)
            if BAND / 10 < d < BAND * 10:
                return True
    return False


def _eigh(a):
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    r = hermitian_eigen(a)
    return r.values, r.vectors


@dataclass
class _Decomposition:
    inv: HalmosInvariants
    ln: np.ndarray
    ln_perp: np.ndarray
    lperp_n: np.ndarray
    lperp_nperp: np.ndarray
    m0: np.ndarray
    m1: np.ndarray


def _decompose(pp: ProjectionPair) -> _Decomposition:
    k = pp.k
    p, q = pp.p, pp.q
    pvals, pvecs = _eigh(p)
    ran_p = pvecs[:, pvals > 0.5]
    ker_p = pvecs[:, pvals <= 0.5]

    # Q compressed to ran P is PQP restricted to L
    cvals, cvecs = _eigh(ran_p.conj().T @ q @ ran_p)
    cvecs = ran_p @ cvecs
    top = cvals >= 1.0 - BAND
    bottom = cvals <= BAND
    mid = ~(top | bottom)
    k4 = int(top.sum())
    k2 = int(bottom.sum())
    h = cvals[mid]
    m0 = h.size

    dvals, dvecs = _eigh(ker_p.conj().T @ q @ ker_p)
    dvecs = ker_p @ dvecs
    d_top = dvals >= 1.0 - BAND
    d_bottom = dvals <= BAND

    rank_p = int(round(float(np.trace(p).real)))
    rank_q = int(round(float(np.trace(q).real)))
    k3 = rank_q - k4 - m0
    k1 = k - rank_p - k3 - m0
    if min(k1, k3) < 0:
        raise NumericalError(f"negative derived dimension (k1={k1}, k3={k3}); input is ill-conditioned")
    if k3 != int(d_top.sum()) or k1 != int(d_bottom.sum()) or ran_p.shape[1] != rank_p:
        raise NumericalError("corner dimensions from traces disagree with the spectral count")

    u = cvecs[:, mid]
    w = (np.eye(k) - p) @ q @ u
    norms = np.linalg.norm(w, axis=0)
    if np.any(norms <= 0):
        raise NumericalError("degenerate generic vector")
    w = w / norms

    near = _near_band_edge(np.concatenate([cvals, dvals]))
    inv = HalmosInvariants(k1, k2, k3, k4, tuple(h), near_degenerate=near)
    return _Decomposition(inv, cvecs[:, top], cvecs[:, bottom], dvecs[:, d_top], dvecs[:, d_bottom], u, w)


def halmos_invariants(pp: ProjectionPair) -> HalmosInvariants:
    """Corner dimensions and the spectrum of ``H`` for a projection pair.

    ``Q`` is compressed to ``ran P`` (the restriction of ``PQP``) and
    eigendecomposed: eigenvalues within ``1e-7`` of ``1`` count ``L∩N``,
    those within ``1e-7`` of ``0`` count ``L∩N⊥``, and the rest form the
    spectrum of ``H``. The remaining corners follow from ``rank Q`` and
    ``rank P`` and are cross-checked against the compression of ``Q`` to
    ``ker P``.
    """
    return _decompose(pp).inv


def model_pair(inv: HalmosInvariants) -> ProjectionPair:
    """The block canonical pair with the given invariants.

    Corner order is ``L∩N, L∩N⊥, L⊥∩N, L⊥∩N⊥``, followed by the generic
    block ``P = diag(I, 0)``, ``Q = [[H, S], [S, I - H]]`` with
    ``S = sqrt(H (I - H))`` and ``H`` diagonal ascending.
    """
    corner_p = [1.0] * inv.k4 + [1.0] * inv.k2 + [0.0] * inv.k3 + [0.0] * inv.k1
    corner_q = [1.0] * inv.k4 + [0.0] * inv.k2 + [1.0] * inv.k3 + [0.0] * inv.k1
    c = len(corner_p)
    m = inv.m0
    k = c + 2 * m
    p = np.zeros((k, k), dtype=complex)
    q = np.zeros((k, k), dtype=complex)
    p[:c, :c] = np.diag(corner_p)
    q[:c, :c] = np.diag(corner_q)
    h = np.array(inv.h_spectrum)
    s = np.sqrt(h * (1.0 - h))
    g0, g1 = slice(c, c + m), slice(c + m, k)
    p[g0, g0] = np.eye(m)
    q[g0, g0] = np.diag(h)
    q[g0, g1] = np.diag(s)
    q[g1, g0] = np.diag(s)
    q[g1, g1] = np.diag(1.0 - h)
    return ProjectionPair(p, q)


def canonical_form(pp: ProjectionPair):
    """Unitary ``U`` with ``U P U*`` and ``U Q U*`` equal to :func:`model_pair`.

    Returns
    -------
    (numpy.ndarray, HalmosInvariants)

    Raises
    ------
    NumericalError
        If the reconstruction residual exceeds ``1e-6``.
    """
    dec = _decompose(pp)
    basis = np.hstack([dec.ln, dec.ln_perp, dec.lperp_n, dec.lperp_nperp, dec.m0, dec.m1])
    u = basis.conj().T
    model = model_pair(dec.inv)
    uh = u.conj().T
    res = max(
        unitary_residual(u),
        fro(u @ pp.p @ uh - model.p),
        fro(u @ pp.q @ uh - model.q),
    )
    if res > CANONICAL_TOL:
        raise NumericalError(f"canonical form residual {res:.3g} exceeds {CANONICAL_TOL}")
    return u, dec.inv


def _linear(c0, c1, c2):
    return MultiPoly.linear([c0, c1, c2])


def generic_quadratic(x: float) -> MultiPoly:
    """``z0^2 + z0 (z1 + z2) + x z1 z2``."""
    return MultiPoly(3, {(2, 0, 0): 1.0, (1, 1, 0): 1.0, (1, 0, 1): 1.0, (0, 1, 1): x})


_LINEAR_FACTORS = (
    ("k1", (1, 0, 0)),
    ("k2", (1, 1, 0)),
    ("k3", (1, 0, 1)),
    ("k4", (1, 1, 1)),
)


@dataclass(frozen=True)
class Factor:
    poly: MultiPoly
    multiplicity: int
    kind: str  # "linear" or "quadratic"
    irreducible: bool
    x: Optional[float] = None


def factorization(inv: HalmosInvariants) -> list:
    """Linear corner factors followed by one quadratic per element of ``sigma(I - H)``.

    A quadratic is flagged irreducible iff ``1e-7 < x < 1 - 1e-7``; at
    ``x = 0`` or ``x = 1`` it splits into linear factors.
    """
    out = []
    for name, coeffs in _LINEAR_FACTORS:
        mult = getattr(inv, name)
        if mult:
            out.append(Factor(_linear(*coeffs), mult, "linear", True))
    for x in inv.sigma_IH:
        out.append(Factor(generic_quadratic(x), 1, "quadratic", BAND < x < 1.0 - BAND, x))
    return out


def cpp_polynomial(inv: HalmosInvariants) -> MultiPoly:
    """Expanded characteristic polynomial of any pair with these invariants."""
    fs = factorization(inv)
    return product((f.poly ** f.multiplicity for f in fs), 3)


def generic_position(pp: ProjectionPair) -> bool:
    """True iff all four corner subspaces are trivial."""
    return halmos_invariants(pp).corners() == (0, 0, 0, 0)


def trace_word_criterion(a: ProjectionPair, b: ProjectionPair) -> bool:
    """Compare ``tr p1``, ``tr p2`` and ``tr (p1 p2)^j`` for ``1 <= j <= k-1``."""
    if a.k != b.k:
        raise InputError("pairs must have equal size")
    k = a.k
    tol = 1e-8 * k
    if abs(np.trace(a.p) - np.trace(b.p)) > tol or abs(np.trace(a.q) - np.trace(b.q)) > tol:
        return False
    pa, pb = a.p @ a.q, b.p @ b.q
    ma, mb = np.eye(k), np.eye(k)
    for _ in range(1, k):
        ma, mb = ma @ pa, mb @ pb
        if abs(np.trace(ma) - np.trace(mb)) > tol:
            return False
    return True


MAX_WORDS = 10**6


def specht_words(a: MatrixTuple, b: MatrixTuple, max_len: int | None = None) -> bool:
    """Compare traces of every word of length ``<= max_len`` in the letters ``A_i, A_i*``.

    Agreement is necessary for unitary equivalence at any length. The
    default length ``2 k^2`` is assumed sufficient for general tuples; it is
    not proven here. Raises :class:`CapabilityError` when ``(2n)^max_len``
    exceeds ``10**6``.
    """
    if a.k != b.k or a.n != b.n:
        raise InputError("tuples must agree in size and length")
    if max_len is None:
        max_len = 2 * a.k**2
    if max_len < 1:
        raise InputError("max_len must be at least 1")
    letters = 2 * a.n
    if letters**max_len > MAX_WORDS:
        raise CapabilityError(f"{letters}^{max_len} words exceeds the limit of {MAX_WORDS}")
    la = np.concatenate([a.mats, a.mats.conj().transpose(0, 2, 1)])
    lb = np.concatenate([b.mats, b.mats.conj().transpose(0, 2, 1)])
    tol = 1e-7 * a.k
    wa = np.eye(a.k, dtype=complex)[None]
    wb = np.eye(b.k, dtype=complex)[None]
    for _ in range(max_len):
        # extend every word by every letter on the right
        wa = np.einsum("wij,ljk->wlik", wa, la).reshape(-1, a.k, a.k)
        wb = np.einsum("wij,ljk->wlik", wb, lb).reshape(-1, b.k, b.k)
        ta = np.trace(wa, axis1=1, axis2=2)
        tb = np.trace(wb, axis1=1, axis2=2)
        if np.max(np.abs(ta - tb)) > tol:
            return False
    return True


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    poly_equal: bool
    trace_words_equal: bool
    witness: Optional[np.ndarray] = None
    witness_residual: Optional[float] = None
    unitary_residual: Optional[float] = None
    invariants: Optional[HalmosInvariants] = None
    invariants_b: Optional[HalmosInvariants] = None
    near_degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "poly_equal": self.poly_equal,
            "trace_words_equal": self.trace_words_equal,
            "witness": None if self.witness is None else matrix_to_dict(self.witness),
            "witness_residual": self.witness_residual,
            "invariants": None if self.invariants is None else self.invariants.to_dict(),
            "invariants_b": None if self.invariants_b is None else self.invariants_b.to_dict(),
            "near_degenerate": self.near_degenerate,
        }


def witness_residual(u, a: ProjectionPair, b: ProjectionPair) -> float:
    """``max_i ||U a_i U* - b_i||_F``."""
    uh = u.conj().T
    return max(fro(u @ a.p @ uh - b.p), fro(u @ a.q @ uh - b.q))


def equivalent_pairs(a: ProjectionPair, b: ProjectionPair) -> EquivalenceVerdict:
    """Decide unitary equivalence of two projection pairs.

    The polynomial criterion and the trace criterion are evaluated
    independently and must agree; otherwise :class:`ConsistencyError` is
    raised. When the pairs are equivalent the witness is
    ``U_b* U_a`` built from the canonical forms of both pairs, which share
    the same model coordinates once the invariants agree.
    """
    if a.k != b.k:
        return EquivalenceVerdict(False, False, False)
    poly_equal = canonical_equal(charpoly_det(a.as_tuple()), charpoly_det(b.as_tuple()), POLY_TOL)
    traces_equal = trace_word_criterion(a, b)
    if poly_equal != traces_equal:
        raise ConsistencyError(
            f"polynomial criterion says {poly_equal} but trace criterion says {traces_equal}"
        )
    ua, inv_a = canonical_form(a)
    ub, inv_b = canonical_form(b)
    near = inv_a.near_degenerate or inv_b.near_degenerate
    verdict = EquivalenceVerdict(
        poly_equal, poly_equal, traces_equal,
        invariants=inv_a, invariants_b=inv_b, near_degenerate=near,
    )
    if not poly_equal:
        return verdict
    if not inv_a.matches(inv_b):
        raise NumericalError("polynomials agree but the canonical invariants do not")
    w = ub.conj().T @ ua
    verdict.witness = w
    verdict.witness_residual = witness_residual(w, a, b)
    verdict.unitary_residual = unitary_residual(w)
    if verdict.witness_residual > WITNESS_TOL or verdict.unitary_residual > UNITARY_TOL:
        raise NumericalError(
            f"witness failed validation (residual {verdict.witness_residual:.3g}, "
            f"unitarity {verdict.unitary_residual:.3g})"
        )
    return verdict


def projection_to_involution(p) -> np.ndarray:
    """``r = 2p - I``."""
    p = check_projection(p)
    return 2.0 * p - np.eye(p.shape[0])


def involution_to_projection(r) -> np.ndarray:
    """``p = (r + I) / 2`` for a self-adjoint involution ``r``."""
    r = as_cmatrix(r)
    if r.shape[0] != r.shape[1]:
        raise InputError("involution must be square")
    eye = np.eye(r.shape[0])
    if fro(r @ r - eye) > 1e-8 or fro(r - r.conj().T) > 1e-8:
        raise InputError("matrix is not a self-adjoint involution")
    return 0.5 * (r + eye)


def rank_symmetry_check(pp: ProjectionPair) -> bool:
    """Whether ``Q_p`` is invariant under swapping ``z1`` and ``z2``.

    When it is, ``p`` and ``q`` have equal rank.
    """
    poly = charpoly_det(pp.as_tuple())
    return canonical_equal(poly, poly.permute([0, 2, 1]), POLY_TOL)


def involution_pairs_equivalent(r1, r2, s1, s2) -> EquivalenceVerdict:
    """Equivalence of involution pairs through their associated projections."""
    a = ProjectionPair(involution_to_projection(r1), involution_to_projection(r2))
    b = ProjectionPair(involution_to_projection(s1), involution_to_projection(s2))
    return equivalent_pairs(a, b)


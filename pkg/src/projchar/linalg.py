"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` complex arrays. The Hermitian eigensolver is a
cyclic Jacobi iteration with a fixed row-major pivot order, so results are
bit-stable for a given input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError

HERMITIAN_RTOL = 1e-8
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100
CLUSTER_TOL = 1e-7


def as_cmatrix(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    if a.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def fro(a) -> float:
    return float(np.linalg.norm(a))


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues and the matching unit eigenvectors (as columns)."""

    values: np.ndarray
    vectors: np.ndarray


def _offdiag_norm(a):
    return fro(a - np.diag(np.diag(a)))


def _jacobi_pair(app, aqq, apq):
    """2x2 unitary that annihilates ``apq`` in ``[[app, apq], [conj(apq), aqq]]``."""
    g = abs(apq)
    phase = apq / g
    tau = (aqq - app) / (2.0 * g)
    sign = 1.0 if tau >= 0 else -1.0
    t = 1.0 / (tau + sign * np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # diag(1, conj(phase)) makes the pivot real; the real rotation then zeroes it
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def hermitian_eigen(a) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like, (k, k)
        Hermitian matrix; ``||a - a*||_F <= 1e-8 (1 + ||a||_F)`` is required.

    Returns
    -------
    EigenResult
        Eigenvalues sorted ascending and an orthonormal eigenvector matrix.
        Eigenvectors belonging to a cluster of eigenvalues closer than
        ``CLUSTER_TOL`` are re-orthonormalized together.

    Raises
    ------
    InputError
        If ``a`` is not square or not Hermitian.
    NumericalError
        If the off-diagonal norm does not drop below tolerance in
        ``MAX_SWEEPS`` sweeps.
    """
    a = as_cmatrix(a)
    k, cols = a.shape
    if k != cols:
        raise InputError(f"matrix must be square, got {a.shape}")
    norm = fro(a)
    if fro(a - a.conj().T) > HERMITIAN_RTOL * (1.0 + norm):
        raise InputError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(k, dtype=complex)
    target = OFFDIAG_TOL * max(1.0, norm)

    for _ in range(MAX_SWEEPS + 1):
        if _offdiag_norm(a) <= target:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                if abs(a[p, q]) < 1e-300:
                    continue
                j = _jacobi_pair(a[p, p].real, a[q, q].real, a[p, q])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[q, p] = 0.0
                a[p, q] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
    else:
        raise NumericalError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")

    values = np.real(np.diag(a)).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]

    start = 0
    for i in range(1, k + 1):
        if i == k or values[i] - values[i - 1] > CLUSTER_TOL:
            if i - start > 1:
                v[:, start:i] = _mgs(v[:, start:i])
            start = i
    return EigenResult(values, v)


def _mgs(vecs, indep_tol=None):
    q = np.array(vecs, dtype=complex)
    for j in range(q.shape[1]):
        for i in range(j):
            q[:, j] -= np.vdot(q[:, i], q[:, j]) * q[:, i]
        nrm = np.linalg.norm(q[:, j])
        if indep_tol is not None and nrm < indep_tol:
            raise InputError(f"column {j} is linearly dependent on the previous columns")
        q[:, j] /= nrm
    return q


def orthonormalize(vecs) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of ``vecs``.

    Columns are normalized first; a column whose residual after projection
    falls below ``1e-8`` raises :class:`InputError` naming its index.
    A second orthogonalization pass keeps the output orthonormal to
    roughly machine precision.
    """
    q = as_cmatrix(vecs)
    norms = np.linalg.norm(q, axis=0)
    for j, nrm in enumerate(norms):
        if nrm == 0:
            raise InputError(f"column {j} is zero")
    q = _mgs(q / norms, indep_tol=1e-8)
    return _mgs(q)


def unitary_residual(u) -> float:
    """``||u* u - I||_F``."""
    u = as_cmatrix(u)
    if u.shape[0] != u.shape[1]:
        raise InputError("unitary_residual needs a square matrix")
    return fro(u.conj().T @ u - np.eye(u.shape[0]))


def matrix_to_dict(a) -> dict:
    a = as_cmatrix(a)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "entries": [[float(x.real), float(x.imag)] for x in a.ravel()],
    }


def matrix_from_dict(data) -> np.ndarray:
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = data["entries"]
        if rows < 1 or cols < 1 or len(entries) != rows * cols:
            raise ValueError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        flat = [complex(float(e[0]), float(e[1])) for e in entries]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    return np.array(flat, dtype=complex).reshape(rows, cols)

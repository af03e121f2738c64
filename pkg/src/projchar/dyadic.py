"""Exact characteristic polynomials of floating-point matrices.

Every finite double is a dyadic rational ``n / 2^e``. A complex matrix is
lifted to Gaussian integers over one common power of two, so its
characteristic polynomial can be formed with integer arithmetic and no
rounding at all. The polynomial is then evaluated exactly at any
floating-point point and rounded once at the end.

Root finders that see rounded coefficients lose accuracy near clustered
or repeated roots (an ``m``-fold root moves by about ``eps^(1/m)``).
Exact residuals remove that noise floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


def gaussian_dyadic(z: complex) -> tuple:
    """``(re, im, e)`` with integers ``re, im`` and ``z == (re + i im) / 2^e``."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"non-finite value {z}")
    (nr, dr), (ni, di) = z.real.as_integer_ratio(), z.imag.as_integer_ratio()
    er, ei = dr.bit_length() - 1, di.bit_length() - 1
    e = max(er, ei)
    return nr << (e - er), ni << (e - ei), e


@dataclass(frozen=True)
class DyadicCharpoly:
    """Monic polynomial ``sum_k a_k 2^(-shift k) x^(d-k)`` with Gaussian-integer ``a_k``.

    Attributes
    ----------
    coeffs : tuple of (int, int)
        ``(re, im)`` of ``a_0 = 1, a_1, ..., a_d``.
    shift : int
        Power of two shared by the matrix entries.
    """

    coeffs: tuple
    shift: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def of_matrix(cls, m) -> "DyadicCharpoly":
        """Exact ``det(x I + M)`` by Faddeev-LeVerrier over the Gaussian integers."""
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"expected a square matrix, got shape {m.shape}")
        n = m.shape[0]
        lifted = [gaussian_dyadic(v) for v in m.ravel()]
        shift = max((e for _, _, e in lifted), default=0)
        # B = -2^shift M, so det(y I - B) = det(y I + 2^shift M)
        br = np.array([-(r << (shift - e)) for r, _, e in lifted], dtype=object).reshape(n, n)
        bi = np.array([-(i << (shift - e)) for _, i, e in lifted], dtype=object).reshape(n, n)
        mr = np.zeros((n, n), dtype=object)
        mi = np.zeros((n, n), dtype=object)
        coeffs = [(1, 0)]
        for k in range(1, n + 1):
            ar, ai = coeffs[-1]
            mr, mi = br.dot(mr) - bi.dot(mi), br.dot(mi) + bi.dot(mr)
            for i in range(n):
                mr[i, i] += ar
                mi[i, i] += ai
            tr = sum(int(br[i].dot(mr[:, i]) - bi[i].dot(mi[:, i])) for i in range(n))
            ti = sum(int(br[i].dot(mi[:, i]) + bi[i].dot(mr[:, i])) for i in range(n))
            # the coefficients of an integer matrix are integers, so k divides exactly
            (qr, rr), (qi, ri) = divmod(-tr, k), divmod(-ti, k)
            assert rr == 0 and ri == 0
            coeffs.append((qr, qi))
        return cls(tuple(coeffs), shift)

    def to_complex(self) -> np.ndarray:
        """Coefficients rounded to complex doubles, highest degree first."""
        out = np.empty(self.degree + 1, dtype=complex)
        for k, (ar, ai) in enumerate(self.coeffs):
            den = 1 << (self.shift * k)
            out[k] = complex(ar / den, ai / den)
        return out

    def split_zero_roots(self) -> tuple:
        """``(count, rest)`` where ``x^count`` divides exactly and ``rest(0) != 0``."""
        c = list(self.coeffs)
        count = 0
        while len(c) > 1 and c[-1] == (0, 0):
            c.pop()
            count += 1
        return count, DyadicCharpoly(tuple(c), self.shift)

    def evaluate(self, z: complex) -> complex:
        """Value at ``z``, exact up to one final rounding."""
        zr, zi, e = gaussian_dyadic(z)
        zr <<= self.shift
        zi <<= self.shift
        # Horner on sum_k a_k (2^shift Z)^(d-k) 2^(e k), which is 2^((shift+e) d) p(z)
        accr, acci = self.coeffs[0]
        for k in range(1, self.degree + 1):
            ar, ai = self.coeffs[k]
            accr, acci = (accr * zr - acci * zi + (ar << (e * k)),
                          accr * zi + acci * zr + (ai << (e * k)))
        den = 1 << ((self.shift + e) * self.degree)
        return complex(accr / den, acci / den)

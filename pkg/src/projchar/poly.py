"""Sparse multivariate polynomials with complex double coefficients.

Variables are indexed ``z0, z1, ..., z_{nvars-1}``. Monomials are exponent
tuples; the canonical order is decreasing graded-lexicographic with ``z0``
the most significant variable, so collecting powers of ``z0`` is a prefix
scan of the sorted term list.

Every arithmetic result is pruned: terms whose modulus is below
``PRUNE_RTOL * (1 + max modulus)`` are dropped.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Mapping, Sequence

from .errors import InputError

PRUNE_RTOL = 1e-12

Monomial = tuple


def _prune(terms: dict) -> dict:
    if not terms:
        return terms
    scale = 1.0 + max(abs(c) for c in terms.values())
    cut = PRUNE_RTOL * scale
    return {e: c for e, c in terms.items() if abs(c) >= cut}


def _order_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables.

    Parameters
    ----------
    nvars : int
        Number of variables.
    terms : mapping of exponent tuple -> complex, optional
        Coefficients. Zero-like terms are pruned on construction.
    """

    __slots__ = ("_nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], complex] | None = None):
        if nvars < 1:
            raise InputError(f"nvars must be positive, got {nvars}")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise InputError(f"monomial {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise InputError(f"negative exponent in {exps}")
            clean[exps] = clean.get(exps, 0j) + complex(c)
        self._nvars = nvars
        self._terms = _prune(clean)

    @classmethod
    def _raw(cls, nvars, terms):
        # terms already validated; only prune
        obj = cls.__new__(cls)
        obj._nvars = nvars
        obj._terms = _prune(terms)
        return obj

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value: complex) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int, coeff: complex = 1.0) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise InputError(f"variable index {index} out of range for nvars={nvars}")
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): coeff})

    @classmethod
    def linear(cls, coeffs: Sequence[complex]) -> "MultiPoly":
        """Linear form ``sum_i coeffs[i] * z_i``."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(n, terms)

    # basic accessors

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (decreasing graded-lex) order."""
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def coeff(self, exps: Sequence[int]) -> complex:
        return self._terms.get(tuple(exps), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def max_modulus(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            return MultiPoly.constant(self._nvars, other)
        if other._nvars != self._nvars:
            raise InputError(f"arity mismatch: {self._nvars} vs {other._nvars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0j) + c
        return MultiPoly._raw(self._nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self._nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, factor: complex) -> "MultiPoly":
        return MultiPoly._raw(self._nvars, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(complex(other))
        other = self._check(other)
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0j) + ca * cb
        return MultiPoly._raw(self._nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise InputError("negative powers are not polynomials")
        result = MultiPoly.constant(self._nvars, 1.0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def partial(self, var_index: int) -> "MultiPoly":
        """Formal partial derivative with respect to ``z_{var_index}``."""
        if not 0 <= var_index < self._nvars:
            raise InputError(f"variable index {var_index} out of range")
        out = {}
        for e, c in self._terms.items():
            d = e[var_index]
            if d:
                ne = list(e)
                ne[var_index] = d - 1
                out[tuple(ne)] = c * d
        return MultiPoly._raw(self._nvars, out)

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Sum of ``coeff * prod(point**exps)`` over the canonical term order."""
        if len(point) != self._nvars:
            raise InputError(f"point has {len(point)} coordinates, expected {self._nvars}")
        pt = [complex(x) for x in point]
        total = 0j
        for e, c in self.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    # variable manipulation

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Rename variables: ``z_i`` becomes ``z_{perm[i]}``."""
        if sorted(perm) != list(range(self._nvars)):
            raise InputError(f"{perm} is not a permutation of {self._nvars} variables")
        out = {}
        for e, c in self._terms.items():
            ne = [0] * self._nvars
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out[tuple(ne)] = c
        return MultiPoly._raw(self._nvars, out)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: replace ``z_i`` by ``images[i]`` (all sharing one arity)."""
        if len(images) != self._nvars:
            raise InputError(f"need {self._nvars} images, got {len(images)}")
        target = images[0].nvars
        if any(im.nvars != target for im in images):
            raise InputError("substitution images must share nvars")
        cache: dict = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = images[i] ** k
            return cache[(i, k)]

        result = MultiPoly.zero(target)
        for e, c in self.items():
            term = MultiPoly.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def drop_variable(self, index: int, value: complex = 0.0) -> "MultiPoly":
        """Set ``z_index = value`` and remove that variable."""
        if self._nvars < 2:
            raise InputError("cannot drop the only variable")
        out: dict = {}
        for e, c in self._terms.items():
            k = e[index]
            if k and value == 0:
                continue
            ne = e[:index] + e[index + 1:]
            out[ne] = out.get(ne, 0j) + c * (value**k if k else 1)
        return MultiPoly._raw(self._nvars - 1, out)

    def insert_variable(self, index: int) -> "MultiPoly":
        """Embed into one more variable, inserted at position ``index``."""
        out = {e[:index] + (0,) + e[index:]: c for e, c in self._terms.items()}
        return MultiPoly._raw(self._nvars + 1, out)

    def collect(self, index: int) -> dict:
        """Split by powers of ``z_index``: ``{power: poly in remaining vars}``."""
        groups: dict = {}
        for e, c in self._terms.items():
            k = e[index]
            groups.setdefault(k, {})[e[:index] + e[index + 1:]] = c
        return {k: MultiPoly._raw(self._nvars - 1, t) for k, t in groups.items()}

    # comparison and serialization

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self._nvars, frozenset(self._terms.items())))

    def __repr__(self):
        return f"MultiPoly({self._nvars}, {format_poly(self)!r})"

    def to_dict(self) -> dict:
        return {
            "nvars": self._nvars,
            "terms": [
                {"exps": list(e), "re": c.real, "im": c.imag} for e, c in self.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MultiPoly":
        try:
            nvars = int(data["nvars"])
            terms: dict = {}
            for t in data["terms"]:
                e = tuple(int(x) for x in t["exps"])
                terms[e] = terms.get(e, 0j) + complex(float(t["re"]), float(t.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed polynomial JSON: {exc}") from exc
        return cls(nvars, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        return cls.from_dict(json.loads(text))


def add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def partial(p: MultiPoly, var_index: int) -> MultiPoly:
    return p.partial(var_index)


def evaluate(p: MultiPoly, point: Sequence[complex]) -> complex:
    return p.evaluate(point)


def canonical_equal(a: MultiPoly, b: MultiPoly, tol: float = 1e-9) -> bool:
    """Coefficientwise comparison relative to the larger coefficient scale.

    True iff every monomial satisfies
    ``|a_e - b_e| <= tol * (1 + max(|a|_max, |b|_max))``.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    if a.nvars != b.nvars:
        raise InputError(f"arity mismatch: {a.nvars} vs {b.nvars}")
    bound = tol * (1.0 + max(a.max_modulus(), b.max_modulus()))
    return max_coeff_diff(a, b) <= bound


def max_coeff_diff(a: MultiPoly, b: MultiPoly) -> float:
    """Largest coefficientwise modulus of ``a - b`` without pruning."""
    if a.nvars != b.nvars:
        raise InputError(f"arity mismatch: {a.nvars} vs {b.nvars}")
    ta, tb = a.terms, b.terms
    return max((abs(ta.get(e, 0j) - tb.get(e, 0j)) for e in set(ta) | set(tb)), default=0.0)


def product(factors: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    result = MultiPoly.constant(nvars, 1.0)
    for f in factors:
        result = result * f
    return result


def _fmt_coeff(c: complex) -> str:
    if abs(c.imag) <= 1e-15 * max(1.0, abs(c.real)):
        r = c.real
        return repr(int(r)) if r == math.floor(r) and abs(r) < 1e15 else f"{r:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}j)"


def format_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    """Human readable rendering, e.g. ``z0^2 + z0*z1 + 0.5*z1*z2``."""
    if p.is_zero():
        return "0"
    names = names or [f"z{i}" for i in range(p.nvars)]
    parts = []
    for e, c in p.items():
        mono = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
        )
        cs = _fmt_coeff(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")

"""Polynomials in real powers of s with exact rational exponents.

A :class:`FracPoly` is a finite sum of terms ``c * s**q`` where ``c`` is a
double-precision real and ``q`` a non-negative rational kept as an exact
:class:`fractions.Fraction`.  Exponent exactness is what makes commensurate
base-order computation and term merging exact; only coefficients round.

Powers use the principal branch throughout: ``s**q = exp(q * Log s)`` with
``arg s`` in ``(-pi, pi]``.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Union

import numpy as np

__all__ = ["Exponent", "as_exponent", "FracPoly", "fracpoly_eval"]

#: Exact rational exponent type (always stored in lowest terms).
Exponent = Fraction

ExponentLike = Union[int, Fraction, str]

# Coefficients below this fraction of the largest magnitude are dropped after
# additive merging; prevents term-count explosion in composite cancellers.
COEFF_DROP_REL = 1e-14

# Node count per chunk in vectorized evaluation, scaled by term count to
# bound the temporary matrix at ~64 MB.
_EVAL_CHUNK_BUDGET = 4_000_000


def _int_power(base: np.ndarray, k: int) -> np.ndarray:
    """``base**k`` for integer ``k >= 0`` by squaring; no exp/log rounding."""
    if k == 0:
        return np.ones_like(base)
    result: np.ndarray | None = None
    square = base
    while True:
        if k & 1:
            result = square if result is None else result * square
        k >>= 1
        if k == 0:
            assert result is not None
            return result
        square = square * square


def _root_powers(root: np.ndarray, ks: tuple[int, ...]) -> np.ndarray:
    """Column matrix of ``root**k`` for strictly ascending integer ``ks``.

    Consecutive powers cost one multiply per column; gaps are bridged by
    binary exponentiation.  Arrays are never mutated in place, so returned
    columns may alias ``root`` safely.
    """
    out = np.empty((root.size, len(ks)), dtype=complex)
    running = _int_power(root, ks[0])
    out[:, 0] = running
    for j in range(1, len(ks)):
        dk = ks[j] - ks[j - 1]
        running = running * (root if dk == 1 else _int_power(root, dk))
        out[:, j] = running
    return out


def as_exponent(q: ExponentLike) -> Fraction:
    """Coerce ``q`` to an exact non-negative rational exponent."""
    if isinstance(q, float):
        raise TypeError(
            "float exponents are ambiguous; pass Fraction, int or 'p/q' string"
        )
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"exponents must be >= 0, got {q}")
    return q


class FracPoly:
    """Finite sum of terms ``c * s**q`` with rational ``q >= 0``.

    Terms are normalized on construction: equal exponents are merged,
    vanishing coefficients are dropped, and the term list is sorted by
    descending exponent.  An empty term list is the zero polynomial.
    Instances are immutable.
    """

    __slots__ = ("_terms", "_eval_plan")

    def __init__(self, terms: Iterable[tuple[float, ExponentLike]] = ()):
        merged: dict[Fraction, float] = {}
        for coeff, q in terms:
            q = as_exponent(q)
            merged[q] = merged.get(q, 0.0) + float(coeff)
        if merged:
            cmax = max(abs(c) for c in merged.values())
            drop = COEFF_DROP_REL * cmax
            merged = {q: c for q, c in merged.items() if c != 0.0 and abs(c) >= drop}
        self._terms: tuple[tuple[float, Fraction], ...] = tuple(
            sorted(((c, q) for q, c in merged.items()), key=lambda t: t[1], reverse=True)
        )
        self._eval_plan: tuple[int, tuple[int, ...], np.ndarray] | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "FracPoly":
        return cls(())

    @classmethod
    def constant(cls, c: float) -> "FracPoly":
        return cls(((c, Fraction(0)),))

    @classmethod
    def one(cls) -> "FracPoly":
        return cls.constant(1.0)

    @classmethod
    def monomial(cls, c: float, q: ExponentLike) -> "FracPoly":
        return cls(((c, q),))

    @classmethod
    def s(cls, q: ExponentLike = 1) -> "FracPoly":
        """The monomial ``s**q``."""
        return cls.monomial(1.0, q)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[float]) -> "FracPoly":
        """Integer-order polynomial from coefficients in descending powers."""
        coeffs = list(coeffs)
        n = len(coeffs)
        if n == 0:
            raise ValueError("coefficient list must be nonempty")
        return cls((c, Fraction(n - 1 - k)) for k, c in enumerate(coeffs))

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[float, Fraction], ...]:
        """Normalized ``(coeff, exponent)`` pairs, descending exponent."""
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> Fraction:
        """Largest exponent.  Raises on the zero polynomial."""
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return self._terms[0][1]

    def exponent_lcm(self) -> int:
        """Least common multiple of all exponent denominators (1 if empty)."""
        return lcm(1, *(q.denominator for _, q in self._terms))

    def is_integer_order(self) -> bool:
        return all(q.denominator == 1 for _, q in self._terms)

    def to_coeffs(self) -> np.ndarray:
        """Descending coefficient array of an integer-order polynomial."""
        if not self.is_integer_order():
            raise ValueError("polynomial has fractional exponents")
        if not self._terms:
            return np.zeros(1)
        deg = int(self._terms[0][1])
        out = np.zeros(deg + 1)
        for c, q in self._terms:
            out[deg - int(q)] = c
        return out

    def to_w_coeffs(self, n_base: int) -> np.ndarray:
        """Descending coefficients in ``w = s**(1/n_base)``.

        Every exponent denominator must divide ``n_base``.
        """
        if not self._terms:
            return np.zeros(1)
        powers = []
        for _, q in self._terms:
            p = q * n_base
            if p.denominator != 1:
                raise ValueError(f"exponent {q} incommensurate with base 1/{n_base}")
            powers.append(int(p))
        deg = max(powers)
        out = np.zeros(deg + 1)
        for (c, _), p in zip(self._terms, powers):
            out[deg - p] = c
        return out

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "FracPoly | float | int") -> "FracPoly":
        if isinstance(other, (int, float)):
            other = FracPoly.constant(float(other))
        if not isinstance(other, FracPoly):
            return NotImplemented
        return FracPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "FracPoly":
        return FracPoly((-c, q) for c, q in self._terms)

    def __sub__(self, other: "FracPoly | float | int") -> "FracPoly":
        if isinstance(other, (int, float)):
            other = FracPoly.constant(float(other))
        if not isinstance(other, FracPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "FracPoly | float | int") -> "FracPoly":
        return (-self) + other

    def __mul__(self, other: "FracPoly | float | int") -> "FracPoly":
        if isinstance(other, (int, float)):
            return FracPoly((c * float(other), q) for c, q in self._terms)
        if not isinstance(other, FracPoly):
            return NotImplemented
        acc: dict[Fraction, float] = {}
        for c1, q1 in self._terms:
            for c2, q2 in other._terms:
                q = q1 + q2
                acc[q] = acc.get(q, 0.0) + c1 * c2
        return FracPoly((c, q) for q, c in acc.items())

    __rmul__ = __mul__

    # -- evaluation ----------------------------------------------------------

    def _power_plan(self) -> tuple[int, tuple[int, ...], np.ndarray]:
        """Common root order N, ascending integer powers, matching coefficients.

        With ``N`` the lcm of the exponent denominators, every term is exactly
        ``c_i * (s**(1/N))**k_i``, so one exponential per evaluation point
        covers all terms; the powers follow by cumulative multiplication.
        """
        if self._eval_plan is None:
            exps = [q for _, q in reversed(self._terms)]
            coeffs = np.array([c for c, _ in reversed(self._terms)], dtype=float)
            base = lcm(*(q.denominator for q in exps)) if exps else 1
            ks = tuple(int(q * base) for q in exps)
            self._eval_plan = (base, ks, coeffs)
        return self._eval_plan

    def eval_many(self, s) -> np.ndarray:
        """Evaluate at an array of complex points (principal branch).

        ``s = 0`` follows ``0**0 = 1`` and ``0**q = 0`` for ``q > 0``.
        Non-finite values propagate to the output without raising.
        """
        s = np.asarray(s, dtype=complex)
        shape = s.shape
        flat = s.reshape(-1)
        out = np.zeros(flat.shape, dtype=complex)
        if not self._terms:
            return out.reshape(shape)
        base, ks, coeffs = self._power_plan()
        # pin arg(s) = pi for the negative real axis regardless of -0.0 imag
        real_mask = flat.imag == 0.0
        if real_mask.any():
            flat = np.where(real_mask, flat.real + 0.0j, flat)
        zero = flat == 0.0
        nz = ~zero
        if zero.any():
            const = [c for c, q in self._terms if q == 0]
            out[zero] = const[0] if const else 0.0
        if nz.any():
            sn = flat[nz]
            vals = np.empty(sn.shape, dtype=complex)
            chunk = max(1, _EVAL_CHUNK_BUDGET // max(1, len(ks)))
            for lo in range(0, sn.size, chunk):
                block = sn[lo:lo + chunk]
                root = block if base == 1 else np.exp(np.log(block) / base)
                vals[lo:lo + chunk] = _root_powers(root, ks) @ coeffs
            out[nz] = vals
        return out.reshape(shape)

    def __call__(self, s: complex) -> complex:
        return complex(self.eval_many(np.asarray(s, dtype=complex).reshape(1))[0])

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FracPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "FracPoly(0)"
        bits = []
        for c, q in self._terms:
            if q == 0:
                bits.append(f"{c:g}")
            elif q == 1:
                bits.append(f"{c:g}*s")
            else:
                bits.append(f"{c:g}*s^({q})")
        return "FracPoly(" + " + ".join(bits) + ")"


def fracpoly_eval(p: FracPoly, s: complex) -> complex:
    """Evaluate ``p`` at a single complex point on the principal branch.

    Raises
    ------
    OverflowError
        If any individual term exceeds the double floating range.
    """
    s = complex(s)
    if s == 0 or not p.terms:
        return p(s)
    value = 0.0 + 0.0j
    logs = np.log(complex(s.real, s.imag) if s.imag != 0 else complex(s.real) + 0j)
    with np.errstate(over="ignore", invalid="ignore"):
        for c, q in p.terms:
            term = c * np.exp(float(q) * logs)
            if not np.isfinite(term):
                raise OverflowError(
                    f"term {c:g}*s^({q}) overflows at s = {s!r}"
                )
            value += term
    return complex(value)

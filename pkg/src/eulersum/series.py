"""Truncated Laurent series over a pluggable coefficient ring.

A series ``sum_{k=base}^{order-1} c_k h^k + O(h^order)`` in a local variable
``h = s - alpha``.  Coefficients may be :class:`fractions.Fraction`,
:class:`~eulersum.symbolic.SymbolicExpression`,
:class:`~eulersum.exact.AlgebraicNumber` or mpmath complex numbers; anything
with ring operations and a usable ``== 0`` test works.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from .symbolic import GAMMA, PsiRoot, SymbolicExpression, gamma, psi, zeta


class TruncationError(ValueError):
    """A requested coefficient lies beyond the known truncation order."""


class LaurentSeries:
    __slots__ = ("base", "coeffs", "order", "zero")

    def __init__(self, base: int, coeffs: Sequence, order: int, zero=Fraction(0)):
        coeffs = list(coeffs[: max(order - base, 0)])
        if len(coeffs) < order - base:
            coeffs += [zero] * (order - base - len(coeffs))
        # strip leading zeros so the stored leading coefficient is nonzero
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead == len(coeffs):
            base, coeffs = order, []
        else:
            base, coeffs = base + lead, coeffs[lead:]
        self.base = base
        self.coeffs = tuple(coeffs)
        self.order = order
        self.zero = zero

    @classmethod
    def from_polynomial(cls, coeffs: Sequence, order: int, zero=Fraction(0)) -> "LaurentSeries":
        return cls(0, list(coeffs), order, zero)

    @classmethod
    def monomial(cls, c, exponent: int, order: int, zero=Fraction(0)) -> "LaurentSeries":
        return cls(exponent, [c], order, zero)

    def __repr__(self):
        terms = ", ".join(f"{c}*h^{self.base + i}" for i, c in enumerate(self.coeffs))
        return f"LaurentSeries([{terms}] + O(h^{self.order}))"

    def __getitem__(self, k: int):
        """Coefficient of ``h^k``."""
        if k >= self.order:
            raise TruncationError(f"coefficient h^{k} unknown at truncation O(h^{self.order})")
        if k < self.base:
            return self.zero
        return self.coeffs[k - self.base]

    coefficient = __getitem__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.base, self.coeffs, self.order) == (other.base, other.coeffs, other.order) or (
            self.is_zero() and other.is_zero() and self.order == other.order
        )

    # -- ring operations ---------------------------------------------------
    def _dense(self, lo: int, hi: int) -> list:
        return [self[k] if k < self.order else self.zero for k in range(lo, hi)]

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries(0, [other], self.order, self.zero)
        order = min(self.order, other.order)
        lo = min(self.base, other.base, order)
        cs = [self[k] + other[k] for k in range(lo, order)]
        return LaurentSeries(lo, cs, order, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.base, [-c for c in self.coeffs], self.order, self.zero)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries(0, [other], self.order, self.zero)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        return LaurentSeries(self.base, [x * c for x in self.coeffs], self.order, self.zero)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``h^k``."""
        return LaurentSeries(self.base + k, self.coeffs, self.order + k, self.zero)

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise TruncationError("cannot extend a truncated series")
        return LaurentSeries(self.base, self.coeffs, order, self.zero)

    def map(self, f: Callable, zero=None) -> "LaurentSeries":
        z = f(self.zero) if zero is None else zero
        return LaurentSeries(self.base, [f(c) for c in self.coeffs], self.order, z)

    def residue(self):
        return self[-1]


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    base = a.base + b.base
    order = min(a.order + b.base, b.order + a.base)
    n = max(order - base, 0)
    zero = a.zero
    out = [zero] * n
    for i, x in enumerate(a.coeffs[:n]):
        for j, y in enumerate(b.coeffs[: n - i]):
            out[i + j] = out[i + j] + x * y
    return LaurentSeries(base, out, order, zero)


def series_recip(a: LaurentSeries) -> LaurentSeries:
    """``1/a``; the stored leading coefficient must be invertible."""
    if a.is_zero():
        raise ZeroDivisionError("reciprocal of a series that vanishes to its truncation order")
    n = a.order - a.base
    c = a.coeffs
    inv0 = 1 / c[0]
    out = [inv0]
    for k in range(1, n):
        acc = a.zero
        for j in range(1, min(k, len(c) - 1) + 1):
            acc = acc + c[j] * out[k - j]
        out.append(-(acc * inv0))
    return LaurentSeries(-a.base, out, n - a.base, a.zero)


def series_diff(a: LaurentSeries) -> LaurentSeries:
    cs = [c * (a.base + i) for i, c in enumerate(a.coeffs)]
    return LaurentSeries(a.base - 1, cs, a.order - 1, a.zero)


# ---------------------------------------------------------------------------
# psi(-s) + gamma expansions

_SZERO = SymbolicExpression()


def psi_series_at(t, order: int) -> LaurentSeries:
    """Taylor series of ``psi(-s) + gamma`` in ``h = s + t`` to ``O(h^order)``.

    ``t`` is a rational (not a nonpositive integer) or the string ``"root"``,
    meaning ``t = -alpha`` for the generic algebraic pole.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    coeffs = []
    for k in range(order):
        if t == "root":
            val = SymbolicExpression.atom(PsiRoot(k))
        else:
            val = psi(k, t)
        if k == 0:
            coeffs.append(val + gamma())
        else:
            coeffs.append(val * Fraction((-1) ** k, math.factorial(k)))
    return LaurentSeries(0, coeffs, order, _SZERO)


def psi_series_at_zero(order: int) -> LaurentSeries:
    """``psi(-s) + gamma = 1/s - sum_{k>=2} zeta(k) s^(k-1)`` to ``O(s^order)``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = [SymbolicExpression.const(1)]
    for e in range(0, order):
        coeffs.append(-zeta(e + 1) if e >= 1 else _SZERO)
    return LaurentSeries(-1, coeffs, order, _SZERO)

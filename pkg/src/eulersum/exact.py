"""Exact univariate polynomial arithmetic over the rationals.

Coefficients are :class:`fractions.Fraction`; polynomials are dense and
immutable.  Besides the ring operations this module provides the pieces the
residue algorithm needs: gcd, square-free factorization (Yun), rational root
extraction, Taylor shifts and arithmetic in ``Q[x]/(q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
NEG_INF = float("-inf")

Number = Union[int, Fraction]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Dense polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls([c])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def linear_root(cls, r: Number) -> "Polynomial":
        """The monic polynomial ``x - r``."""
        return cls([-_frac(r), 1])

    # -- basic properties --------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_text(self, var: str = "k") -> str:
        """Render as text parseable by :mod:`eulersum.rfparse`."""
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- ring operations ---------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lc = 1 / other.lc
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lc
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def scale(self, c: Number) -> "Polynomial":
        c = _frac(c)
        return Polynomial(a * c for a in self.coeffs)

    # -- evaluation and transforms -----------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self.scale(1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` a primitive integer polynomial."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = 0
        for c in self.coeffs:
            num = math.gcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def primitive_integer(self) -> list[int]:
        """Integer coefficients of ``self / content``, sign of lc preserved."""
        c = self.content()
        return [int(a / c) for a in self.coeffs]

    def derivative(self) -> "Polynomial":
        return poly_derivative(self)

    def taylor_shift(self, a: Number) -> "Polynomial":
        """Coefficients of ``self(a + h)`` as a polynomial in ``h``."""
        return Polynomial(taylor_coefficients(self.coeffs, _frac(a)))

    def reversed_coeffs(self, degree: int | None = None) -> list[Fraction]:
        d = self.degree if degree is None else degree
        return [self[d - i] for i in range(d + 1)]


def taylor_coefficients(coeffs: Sequence, a, zero=Fraction(0)) -> list:
    """Taylor coefficients at ``a`` of the polynomial with the given coefficients.

    Works over any commutative ring supporting ``+`` and ``*`` (Horner-style
    synthetic division, repeated).
    """
    work = list(coeffs)
    n = len(work)
    out = []
    for k in range(n):
        # synthetic division of work[k:] by (x - a); remainder is the k-th coefficient
        for i in range(n - 2, k - 1, -1):
            work[i] = work[i] + a * work[i + 1]
        out.append(work[k])
    return out if out else [zero]


# ---------------------------------------------------------------------------
# operations


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial(i * c for i, c in enumerate(p.coeffs) if i > 0)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd; ``gcd(0, 0) == 0``."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = Polynomial([1]), Polynomial()
    t0, t1 = Polynomial(), Polynomial([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


@dataclass(frozen=True)
class SquareFreeFactorization:
    unit: Fraction
    parts: tuple[tuple[Polynomial, int], ...]

    def expand(self) -> Polynomial:
        out = Polynomial([self.unit])
        for f, m in self.parts:
            out = out * f**m
        return out


def squarefree_factor(q: Polynomial) -> SquareFreeFactorization:
    """Yun's algorithm over Q.  Factors are monic; the leading coefficient is the unit."""
    if q.is_zero():
        raise ValueError("square-free factorization of the zero polynomial")
    unit = q.lc
    f = q.monic()
    parts: list[tuple[Polynomial, int]] = []
    if f.degree == 0:
        return SquareFreeFactorization(unit, ())
    df = poly_derivative(f)
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - poly_derivative(b)
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            parts.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - poly_derivative(b)
        i += 1
    return SquareFreeFactorization(unit, tuple(parts))


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [0]
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(q: Polynomial) -> list[tuple[Fraction, int]]:
    """All rational roots of ``q`` with multiplicities, sorted ascending."""
    if q.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    roots: list[tuple[Fraction, int]] = []
    p = q
    m0 = 0
    while p.degree > 0 and p[0] == 0:
        p = Polynomial(p.coeffs[1:])
        m0 += 1
    if m0:
        roots.append((Fraction(0), m0))
    for part, mult in squarefree_factor(p).parts:
        ints = part.primitive_integer()
        a0, an = ints[0], ints[-1]
        # each part is square-free, so every root found has multiplicity `mult`
        remaining = part
        for num in _divisors(a0):
            for den in _divisors(an):
                if remaining.degree < 1:
                    break
                for r in (Fraction(num, den), Fraction(-num, den)):
                    if remaining(r) == 0:
                        roots.append((r, mult))
                        remaining = remaining.exact_div(Polynomial.linear_root(r))
    roots = sorted(set(roots))
    return roots


def power_sums(q: Polynomial, n: int) -> list[Fraction]:
    """Newton power sums ``p_0..p_n`` of the roots of ``q`` (with multiplicity)."""
    m = q.monic()
    d = m.degree
    # e-coefficients: x^d + c_{d-1} x^{d-1} + ... ; Newton: p_k + c_{d-1}p_{k-1} + ... + k c_{d-k} = 0
    c = [m[d - i] for i in range(d + 1)]  # c[0] = 1, c[i] = coeff of x^{d-i}
    p = [Fraction(d)]
    for k in range(1, n + 1):
        s = Fraction(0)
        for i in range(1, min(k, d) + 1):
            if i < k:
                s += c[i] * p[k - i]
            else:
                s += k * c[i]
        p.append(-s)
    return p


# ---------------------------------------------------------------------------
# algebraic extension Q[x]/(q)


class AlgebraicNumber:
    """Element of ``Q[alpha]/(q(alpha))`` for a square-free modulus ``q``.

    ``q`` need not be irreducible; inversion succeeds exactly for elements
    that do not vanish at any root of ``q``.
    """

    __slots__ = ("poly", "modulus")

    def __init__(self, poly: Polynomial, modulus: Polynomial):
        self.modulus = modulus
        self.poly = poly % modulus if poly.degree >= modulus.degree else poly

    @classmethod
    def generator(cls, modulus: Polynomial) -> "AlgebraicNumber":
        return cls(Polynomial.x(), modulus)

    def _lift(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(Polynomial([other]), self.modulus)
        raise TypeError(f"cannot combine AlgebraicNumber with {type(other).__name__}")

    def __add__(self, other):
        return AlgebraicNumber(self.poly + self._lift(other).poly, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return AlgebraicNumber(self.poly - self._lift(other).poly, self.modulus)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return AlgebraicNumber(-self.poly, self.modulus)

    def __mul__(self, other):
        return AlgebraicNumber(self.poly * self._lift(other).poly, self.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        g, s, _ = poly_xgcd(self.poly, self.modulus)
        if g.degree != 0:
            raise ZeroDivisionError("element is not invertible modulo the defining polynomial")
        return AlgebraicNumber(s, self.modulus)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.poly == Polynomial([other])
        if isinstance(other, AlgebraicNumber):
            return self.modulus == other.modulus and self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash((self.poly, self.modulus))

    def __repr__(self):
        return f"AlgebraicNumber({self.poly.to_text('alpha')} mod {self.modulus.to_text('alpha')})"

    def trace(self) -> Fraction:
        """Sum of this element's values over all roots of the modulus."""
        ps = power_sums(self.modulus, max(self.poly.degree, 0))
        return sum((c * ps[i] for i, c in enumerate(self.poly.coeffs)), Fraction(0))

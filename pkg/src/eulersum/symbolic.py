"""Canonical symbolic expressions over the constants appearing in Euler sums.

A :class:`SymbolicExpression` is a polynomial with rational coefficients in
formal atoms: Euler's constant, polygamma values at rational points, zeta
values and root sums over algebraic numbers.  Two expressions compare equal
exactly when their canonical term maps coincide, which makes path-equivalence
checks a plain ``==``.

The same class doubles as the coefficient ring of the series engine; the
internal atoms :class:`Alpha` and :class:`PsiRoot` stand for an algebraic pole
and polygamma values at minus that pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

from .bernoulli import bernoulli_exact

Number = Union[int, Fraction]


# ---------------------------------------------------------------------------
# atoms

_KIND_RANK = {
    "psi": 0,
    "zeta": 1,
    "gamma": 2,
    "pi": 3,
    "log": 4,
    "alpha": 5,
    "psi_root": 6,
    "rootsum": 7,
}


class Atom:
    kind: str = ""

    def sort_key(self) -> tuple:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def __lt__(self, other: "Atom"):
        return self.sort_key() < other.sort_key()


@dataclass(frozen=True, eq=True)
class Gamma(Atom):
    kind = "gamma"

    def sort_key(self):
        return (_KIND_RANK["gamma"],)

    def to_json(self):
        return {"kind": "gamma"}

    def to_text(self):
        return "gamma"


@dataclass(frozen=True, eq=True)
class Psi(Atom):
    """``psi^(order)(arg)`` with ``0 < arg <= 1``."""

    order: int
    arg: Fraction
    kind = "psi"

    def sort_key(self):
        return (_KIND_RANK["psi"], -self.order, self.arg)

    def to_json(self):
        return {"kind": "psi", "order": self.order, "arg": _frac_json(self.arg)}

    def to_text(self):
        return f"psi({self.order},{self.arg})"

    def __hash__(self):
        # Fraction.__hash__ does a modular inverse; this is hot in eval caches
        return hash((self.order, self.arg.numerator, self.arg.denominator))


@dataclass(frozen=True, eq=True)
class Zeta(Atom):
    n: int
    kind = "zeta"

    def sort_key(self):
        return (_KIND_RANK["zeta"], self.n)

    def to_json(self):
        return {"kind": "zeta", "n": self.n}

    def to_text(self):
        return f"zeta({self.n})"


@dataclass(frozen=True, eq=True)
class Pi(Atom):
    kind = "pi"

    def sort_key(self):
        return (_KIND_RANK["pi"],)

    def to_json(self):
        return {"kind": "pi"}

    def to_text(self):
        return "pi"


@dataclass(frozen=True, eq=True)
class Log(Atom):
    n: int
    kind = "log"

    def sort_key(self):
        return (_KIND_RANK["log"], self.n)

    def to_json(self):
        return {"kind": "log", "n": self.n}

    def to_text(self):
        return f"log({self.n})"


@dataclass(frozen=True, eq=True)
class Alpha(Atom):
    """Generic root of the polynomial carried by the enclosing root sum."""

    kind = "alpha"

    def sort_key(self):
        return (_KIND_RANK["alpha"],)

    def to_json(self):
        return {"kind": "alpha"}

    def to_text(self):
        return "alpha"


@dataclass(frozen=True, eq=True)
class PsiRoot(Atom):
    """``psi^(order)(-alpha)``."""

    order: int
    kind = "psi_root"

    def sort_key(self):
        return (_KIND_RANK["psi_root"], -self.order)

    def to_json(self):
        return {"kind": "psi_root", "order": self.order}

    def to_text(self):
        return f"psi({self.order},-alpha)"


@dataclass(frozen=True, eq=True)
class RootSum(Atom):
    """Sum of ``template`` over the roots ``alpha`` of the monic ``poly``."""

    poly: tuple  # Fraction coefficients, lowest degree first, monic
    template: "SymbolicExpression"
    kind = "rootsum"

    def sort_key(self):
        return (_KIND_RANK["rootsum"], len(self.poly), self.poly, self.template.to_text())

    def to_json(self):
        return {
            "kind": "rootsum",
            "poly": [_frac_json(c) for c in self.poly],
            "template": self.template.to_json(),
        }

    def to_text(self):
        from .exact import Polynomial

        return f"RootSum({Polynomial(self.poly).to_text('alpha')}, {self.template.to_text()})"


GAMMA = Gamma()
PI = Pi()
ALPHA = Alpha()


def _frac_json(c: Fraction) -> dict:
    return {"num": c.numerator, "den": c.denominator}


def _frac_from_json(d) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def atom_from_json(d: Mapping) -> Atom:
    kind = d["kind"]
    if kind == "gamma":
        return GAMMA
    if kind == "psi":
        return Psi(int(d["order"]), _frac_from_json(d["arg"]))
    if kind == "zeta":
        return Zeta(int(d["n"]))
    if kind == "pi":
        return PI
    if kind == "log":
        return Log(int(d["n"]))
    if kind == "alpha":
        return ALPHA
    if kind == "psi_root":
        return PsiRoot(int(d["order"]))
    if kind == "rootsum":
        return RootSum(
            tuple(_frac_from_json(c) for c in d["poly"]),
            SymbolicExpression.from_json(d["template"]),
        )
    raise ValueError(f"unknown atom kind {kind!r}")


# ---------------------------------------------------------------------------
# expressions

Monomial = tuple  # tuple[(Atom, int), ...] sorted by atom key


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    powers = dict(a)
    for atom, e in b:
        powers[atom] = powers.get(atom, 0) + e
    return tuple(sorted(powers.items(), key=lambda ae: ae[0].sort_key()))


def _mono_key(m: Monomial) -> tuple:
    return (sum(e for _, e in m), tuple((a.sort_key(), -e) for a, e in m))


class SymbolicExpression:
    """Immutable sparse polynomial in atoms with :class:`Fraction` coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c if isinstance(c, Fraction) else Fraction(c)
        self._terms: dict = clean
        self._hash = None

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, c: Number) -> "SymbolicExpression":
        return cls({(): c})

    @classmethod
    def atom(cls, a: Atom, power: int = 1) -> "SymbolicExpression":
        return cls({((a, power),): 1}) if power else cls.const(1)

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Number, Iterable[Atom]]]) -> "SymbolicExpression":
        out: dict = {}
        for c, atoms in items:
            mono: Monomial = ()
            for a in atoms:
                mono = _mono_mul(mono, ((a, 1),))
            out[mono] = out.get(mono, 0) + Fraction(c)
        return cls(out)

    # -- inspection --------------------------------------------------------
    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]))

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("expression is not a rational constant")
        return self._terms.get((), Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def atoms(self) -> set:
        return {a for m in self._terms for a, _ in m}

    def __eq__(self, other):
        if isinstance(other, SymbolicExpression):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == SymbolicExpression.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"SymbolicExpression({self.to_text()!r})"

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "SymbolicExpression":
        if isinstance(other, SymbolicExpression):
            return other
        if isinstance(other, (int, Fraction)):
            return SymbolicExpression.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return SymbolicExpression(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicExpression({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SymbolicExpression()
            return SymbolicExpression({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return SymbolicExpression(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * (1 / other.constant_value())

    def __rtruediv__(self, other):
        # only rational constants are invertible in this ring
        return SymbolicExpression.const(Fraction(other) / self.constant_value())

    def __pow__(self, n: int):
        out = SymbolicExpression.const(1)
        for _ in range(n):
            out = out * self
        return out

    # -- transformations ---------------------------------------------------
    def substitute(self, rule: Callable[[Atom], "SymbolicExpression | None"]) -> "SymbolicExpression":
        """Replace atoms for which ``rule`` returns an expression."""
        out = SymbolicExpression()
        cache: dict = {}
        for mono, c in self._terms.items():
            term = SymbolicExpression.const(c)
            kept: Monomial = ()
            for a, e in mono:
                if a not in cache:
                    cache[a] = rule(a)
                rep = cache[a]
                if rep is None:
                    kept = _mono_mul(kept, ((a, e),))
                else:
                    term = term * rep**e
            out = out + term * SymbolicExpression({kept: 1})
        return out

    def split_by(self, predicate: Callable[[Atom], bool]) -> dict:
        """Group terms by the sub-monomial of atoms *not* satisfying ``predicate``.

        Returns ``{rest_monomial: {power_of_selected_part: coefficient}}``
        where the selected part is kept as a monomial too.
        """
        groups: dict = {}
        for mono, c in self._terms.items():
            sel = tuple((a, e) for a, e in mono if predicate(a))
            rest = tuple((a, e) for a, e in mono if not predicate(a))
            groups.setdefault(rest, {})
            groups[rest][sel] = groups[rest].get(sel, 0) + c
        return groups

    def common_prefactor(self) -> Fraction:
        """Positive rational ``c`` such that all coefficients divided by ``c`` are coprime integers."""
        if not self._terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for mono, c in self.items():
            atoms = []
            for a, e in mono:
                atoms.extend([a.to_json()] * e)
            terms.append({"coeff": _frac_json(c), "atoms": atoms})
        return {"terms": terms}

    @classmethod
    def from_json(cls, d: Mapping) -> "SymbolicExpression":
        return cls.from_terms(
            (_frac_from_json(t["coeff"]), [atom_from_json(a) for a in t["atoms"]]) for t in d["terms"]
        )

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = []
            for a, e in mono:
                factors.append(a.to_text() + (f"^{e}" if e > 1 else ""))
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = f"{a}*" + "*".join(factors)
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = SymbolicExpression()
ONE = SymbolicExpression.const(1)


def gamma() -> SymbolicExpression:
    return SymbolicExpression.atom(GAMMA)


def zeta(n: int) -> SymbolicExpression:
    if n < 2:
        raise ValueError("zeta(n) atoms need n >= 2")
    return SymbolicExpression.atom(Zeta(n))


def psi(order: int, t: Number) -> SymbolicExpression:
    """``psi^(order)(t)`` with the argument shifted into ``(0, 1]``.

    Uses ``psi^(n)(z+1) = psi^(n)(z) + (-1)^n n! z^(-n-1)``.
    """
    t = Fraction(t)
    if t <= 0 and t.denominator == 1:
        raise ValueError(f"polygamma pole at nonpositive integer {t}")
    if order < 0:
        raise ValueError("negative polygamma order")
    sign_fact = (-1) ** order * math.factorial(order)
    corr = Fraction(0)
    while t > 1:
        t -= 1
        corr += sign_fact / t ** (order + 1)
    while t <= 0:
        corr -= sign_fact / t ** (order + 1)
        t += 1
    return SymbolicExpression.atom(Psi(order, t)) + corr


# ---------------------------------------------------------------------------
# special values

_LN2 = SymbolicExpression.atom(Log(2))
_PIX = SymbolicExpression.atom(PI)

SPECIAL_VALUES: dict = {
    Psi(0, Fraction(1, 2)): -gamma() - 2 * _LN2,
    Psi(0, Fraction(1, 4)): -gamma() - 3 * _LN2 - _PIX / 2,
    Psi(1, Fraction(1)): _PIX**2 / 6,
    Psi(1, Fraction(1, 2)): _PIX**2 / 2,
    Psi(2, Fraction(1)): -2 * zeta(3),
    Psi(2, Fraction(1, 2)): -14 * zeta(3),
    Psi(2, Fraction(1, 4)): -2 * _PIX**3 - 56 * zeta(3),
    Psi(3, Fraction(1, 2)): _PIX**4,
    Psi(0, Fraction(1)): -gamma(),
}


def even_zeta_in_pi(n: int) -> SymbolicExpression:
    """``zeta(n)`` for even ``n`` as a rational multiple of ``pi^n``."""
    b = bernoulli_exact(n)
    c = abs(b) * Fraction(2) ** (n - 1) / math.factorial(n)
    return c * _PIX**n


def simplify_special_values(e: SymbolicExpression, even_zeta: bool = False) -> SymbolicExpression:
    """Rewrite the tabulated polygamma values (and optionally even zeta values)."""

    def rule(a: Atom):
        if a in SPECIAL_VALUES:
            return SPECIAL_VALUES[a]
        if even_zeta and isinstance(a, Zeta) and a.n % 2 == 0:
            return even_zeta_in_pi(a.n)
        return None

    return e.substitute(rule)


def reduce_psi_to_zeta(e: SymbolicExpression, even_zeta: bool = False) -> SymbolicExpression:
    """Rewrite every ``psi(n, 1)`` and ``psi(n, 1/2)`` through zeta values.

    Uses ``psi(n, 1) = (-1)^(n+1) n! zeta(n+1)`` and
    ``psi(n, 1/2) = (2^(n+1) - 1) psi(n, 1)`` for ``n >= 1``.
    """

    def rule(a: Atom):
        if isinstance(a, Psi) and a.arg in (1, Fraction(1, 2)):
            if a.order == 0:
                return SPECIAL_VALUES[a]
            val = zeta(a.order + 1) * ((-1) ** (a.order + 1) * math.factorial(a.order))
            if even_zeta and (a.order + 1) % 2 == 0:
                val = even_zeta_in_pi(a.order + 1) * ((-1) ** (a.order + 1) * math.factorial(a.order))
            return val if a.arg == 1 else val * (2 ** (a.order + 1) - 1)
        if even_zeta and isinstance(a, Zeta) and a.n % 2 == 0:
            return even_zeta_in_pi(a.n)
        return None

    return e.substitute(rule)

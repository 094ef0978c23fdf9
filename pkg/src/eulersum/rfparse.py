"""Parsing of one-variable rational functions and summability checks.

Grammar (loosest to tightest binding)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary | juxtaposed)*
    unary   := ("-" | "+") unary | power
    power   := primary ("^" exponent)?
    exponent:= ["-"] INT ("^" exponent)? | "(" ["-"] INT ")"
    primary := INT | VAR | "(" expr ")"

Juxtaposition (``2k``, ``(k+1)(k+2)``, ``3(k+1)``) multiplies at the same
level as ``*``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import Polynomial, poly_derivative, poly_gcd, rational_roots


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class SummabilityError(ValueError):
    pass


class NotConvergentError(SummabilityError):
    def __init__(self, detail: str = ""):
        super().__init__("sum not convergent" + (f": {detail}" if detail else ""))


class InfiniteSummandError(SummabilityError):
    def __init__(self, detail: str = ""):
        super().__init__("infinite summand" + (f": {detail}" if detail else ""))


class RationalFunction:
    """Reduced ``P/Q`` with ``Q`` a primitive integer polynomial, ``lc(Q) > 0``."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Polynomial, denominator: Polynomial = Polynomial([1])):
        if denominator.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if numerator.is_zero():
            self.numerator, self.denominator = Polynomial(), Polynomial([1])
            return
        g = poly_gcd(numerator, denominator)
        if g.degree > 0:
            numerator = numerator.exact_div(g)
            denominator = denominator.exact_div(g)
        c = denominator.content()
        if denominator.lc < 0:
            c = -c
        self.numerator = numerator.scale(1 / c)
        self.denominator = denominator.scale(1 / c)

    @property
    def P(self) -> Polynomial:
        return self.numerator

    @property
    def Q(self) -> Polynomial:
        return self.denominator

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)

    def __add__(self, other: "RationalFunction"):
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __sub__(self, other: "RationalFunction"):
        return self + RationalFunction(-other.numerator, other.denominator)

    def __mul__(self, other: "RationalFunction"):
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def derivative(self) -> "RationalFunction":
        p, q = self.numerator, self.denominator
        return RationalFunction(poly_derivative(p) * q - p * poly_derivative(q), q * q)

    def to_text(self, var: str = "k") -> str:
        num = self.numerator.to_text(var)
        if self.denominator == Polynomial([1]):
            return num
        if " " in num:
            num = f"({num})"
        return f"{num}/({self.denominator.to_text(var)})"


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "var", "op", "end"
    text: str
    col: int  # 1-based


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            toks.append(_Tok("var", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch.isspace():
                break
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3) + 1)
            toks.append(_Tok("op", ch, m.start(3) + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, variable: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.variable = variable

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.take()
        if tok.text != text or tok.kind != "op":
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.col)
        return tok

    # values are (numerator, denominator) pairs, reduced lazily
    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.col)
        return value

    def expr(self):
        num, den = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            n2, d2 = self.term()
            if op == "-":
                n2 = -n2
            num, den = num * d2 + n2 * den, den * d2
        return num, den

    def term(self):
        num, den = self.unary()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "*/":
                self.take()
                n2, d2 = self.unary()
                if tok.text == "*":
                    num, den = num * n2, den * d2
                else:
                    if n2.is_zero():
                        raise ParseError("division by the zero polynomial", tok.col)
                    num, den = num * d2, den * n2
            elif tok.kind == "var" or (tok.kind == "op" and tok.text == "("):
                n2, d2 = self.power()
                num, den = num * n2, den * d2
            else:
                return _reduce(num, den)

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            num, den = self.unary()
            return (-num, den) if tok.text == "-" else (num, den)
        return self.power()

    def power(self):
        base = self.primary()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.take()
            exp = self.exponent()
            num, den = base
            if exp < 0:
                if num.is_zero():
                    raise ParseError("division by the zero polynomial", tok.col)
                num, den, exp = den, num, -exp
            return num**exp, den**exp
        return base

    def exponent(self) -> int:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "(":
            self.take()
            value = self.exponent()
            self.expect(")")
            return value
        sign = 1
        if tok.kind == "op" and tok.text == "-":
            self.take()
            sign = -1
            tok = self.peek()
        if tok.kind != "int":
            raise ParseError("exponent must be an integer literal", tok.col)
        self.take()
        value = int(tok.text)
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "^":
            self.take()
            e = self.exponent()
            if e < 0:
                raise ParseError("negative exponent inside an exponent", nxt.col)
            value = value**e
        return sign * value

    def primary(self):
        tok = self.take()
        if tok.kind == "int":
            return Polynomial([int(tok.text)]), Polynomial([1])
        if tok.kind == "var":
            if tok.text != self.variable:
                raise ParseError(f"unknown symbol {tok.text!r} (variable is {self.variable!r})", tok.col)
            return Polynomial.x(), Polynomial([1])
        if tok.kind == "op" and tok.text == "(":
            value = self.expr()
            self.expect(")")
            return value
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {found}", tok.col)


def _reduce(num: Polynomial, den: Polynomial):
    if num.is_zero():
        return num, Polynomial([1])
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num.exact_div(g), den.exact_div(g)
    return num, den


def parse_ratfunc(text: str, variable: str = "k") -> RationalFunction:
    """Parse ``text`` into a reduced :class:`RationalFunction`."""
    num, den = _Parser(text, variable).parse()
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# summability


@dataclass(frozen=True)
class SummabilityReport:
    degree_gap: float  # inf for the zero function
    offending_positive_integer_pole: Optional[Fraction]
    has_pole_at_zero: bool

    @property
    def convergent(self) -> bool:
        return self.degree_gap >= 2

    @property
    def summable(self) -> bool:
        return self.convergent and self.offending_positive_integer_pole is None


def check_summable(R: RationalFunction) -> SummabilityReport:
    P, Q = R.numerator, R.denominator
    gap = float("inf") if P.is_zero() else Q.degree - P.degree
    bad = None
    if Q.degree > 0:
        for r, _ in rational_roots(Q):
            if r.denominator == 1 and r > 0:
                bad = r
                break
    return SummabilityReport(gap, bad, Q.degree > 0 and Q[0] == 0)


def require_summable(R: RationalFunction) -> SummabilityReport:
    """Raise the matching guard error unless ``sum R(k) H_k`` makes sense."""
    rep = check_summable(R)
    if not rep.convergent:
        raise NotConvergentError(f"deg Q - deg P = {rep.degree_gap} < 2")
    if rep.offending_positive_integer_pole is not None:
        raise InfiniteSummandError(f"pole at k = {rep.offending_positive_integer_pole}")
    return rep

"""Closed forms of ``sum_{k>=1} R(k) H_k`` by residues of psi-weighted kernels.

The sum equals one half of the sum, over the poles ``alpha`` of ``R``, of the
residue of ``R'(s)(psi(-s)+gamma) - R(s)(psi(-s)+gamma)^2`` at ``alpha``.
:func:`closed_form` runs this over a square-free factorization of the
denominator: rational poles give polygamma atoms at rational points, the pole
at zero gives zeta atoms, and rational-root-free blocks are handled in
``Q[alpha]/(q)`` and returned as root sums.

The structured fast paths (:func:`T_func`, :func:`closed_form_via_theorem3`,
:func:`corollary1`, :func:`corollary2`) build the same expressions from the
partial fraction decomposition and must agree with :func:`closed_form` term
for term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import AlgebraicNumber, Polynomial, rational_roots, squarefree_factor, taylor_coefficients
from .rfparse import RationalFunction, require_summable
from .series import (
    LaurentSeries,
    psi_series_at,
    psi_series_at_zero,
    series_diff,
    series_recip,
)
from .symbolic import (
    ALPHA,
    GAMMA,
    Alpha,
    Psi,
    PsiRoot,
    RootSum,
    SymbolicExpression,
    gamma,
    psi,
)

_AZERO = Fraction(0)
_SZERO = SymbolicExpression()


@dataclass(frozen=True)
class AlgebraicPole:
    """All roots of the monic, square-free, rational-root-free ``q``."""

    q: Polynomial


@dataclass(frozen=True)
class PFDTerm:
    """``coefficient / (k + t)^power`` for a rational pole ``-t``, or
    ``sum_alpha coefficient(alpha) / (k - alpha)^power`` for an algebraic block."""

    pole: Union[Fraction, AlgebraicPole]
    power: int
    coefficient: Union[Fraction, AlgebraicNumber]


@dataclass(frozen=True)
class PartialFractionDecomposition:
    terms: tuple

    def recombine(self) -> RationalFunction:
        total = RationalFunction(Polynomial())
        for term in self.terms:
            if isinstance(term.pole, AlgebraicPole):
                total = total + _algebraic_term_as_ratfunc(term)
            else:
                denom = Polynomial([term.pole, 1]) ** term.power
                total = total + RationalFunction(Polynomial([term.coefficient]), denom)
        return total

    def simple_coefficient_sum(self) -> Fraction:
        """Sum of the ``1/(k+t)`` coefficients over all poles (conjugates included)."""
        s = Fraction(0)
        for term in self.terms:
            if term.power != 1:
                continue
            s += term.coefficient.trace() if isinstance(term.pole, AlgebraicPole) else term.coefficient
        return s


@dataclass
class ClosedForm:
    expression: SymbolicExpression
    provenance: dict
    numeric_value: Optional[object] = None

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("closed form without provenance")


# ---------------------------------------------------------------------------
# pole bookkeeping


@dataclass(frozen=True)
class _Block:
    multiplicity: int
    root: Optional[Fraction] = None  # rational pole
    q: Optional[Polynomial] = None  # algebraic block (monic)


def _pole_blocks(Q: Polynomial) -> list[_Block]:
    blocks: list[_Block] = []
    if Q.degree < 1:
        return blocks
    for part, mult in squarefree_factor(Q).parts:
        rest = part
        for r, _ in rational_roots(part):
            blocks.append(_Block(mult, root=r))
            rest = rest.exact_div(Polynomial.linear_root(r))
        if rest.degree >= 1:
            blocks.append(_Block(mult, q=rest.monic()))
    return blocks


def _taylor_series(poly_coeffs, at, order: int, zero) -> LaurentSeries:
    cs = taylor_coefficients(list(poly_coeffs) or [zero], at, zero)
    return LaurentSeries(0, cs, order, zero)


def laurent_at_rational(R: RationalFunction, alpha: Fraction, order: int = 2) -> LaurentSeries:
    """Laurent series of ``R`` at ``s = alpha`` to ``O((s-alpha)^order)``."""
    P, Q = R.numerator, R.denominator
    e = 0
    lin = Polynomial.linear_root(alpha)
    Qt = Q
    while Qt.degree > 0:
        quo, rem = Qt.divmod(lin)
        if not rem.is_zero():
            break
        Qt, e = quo, e + 1
    n = order + e
    num = _taylor_series(P.coeffs, alpha, n, _AZERO)
    den = _taylor_series(Qt.coeffs, alpha, n, _AZERO)
    return (num * series_recip(den)).shift(-e)


def _qq_coeffs(q: Polynomial, a: AlgebraicNumber) -> list:
    """Coefficients in ``s`` of ``(q(s) - q(alpha)) / (s - alpha)``."""
    d = q.degree
    out = []
    for j in range(d):
        c = AlgebraicNumber(Polynomial(), q)
        apow = AlgebraicNumber(Polynomial([1]), q)
        for i in range(j + 1, d + 1):
            c = c + apow * q[i]
            apow = apow * a
        out.append(c)
    return out


def laurent_at_algebraic(R: RationalFunction, q: Polynomial, e: int, order: int = 2) -> LaurentSeries:
    """Laurent series of ``R`` at a generic root of ``q`` (multiplicity ``e``), over ``Q[alpha]/(q)``."""
    P, Q = R.numerator, R.denominator
    a = AlgebraicNumber.generator(q)
    zero = AlgebraicNumber(Polynomial(), q)
    rest = Q.exact_div(q**e)
    n = order + e
    lift = lambda cs: [AlgebraicNumber(Polynomial([c]), q) for c in cs]  # noqa: E731
    num = _taylor_series(lift(P.coeffs), a, n, zero)
    den = _taylor_series(lift(rest.coeffs), a, n, zero)
    qq = _taylor_series(_qq_coeffs(q, a), a, n, zero)
    for _ in range(e):
        den = den * qq
    return (num * series_recip(den)).shift(-e)


def _alg_to_sym(x: AlgebraicNumber) -> SymbolicExpression:
    return SymbolicExpression({((ALPHA, i),) if i else (): c for i, c in enumerate(x.poly.coeffs)})


def reduce_alpha(e: SymbolicExpression, q: Polynomial) -> SymbolicExpression:
    """Reduce powers of the algebraic generator modulo ``q``."""
    out: dict = {}
    for rest, sel in e.split_by(lambda a: isinstance(a, Alpha)).items():
        coeffs: dict = {}
        for amono, c in sel.items():
            power = amono[0][1] if amono else 0
            coeffs[power] = coeffs.get(power, 0) + c
        top = max(coeffs)
        poly = Polynomial([coeffs.get(i, 0) for i in range(top + 1)]) % q
        for i, c in enumerate(poly.coeffs):
            if c:
                mono = tuple(sorted(rest + (((ALPHA, i),) if i else ()), key=lambda ae: ae[0].sort_key()))
                out[mono] = out.get(mono, 0) + c
    return SymbolicExpression(out)


def _kernel_residue(Rser: LaurentSeries, E: LaurentSeries) -> SymbolicExpression:
    S = series_diff(Rser) * E - Rser * E * E
    return S[-1] / 2


def pole_contribution(R: RationalFunction, alpha: Fraction) -> SymbolicExpression:
    """Half the residue of the kernel at the rational point ``alpha``.

    Zero whenever ``R`` is analytic at ``alpha`` (including ``alpha = 0``).
    """
    alpha = Fraction(alpha)
    Rser = laurent_at_rational(R, alpha, 2).map(SymbolicExpression.const, _SZERO)
    e = max(-Rser.base, 0) if not Rser.is_zero() else 0
    if alpha == 0:
        E = psi_series_at_zero(e + 2)
    else:
        E = psi_series_at(-alpha, e + 2)
    return _kernel_residue(Rser, E)


def algebraic_block_contribution(R: RationalFunction, q: Polynomial, e: int) -> SymbolicExpression:
    """Contribution of all roots of ``q``: rational traces plus one :class:`RootSum`."""
    Rser = laurent_at_algebraic(R, q, e, 2).map(_alg_to_sym, _SZERO)
    E = psi_series_at("root", e + 2)
    res = reduce_alpha(_kernel_residue(Rser, E), q)
    rational_part: dict = {}
    template: dict = {}
    for rest, sel in res.split_by(lambda a: isinstance(a, Alpha)).items():
        if any(isinstance(a, PsiRoot) for a, _ in rest):
            for amono, c in sel.items():
                mono = tuple(sorted(rest + amono, key=lambda ae: ae[0].sort_key()))
                template[mono] = template.get(mono, 0) + c
        else:
            poly = Polynomial([0] * 0)
            for amono, c in sel.items():
                power = amono[0][1] if amono else 0
                poly = poly + Polynomial([0] * power + [c])
            tr = AlgebraicNumber(poly, q).trace()
            rational_part[rest] = rational_part.get(rest, 0) + tr
    out = SymbolicExpression(rational_part)
    tmpl = SymbolicExpression(template)
    if not tmpl.is_zero():
        out = out + SymbolicExpression.atom(RootSum(q.monic().coeffs, tmpl))
    return out


# ---------------------------------------------------------------------------
# public operations


def partial_fractions(R: RationalFunction) -> PartialFractionDecomposition:
    require_summable(R)
    terms = []
    for b in _pole_blocks(R.denominator):
        if b.root is not None:
            ser = laurent_at_rational(R, b.root, 0)
            for i in range(b.multiplicity, 0, -1):
                c = ser[-i]
                if c:
                    terms.append(PFDTerm(-b.root, i, c))
        else:
            ser = laurent_at_algebraic(R, b.q, b.multiplicity, 0)
            for i in range(b.multiplicity, 0, -1):
                c = ser[-i]
                if not c == 0:
                    terms.append(PFDTerm(AlgebraicPole(b.q), i, c))
    return PartialFractionDecomposition(tuple(terms))


def _algebraic_term_as_ratfunc(term: PFDTerm) -> RationalFunction:
    q = term.pole.q
    a = AlgebraicNumber.generator(q)
    qq = _qq_coeffs(q, a)
    # sum_alpha c(alpha) qq_alpha(k)^i / q(k)^i
    num = [term.coefficient]
    for _ in range(term.power):
        prod = [AlgebraicNumber(Polynomial(), q)] * (len(num) + len(qq) - 1)
        for i, x in enumerate(num):
            for j, y in enumerate(qq):
                prod[i + j] = prod[i + j] + x * y
        num = prod
    poly = Polynomial([c.trace() for c in num])
    return RationalFunction(poly, q**term.power)


def closed_form(R: RationalFunction) -> ClosedForm:
    """Exact closed form of ``sum_{k>=1} R(k) H_k`` via residues."""
    require_summable(R)
    total = _SZERO
    poles = []
    for b in _pole_blocks(R.denominator):
        if b.root is not None:
            total = total + pole_contribution(R, b.root)
            poles.append({"pole": str(b.root), "multiplicity": b.multiplicity})
        else:
            total = total + algebraic_block_contribution(R, b.q, b.multiplicity)
            poles.append({"factor": b.q.to_text(), "multiplicity": b.multiplicity})
    return ClosedForm(total, {"path": "residue", "input": R.to_text(), "poles": poles})


def T_func(t, p: int) -> SymbolicExpression:
    """``sum_{k>=1} H_k/(k+t)^p`` for ``p >= 2`` (and the ``p = 1`` building block)."""
    t = Fraction(t)
    if p < 1:
        raise ValueError("T(t, p) needs p >= 1")
    if t <= 0 and t.denominator == 1:
        raise ValueError(f"T(t, p) undefined at nonpositive integer t = {t}")
    scale = Fraction((-1) ** (p - 1), 2 * math.factorial(p - 1))
    if 0 < t <= 1:
        # every psi is a bare atom, so the terms can be written down directly
        items = [(scale, [Psi(p, t)]), (-2 * scale, [GAMMA, Psi(p - 1, t)])]
        items += [(-math.comb(p - 1, k) * scale, [Psi(k, t), Psi(p - 1 - k, t)]) for k in range(p)]
        return SymbolicExpression.from_terms(items)
    inner = psi(p, t) - 2 * gamma() * psi(p - 1, t)
    for k in range(p):
        inner = inner - math.comb(p - 1, k) * psi(k, t) * psi(p - 1 - k, t)
    return inner * scale


def closed_form_via_theorem3(R: RationalFunction) -> ClosedForm:
    """``sum_{i,j} C_{ij} T(t_j, i)`` over the partial fraction decomposition."""
    pfd = partial_fractions(R)
    total = _SZERO
    for term in pfd.terms:
        if isinstance(term.pole, AlgebraicPole):
            raise ValueError("closed_form_via_theorem3 needs rational poles only")
        if term.pole <= 0 and term.pole.denominator == 1:
            raise ValueError(f"pole at nonnegative integer {-term.pole} is outside the T(t, p) formula")
        total = total + term.coefficient * T_func(term.pole, term.power)
    return ClosedForm(total, {"path": "partial-fractions", "input": R.to_text(), "terms": len(pfd.terms)})


def _check_mn(m: int, n: int):
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive integers")
    if math.gcd(m, n) != 1:
        raise ValueError("gcd(m, n) must be 1")


def corollary1(m: int, n: int, p: int) -> ClosedForm:
    """``sum H_k/(mk+n)^p = T(n/m, p) / m^p``."""
    _check_mn(m, n)
    if p < 2:
        raise ValueError("p must be at least 2")
    expr = T_func(Fraction(n, m), p) * Fraction(1, m**p)
    return ClosedForm(expr, {"path": "single-linear-power", "m": m, "n": n, "p": p})


def corollary2(m: int, n: int, p: int, q: int) -> ClosedForm:
    """``sum k^q H_k/(mk+n)^p`` from the binomial expansion of ``k = (k + n/m) - n/m``."""
    _check_mn(m, n)
    if q < 1 or p < q + 2:
        raise ValueError("need q >= 1 and p >= q + 2")
    t = Fraction(n, m)
    total = _SZERO
    for j in range(q + 1):
        total = total + (-1) ** j * math.comb(q, j) * t**j * T_func(t, p - q + j)
    expr = total * Fraction(1, m**p)
    return ClosedForm(expr, {"path": "power-numerator", "m": m, "n": n, "p": p, "q": q})


def closed_form_fast(R: RationalFunction) -> ClosedForm:
    """Use the single-linear-power formulas when ``R = c k^q/(mk+n)^p``.

    Falls back to :func:`closed_form`; both give canonically equal output.
    """
    P, Q = R.numerator, R.denominator
    d = Q.degree
    # the shape itself guarantees summability: the only pole -t is negative
    if d >= 2 and not P.is_zero() and d - P.degree >= 2 and all(c == 0 for c in P.coeffs[:-1]):
        t = Q[d - 1] / (d * Q[d])
        if t > 0 and all(Q[i] == Q[d] * math.comb(d, i) * t ** (d - i) for i in range(d - 1)):
            m, n, q = t.denominator, t.numerator, P.degree
            scale = P.lc * m**d / Q[d]
            cf = corollary1(m, n, d) if q == 0 else corollary2(m, n, d, q)
            return ClosedForm(cf.expression * scale, dict(cf.provenance, scale=str(scale), input=R.to_text()))
    return closed_form(R)

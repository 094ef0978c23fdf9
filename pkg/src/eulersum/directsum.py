"""Direct high-precision evaluation of ``sum_{k>=1} R(k) H_k``.

The first ``N`` terms are summed explicitly in fixed-point integer
arithmetic (running ``H_k``).  The tail uses the large-``x`` expansion

    R(x) (psi(x+1) + gamma) ~ sum_m (a_m + b_m ln x) x^-m,

whose coefficients come from the ``1/x`` series of ``R`` and the asymptotic
series of ``psi``, and each ``(a_m + b_m ln x) x^-m`` is summed over
``k > N`` by Euler-Maclaurin with exact antiderivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from .bernoulli import even_bernoulli
from .exact import Polynomial, squarefree_factor
from .numerics import digits_to_bits, euler_gamma_hp, find_roots_hp
from .rfparse import RationalFunction, require_summable
from .series import LaurentSeries, series_recip


class TailOrderError(ValueError):
    def __init__(self, message: str, suggested_terms: int):
        super().__init__(f"{message}; try terms >= {suggested_terms}")
        self.suggested_terms = suggested_terms


@dataclass(frozen=True)
class DirectSumConfig:
    digits: int = 100
    terms: int = 100_000
    tail_order: int | None = None  # defaults to 2 * digits
    guard_digits: int = 20

    def __post_init__(self):
        if self.guard_digits < 10:
            raise ValueError("guard_digits must be at least 10")
        if self.tail_order is not None and self.tail_order > 2 * self.digits:
            raise ValueError("tail_order must not exceed 2 * digits")

    @property
    def M(self) -> int:
        return 2 * self.digits if self.tail_order is None else self.tail_order


@dataclass
class DirectSumResult:
    value: mpf
    partial: mpf
    tail: mpf
    error_bound: mpf
    tail_terms_used: int
    em_terms_used: int
    config: DirectSumConfig = field(repr=False)


@dataclass(frozen=True)
class TailExpansion:
    """``f(x) ~ sum_{m} (a_m + b_m ln x) x^-m`` with ``a_m = a_rat[m] + gamma * b_m``."""

    a_rat: dict
    b: dict

    def numeric(self, gamma_value) -> tuple[dict, dict]:
        a = {m: _mp(self.a_rat.get(m, 0)) + gamma_value * _mp(self.b.get(m, 0)) for m in self.orders()}
        b = {m: _mp(self.b.get(m, 0)) for m in self.orders()}
        return a, b

    def orders(self) -> list[int]:
        return sorted(set(self.a_rat) | set(self.b))


def _mp(c: Fraction) -> mpf:
    c = Fraction(c)
    return mpf(c.numerator) / c.denominator


def _integer_pair(R: RationalFunction) -> tuple[list[int], list[int]]:
    den = 1
    for c in R.numerator.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    P = [int(c * den) for c in R.numerator.coeffs]
    Q = [int(c * den) for c in R.denominator.coeffs]
    return P, Q


def _horner_int(cs: list[int], k: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * k + c
    return acc


def max_pole_modulus(R: RationalFunction) -> float:
    Q = R.denominator
    if Q.degree < 1:
        return 0.0
    best = 0.0
    for part, _ in squarefree_factor(Q).parts:
        for r in find_roots_hp(part, 20):
            best = max(best, float(abs(r)))
    return best


def partial_sum(R: RationalFunction, N: int, digits: int, guard: int = 20) -> tuple[mpf, mpf]:
    """``sum_{k=1}^N R(k) H_k`` and a bound on its rounding error."""
    require_summable(R)
    if N <= 0:
        return mpf(0), mpf(0)
    P, Q = _integer_pair(R)
    W = digits_to_bits(digits + guard) + N.bit_length() + 8
    one = 1 << W
    H = 0
    S = 0
    weight = 0.0
    for k in range(1, N + 1):
        H += one // k
        pk = _horner_int(P, k)
        if pk:
            qk = _horner_int(Q, k)
            S += (H * pk) // qk
            if k <= 16:
                weight = max(weight, abs(pk / qk) * k)
    with mpmath.workprec(W + 8):
        value = mpf(S) / one
        bound = mpf(N) * (2 + weight) * mpf(2) ** (-W + 2)
    return value, bound


def tail_expansion(R: RationalFunction, M: int) -> TailExpansion:
    """Exact coefficients of the large-``x`` expansion up to ``x^-M``."""
    P, Q = R.numerator, R.denominator
    dp, dq = P.degree, Q.degree
    gap = dq - dp
    n = M - gap + 1
    if n <= 0:
        return TailExpansion({}, {})
    # R(x) = u^gap P*(u)/Q*(u) with u = 1/x
    Pr = LaurentSeries(0, P.reversed_coeffs(), n)
    Qr = LaurentSeries(0, Q.reversed_coeffs(), n)
    Rser = (Pr * series_recip(Qr)).shift(gap)
    r = {m: Rser[m] for m in range(gap, M + 1)}
    # psi(x+1) + gamma - ln x - gamma = 1/(2x) - sum_k B_2k/(2k) x^-2k
    bern = even_bernoulli(M // 2 + 1)
    h = {1: Fraction(1, 2)}
    for k in range(1, M // 2 + 1):
        h[2 * k] = -bern[k] / (2 * k)
    a_rat: dict = {}
    for m, rm in r.items():
        if not rm:
            continue
        for j, hj in h.items():
            if m + j <= M:
                a_rat[m + j] = a_rat.get(m + j, 0) + rm * hj
    b = {m: c for m, c in r.items() if c}
    return TailExpansion(a_rat, b)


def _needed_order(pole: float, N: int, digits: int) -> int:
    rho = max(pole, 1.0) / (N + 1)
    return math.ceil(digits * math.log(10) / -math.log(rho)) + 4


def euler_maclaurin_tail(R: RationalFunction, N: int, config: DirectSumConfig) -> tuple[mpf, mpf, int, int]:
    """``sum_{k>N} R(k) H_k`` with an error estimate.

    Returns ``(value, error_bound, expansion_terms, em_terms)``.
    """
    require_summable(R)
    pole = max_pole_modulus(R)
    if N <= 2 * pole:
        raise TailOrderError(f"explicit terms {N} not beyond twice the largest pole modulus {pole:.3g}", math.ceil(2 * pole) + 10)
    target_digits = config.digits + config.guard_digits
    need = _needed_order(pole, N, target_digits)
    M = min(config.M, need)
    if need > config.M:
        rho_needed = 10 ** (-target_digits / (config.M - 4))
        suggestion = math.ceil(max(pole, 1.0) / rho_needed * 1.2)
        raise TailOrderError(f"tail order {config.M} too small for {config.digits} digits at N = {N}", suggestion)
    expansion = tail_expansion(R, M + 2)
    bits = digits_to_bits(target_digits) + 16
    with mpmath.workprec(bits):
        g = euler_gamma_hp(target_digits)
        A, B = expansion.numeric(g)
        x = mpf(N + 1)
        lnx = mpmath.log(x)
        eps = mpf(2) ** (-bits)

        def integral(m, am, bm):
            xm = x ** (1 - m)
            return am * xm / (m - 1) + bm * (xm * lnx / (m - 1) + xm / (m - 1) ** 2)

        kept = [m for m in A if m <= M]
        dropped = [m for m in A if m > M]
        total = mpf(0)
        for m in kept:
            total += integral(m, A[m], B[m])
            total += (A[m] + B[m] * lnx) * x ** (-m) / 2
        trunc = mpf(0)
        for m in dropped:
            trunc += abs(integral(m, A[m], B[m])) + abs((A[m] + B[m] * lnx) * x ** (-m))
        # odd derivatives via (A + B ln x) x^-m -> (-m A + B) x^-(m+1) + (-m B) ln x x^-(m+1)
        da = {m: A[m] for m in kept}
        db = {m: B[m] for m in kept}
        bern = even_bernoulli(4 * target_digits)
        fact = mpf(1)
        em_terms = 0
        last = mpf(0)
        prev = None
        for j in range(1, len(bern)):
            for _ in range(2 if j > 1 else 1):
                na, nb = {}, {}
                for m in da:
                    na[m + 1] = -m * da[m] + db[m]
                    nb[m + 1] = -m * db[m]
                da, db = na, nb
            fact *= (2 * j - 1) * (2 * j)
            deriv = sum((da[m] + db[m] * lnx) * x ** (-m) for m in da)
            bj = bern[j]
            term = mpf(bj.numerator) / bj.denominator / fact * deriv
            mag = abs(term)
            if prev is not None and mag > prev:
                break
            total -= term
            em_terms = j
            last = mag
            if mag < eps * max(1, abs(total)):
                break
            prev = mag
        error = 2 * trunc + last + eps
    return total, error, M, em_terms


def direct_euler_sum(R: RationalFunction, config: DirectSumConfig = DirectSumConfig()) -> DirectSumResult:
    """Partial sum plus Euler-Maclaurin tail, with a combined error bound."""
    require_summable(R)
    N = config.terms
    part, part_err = partial_sum(R, N, config.digits, config.guard_digits)
    tail, tail_err, used, em = euler_maclaurin_tail(R, N, config)
    prec = digits_to_bits(config.digits + config.guard_digits)
    with mpmath.workprec(prec):
        value = part + tail
    # the final rounding counts as well
    bound = part_err + tail_err + abs(value) * mpf(2) ** (1 - prec)
    if bound > mpf(10) ** (-config.digits):
        raise TailOrderError(f"error bound {mpmath.nstr(bound, 3)} above 1e-{config.digits}", 2 * N)
    return DirectSumResult(value, part, tail, bound, used, em, config)

"""High-precision special functions and the symbolic-expression evaluator.

Values are mpmath ``mpf``/``mpc`` numbers.  Every public routine takes the
target accuracy ``digits`` explicitly and does its work inside a local
``mpmath.workprec`` block, so no caller-visible precision state changes.

Digamma shifts the argument upward with ``psi(x+1) = psi(x) + 1/x`` until it
exceeds ``0.45*B`` (``B`` = working bits) and then uses the asymptotic
series.  Polygamma reduces the argument into ``(0, 1]`` and evaluates a
Hurwitz zeta value by Euler-Maclaurin with ``q > 0.6*D`` explicit terms.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from mpmath import mpc, mpf

from .bernoulli import even_bernoulli
from .exact import Polynomial
from .symbolic import (
    Alpha,
    Atom,
    Gamma,
    Log,
    Pi,
    Psi,
    PsiRoot,
    RootSum,
    SymbolicExpression,
    Zeta,
)

Real = Union[int, Fraction, mpf]
SHIFT_FACTOR = 0.45
HURWITZ_SHIFT_FACTOR = 0.6
GUARD_DIGITS = 20


class RootFindingError(ArithmeticError):
    pass


class EvaluationError(ValueError):
    pass


def digits_to_bits(digits: int) -> int:
    return math.ceil(digits * math.log2(10)) + 32


def _to_mp(x):
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (mpf, mpc)):
        return +x  # round to current precision
    if isinstance(x, complex):
        return mpc(x)
    return mpf(x)


def _is_pole(z) -> bool:
    if isinstance(z, mpc):
        if z.imag != 0:
            return False
        z = z.real
    return z <= 0 and z == mpmath.floor(z)


# ---------------------------------------------------------------------------
# digamma / Hurwitz zeta / polygamma


def digamma_hp(x, digits: int, *, shift: float | None = None, terms: int | None = None):
    """``psi(x)`` to absolute accuracy ``10^-digits`` (real or complex ``x``)."""
    if isinstance(x, (int, Fraction)) and x <= 0 and Fraction(x).denominator == 1:
        raise ValueError(f"digamma pole at {x}")
    bits = digits_to_bits(digits)
    threshold = SHIFT_FACTOR * bits if shift is None else shift
    n = 2 * digits if terms is None else terms
    if isinstance(x, (int, Fraction)):
        return _digamma_rational(Fraction(x), bits + 16, threshold, n)
    with mpmath.workprec(bits + 16):
        z = _to_mp(x)
        if _is_pole(z):
            raise ValueError(f"digamma pole at {x}")
        acc = mpf(0)
        while mpmath.re(z) < threshold:
            acc -= 1 / z
            z += 1
        bern = even_bernoulli(n)
        eps = mpf(2) ** (-(bits + 16))
        z2 = z * z
        zp = z2
        s = mpf(0)
        prev = None
        for k in range(1, n + 1):
            b = bern[k]
            term = (mpf(b.numerator) / b.denominator) / (2 * k * zp)
            mag = abs(term)
            if prev is not None and mag > prev:  # asymptotic series started diverging
                break
            s += term
            if mag < eps:
                break
            prev = mag
            zp *= z2
        return acc + mpmath.log(z) - 1 / (2 * z) - s


def hurwitz_zeta_hp(s: int, a, digits: int, *, q: int | None = None, terms: int | None = None):
    """``zeta(s, a) = sum_{k>=0} (a+k)^-s`` for integer ``s >= 2``."""
    if int(s) != s or s < 2:
        raise ValueError("hurwitz_zeta_hp needs an integer s >= 2")
    s = int(s)
    if isinstance(a, (int, Fraction)) and a <= 0:
        raise ValueError("hurwitz_zeta_hp needs a > 0 for rational a")
    with mpmath.workprec(64):
        mag = abs(_to_mp(a))
    if mag == 0:
        raise ValueError("hurwitz_zeta_hp pole at a = 0")
    extra = 16 + max(0, math.ceil(s * -math.log2(float(mag)))) if mag < 1 else 16
    bits = digits_to_bits(digits) + extra
    with mpmath.workprec(bits):
        av = _to_mp(a)
        if not isinstance(av, mpc) and av <= 0:
            raise ValueError("hurwitz_zeta_hp needs a > 0")
        if _is_pole(av):
            raise ValueError(f"hurwitz zeta pole at a = {a}")
        nq = (int(HURWITZ_SHIFT_FACTOR * digits) + 1) if q is None else q
        n = 2 * digits if terms is None else terms
        if isinstance(a, (int, Fraction)):
            return _hurwitz_rational(s, Fraction(a), bits, nq, n)
        total = mpf(0)
        for k in range(nq):
            total += (av + k) ** (-s)
        big = av + nq
        total += big ** (1 - s) / (s - 1) + big ** (-s) / 2
        bern = even_bernoulli(n)
        eps = mpf(2) ** (-bits)
        inv2 = 1 / (big * big)
        power = big ** (-s - 1)  # (a+q)^(-(s+2k-1)) for k = 1
        rising = mpf(s)  # s (s+1) ... (s+2k-2)
        fact = mpf(2)  # (2k)!
        prev = None
        for k in range(1, n + 1):
            b = bern[k]
            term = (mpf(b.numerator) / b.denominator) * rising / fact * power
            m = abs(term)
            if prev is not None and m > prev:
                break
            total += term
            if m < eps:
                break
            prev = m
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            fact *= (2 * k + 1) * (2 * k + 2)
            power *= inv2
        return total


# Rational arguments take a fixed-point integer route: every quantity in the
# shifted sums and the Bernoulli corrections is rational, so each step is one
# big-integer multiply and floor-divide at ``bits`` fractional bits.


@lru_cache(maxsize=256)
def _em_coefficients(s: int, n: int, bits: int) -> tuple:
    """``B_2k s(s+1)...(s+2k-2) / (2k)!`` in fixed point with ``bits`` fractional bits.

    ``s = 0`` gives ``B_2k / 2k``.  Each entry is off by less than one unit.
    """
    bern = even_bernoulli(n)
    out = []
    rising, fact = s, 2
    for k in range(1, n + 1):
        c = bern[k] / (2 * k) if s == 0 else bern[k] * rising / fact
        out.append((c.numerator << bits) // c.denominator)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        fact *= (2 * k + 1) * (2 * k + 2)
    return tuple(out)


def _fixed_series(s: int, n: int, num: int, den: int, step_num: int, step_den: int, bits: int) -> int:
    """``sum_k c_k (num/den) (step_num/step_den)^(k-1)`` in fixed point.

    The cut-off is picked from bit lengths: the last term above one ulp, or
    the one before the asymptotic series turns upward.  Horner's rule then
    needs only big-by-small multiplies and divides.
    """
    G = bits + 16
    coeffs = _em_coefficients(s, n, G)
    lead = math.log2(num) - math.log2(den) - G
    step = math.log2(step_num) - math.log2(step_den)
    floor_mag = -bits - 4
    K = 0
    prev = None
    for k, c in enumerate(coeffs):
        mag = c.bit_length() + lead + k * step if c else -math.inf
        if prev is not None and mag > prev:
            break
        K = k + 1
        if mag < floor_mag:
            break
        prev = mag
    if K == 0:
        return 0
    acc = coeffs[K - 1]
    for c in reversed(coeffs[: K - 1]):
        acc = c + acc * step_num // step_den
    return (acc * num // den) >> (G - bits)


def _digamma_rational(x: Fraction, bits: int, threshold: float, n: int) -> mpf:
    one = 1 << bits
    p, d = x.numerator, x.denominator
    steps = max(0, math.ceil(threshold - x))
    acc = -sum(one * d // (p + i * d) for i in range(steps))
    p += steps * d
    # psi(z) = ln z - 1/(2z) - sum_k B_2k / (2k z^2k)
    acc -= one * d // (2 * p)
    acc -= _fixed_series(0, n, d * d, p * p, d * d, p * p, bits)
    with mpmath.workprec(max(bits, acc.bit_length()) + 8):
        return mpf(acc) / one + mpmath.log(mpf(p) / d)


def _hurwitz_rational(s: int, a: Fraction, bits: int, nq: int, n: int) -> mpf:
    one = 1 << bits
    p, d = a.numerator, a.denominator
    ds = d**s
    total = sum(one * ds // (p + k * d) ** s for k in range(nq))
    P = p + nq * d  # a + nq = P/d
    total += one * d ** (s - 1) // ((s - 1) * P ** (s - 1))
    total += one * ds // (2 * P**s)
    total += _fixed_series(s, n, d ** (s + 1), P ** (s + 1), d * d, P * P, bits)
    with mpmath.workprec(max(bits, total.bit_length()) + 8):
        return mpf(total) / one


def polygamma_hp(order: int, x, digits: int):
    """``psi^(order)(x)`` via recurrence into ``(0, 1]`` and Hurwitz zeta."""
    if order < 0:
        raise ValueError("negative polygamma order")
    if order == 0:
        return digamma_hp(x, digits)
    if isinstance(x, (int, Fraction)) and x <= 0 and Fraction(x).denominator == 1:
        raise ValueError(f"polygamma pole at {x}")
    fact = math.factorial(order)
    sign = -1 if order % 2 else 1  # (-1)^order
    dig = digits + len(str(fact)) + 5
    exact = isinstance(x, (int, Fraction))
    if exact:
        # exact reduction keeps the Hurwitz argument rational
        z = Fraction(x)
        corr = Fraction(0)
        while z <= 0:
            corr -= sign * fact / z ** (order + 1)
            z += 1
        while z > 1:
            z -= 1
            corr += sign * fact / z ** (order + 1)
        # small z makes zeta(order+1, z) large; a large correction needs the same care
        dig += math.ceil((order + 1) * max(0.0, -math.log10(z)))
        if corr:
            dig += max(0, math.ceil(math.log10(abs(corr))))
    bits = digits_to_bits(dig)
    with mpmath.workprec(bits):
        if exact:
            corr = _to_mp(corr)
        else:
            z = _to_mp(x)
            if _is_pole(z):
                raise ValueError(f"polygamma pole at {x}")
            corr = mpf(0)
            # psi^(q)(z) = psi^(q)(z+1) - (-1)^q q! z^(-q-1)
            while mpmath.re(z) <= 0:
                corr -= sign * fact * z ** (-order - 1)
                z += 1
            while mpmath.re(z) > 1:
                z -= 1
                corr += sign * fact * z ** (-order - 1)
        hz = hurwitz_zeta_hp(order + 1, z, dig)
        return -sign * fact * hz + corr


@lru_cache(maxsize=64)
def euler_gamma_hp(digits: int) -> mpf:
    """Euler's constant as ``-psi(1)`` through the digamma routine."""
    return -digamma_hp(1, digits)


def pi_hp(digits: int) -> mpf:
    with mpmath.workprec(digits_to_bits(digits)):
        return +mpmath.pi


# ---------------------------------------------------------------------------
# roots


def _horner(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def find_roots_hp(q: Polynomial, digits: int, *, max_iter: int = 1000) -> list:
    """All complex roots of a square-free ``q`` (Aberth iteration, precision doubling).

    Roots are sorted by real part then imaginary part; for real ``q`` the
    non-real roots come in exact conjugate pairs.
    """
    d = q.degree
    if d is None or d < 1:
        raise ValueError("find_roots_hp needs degree >= 1")
    m = q.monic()
    target = digits_to_bits(digits) + 16
    cf = m.coeffs
    if d == 1:
        with mpmath.workprec(target):
            return [mpc(-_to_mp(cf[0]), 0)]

    prec = 64
    with mpmath.workprec(prec):
        bound = 1 + max(abs(_to_mp(c)) for c in cf[:-1])
        # Fujiwara-style radius, then a rotated circle; fixed offset keeps this deterministic
        radius = min(bound, 2 * max(abs(_to_mp(cf[d - k])) ** (mpf(1) / k) for k in range(1, d + 1)))
        radius = max(radius, mpf("0.5"))
        z = [radius * mpmath.expj(2 * mpmath.pi * k / d + mpf("0.4")) for k in range(d)]

    while True:
        with mpmath.workprec(prec):
            c = [_to_mp(x) for x in cf]
            dc = [i * c[i] for i in range(1, d + 1)]
            z = [mpc(x) for x in z]
            tol = mpf(2) ** (-prec + 12)
            converged = False
            for _ in range(max_iter):
                biggest = mpf(0)
                new = []
                for k in range(d):
                    zk = z[k]
                    p = _horner(c, zk)
                    dp = _horner(dc, zk)
                    if dp == 0:
                        dp = tol
                    w = p / dp
                    s = sum(1 / (zk - z[j]) for j in range(d) if j != k)
                    step = w / (1 - w * s)
                    new.append(zk - step)
                    biggest = max(biggest, abs(step) / max(1, abs(zk)))
                z = new
                if biggest < tol:
                    converged = True
                    break
            if not converged:
                raise RootFindingError(f"Aberth iteration did not converge at {prec} bits")
        if prec >= target:
            break
        prec = min(2 * prec, target)

    with mpmath.workprec(target):
        c = [_to_mp(x) for x in cf]
        tiny = mpf(2) ** (-target // 2)
        roots = []
        for r in z:
            if abs(r.imag) < tiny * max(1, abs(r)):
                r = mpc(r.real, 0)
            roots.append(r)
        roots = _pair_conjugates(roots)
        roots.sort(key=lambda r: (r.real, r.imag))
        norm = max(abs(x) for x in c)
        lim = mpf(10) ** (-digits) * norm
        for r in roots:
            if abs(_horner(c, r)) >= lim * max(1, abs(r)) ** d:
                raise RootFindingError(f"root residual too large at {mpmath.nstr(r, 10)}")
    return roots


def _pair_conjugates(roots: list) -> list:
    out = []
    pending = [r for r in roots if r.imag != 0]
    out.extend(r for r in roots if r.imag == 0)
    upper = sorted((r for r in pending if r.imag > 0), key=lambda r: (r.real, r.imag))
    lower = [r for r in pending if r.imag < 0]
    for u in upper:
        j = min(range(len(lower)), key=lambda i: abs(lower[i] - mpmath.conj(u)))
        lower.pop(j)
        out.extend([u, mpmath.conj(u)])
    if lower:
        raise RootFindingError("non-real roots without conjugate partners")
    return out


# ---------------------------------------------------------------------------
# evaluation of symbolic expressions


def _eval_atom(a: Atom, digits: int, alpha=None, cache=None):
    if isinstance(a, Gamma):
        return euler_gamma_hp(digits)
    if isinstance(a, Psi):
        return polygamma_hp(a.order, a.arg, digits)
    if isinstance(a, Zeta):
        return hurwitz_zeta_hp(a.n, 1, digits)
    if isinstance(a, Pi):
        return pi_hp(digits)
    if isinstance(a, Log):
        with mpmath.workprec(digits_to_bits(digits)):
            return mpmath.log(a.n)
    if isinstance(a, Alpha):
        if alpha is None:
            raise EvaluationError("alpha atom outside a root sum")
        return alpha
    if isinstance(a, PsiRoot):
        if alpha is None:
            raise EvaluationError("psi(-alpha) atom outside a root sum")
        return polygamma_hp(a.order, -alpha, digits)
    if isinstance(a, RootSum):
        roots = find_roots_hp(Polynomial(a.poly), digits)
        total = 0
        for r in roots:
            total += _eval(a.template, digits, alpha=r, cache=dict(cache or {}))
        with mpmath.workprec(digits_to_bits(digits)):
            if abs(mpmath.im(total)) > mpf(10) ** (-digits + 5) * max(1, abs(total)):
                raise EvaluationError("root sum has a non-negligible imaginary part")
            return mpmath.re(total)
    raise EvaluationError(f"cannot evaluate atom {a!r}")


def _eval(e: SymbolicExpression, digits: int, alpha=None, cache=None):
    cache = {} if cache is None else cache
    bits = digits_to_bits(digits)
    with mpmath.workprec(bits):
        total = mpf(0)
        for mono, c in e.items():
            term = mpf(c.numerator) / c.denominator
            for a, power in mono:
                key = (a, None if alpha is None else (alpha.real, alpha.imag))
                if key not in cache:
                    cache[key] = _eval_atom(a, digits, alpha, cache)
                term *= cache[key] ** power
            total += term
        return total


def eval_symexpr(e: SymbolicExpression, digits: int, guard: int = GUARD_DIGITS) -> mpf:
    """Numeric value of ``e`` to ``10^-digits``; atoms use ``digits + guard``."""
    work = digits + guard
    value = _eval(e, work)
    with mpmath.workprec(digits_to_bits(work)):
        if isinstance(value, mpc):
            value = mpmath.re(value)
        return +value

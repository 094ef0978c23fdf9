"""Integer relation detection (PSLQ) and numeric formula discovery.

:func:`pslq_find` is the classical one-pair PSLQ iteration of Ferguson and
Bailey with parameter ``gamma = 2/sqrt(3) + 1e-3``.  :func:`discover` feeds it
the numerically summed series followed by a basis of candidate constants and
turns the relation back into a :class:`~eulersum.residue.ClosedForm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
from mpmath import mpf

from .directsum import DirectSumConfig, direct_euler_sum
from .numerics import digits_to_bits, eval_symexpr
from .residue import AlgebraicPole, ClosedForm, T_func, partial_fractions
from .rfparse import RationalFunction, require_summable
from .symbolic import SymbolicExpression, reduce_psi_to_zeta, zeta

GAMMA_PARAM = 2 / math.sqrt(3) + 1e-3


@dataclass
class RelationResult:
    status: str  # "found", "none", "precision_exhausted"
    coefficients: Optional[list[int]]
    residual: Optional[mpf]
    iterations: int
    # found: threshold / residual.  none: the proven lower bound on the norm
    # of any relation, divided by max_coeff.
    confidence: float
    norm_bound: Optional[mpf] = None

    @property
    def found(self) -> bool:
        return self.status == "found"


def _nint(v):
    return int(mpmath.nint(v))


def pslq_find(
    x: Sequence,
    max_coeff: int = 10**6,
    digits: int = 100,
    *,
    max_iterations: int | None = None,
    threshold_digits: float | None = None,
) -> RelationResult:
    """Search for integers ``c`` (``|c_i| <= max_coeff``) with ``sum c_i x_i = 0``.

    The detection threshold is ``10^-(0.9 digits)`` relative to ``max |x_i|``.
    """
    n = len(x)
    if n < 2:
        raise ValueError("pslq_find needs at least two values")
    bits = digits_to_bits(digits)
    thr_digits = 0.9 * digits if threshold_digits is None else threshold_digits
    max_iterations = 200 * n * n + 10 * digits if max_iterations is None else max_iterations
    with mpmath.workprec(bits):
        xs = [mpf(v) for v in x]
        if any(v == 0 for v in xs):
            raise ValueError("pslq_find needs nonzero inputs")
        scale = max(abs(v) for v in xs)
        threshold = mpf(10) ** (-thr_digits)
        # a relation norm this large cannot be told apart from noise
        precision_limit = mpf(10) ** (0.8 * digits)
        g = mpf(GAMMA_PARAM)

        s = [mpf(0)] * n
        acc = mpf(0)
        for k in range(n - 1, -1, -1):
            acc += xs[k] ** 2
            s[k] = mpmath.sqrt(acc)
        y = [v / s[0] for v in xs]
        s = [v / s[0] for v in s]
        H = [[mpf(0)] * (n - 1) for _ in range(n)]
        for i in range(n):
            for j in range(min(i + 1, n - 1)):
                if i == j:
                    H[i][j] = s[j + 1] / s[j]
                else:
                    H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1])
        A = [[int(i == j) for j in range(n)] for i in range(n)]
        B = [[int(i == j) for j in range(n)] for i in range(n)]

        def reduce_rows(rows, cols_for):
            for i in rows:
                for j in cols_for(i):
                    if H[j][j] == 0:
                        continue
                    t = _nint(H[i][j] / H[j][j])
                    if t == 0:
                        continue
                    y[j] += t * y[i]
                    for k in range(j + 1):
                        H[i][k] -= t * H[j][k]
                    for k in range(n):
                        A[i][k] -= t * A[j][k]
                        B[k][j] += t * B[k][i]

        reduce_rows(range(1, n), lambda i: range(i - 1, -1, -1))

        def relation_from(j):
            coeffs = [B[k][j] for k in range(n)]
            res = abs(mpmath.fsum(c * v for c, v in zip(coeffs, xs)))
            return coeffs, res

        it = 0
        norm_bound = mpf(0)
        while it < max_iterations:
            it += 1
            m = max(range(n - 1), key=lambda i: g ** (i + 1) * abs(H[i][i]))
            y[m], y[m + 1] = y[m + 1], y[m]
            A[m], A[m + 1] = A[m + 1], A[m]
            H[m], H[m + 1] = H[m + 1], H[m]
            for row in B:
                row[m], row[m + 1] = row[m + 1], row[m]
            if m < n - 2:
                t0 = mpmath.sqrt(H[m][m] ** 2 + H[m][m + 1] ** 2)
                t1, t2 = H[m][m] / t0, H[m][m + 1] / t0
                for i in range(m, n):
                    t3, t4 = H[i][m], H[i][m + 1]
                    H[i][m] = t1 * t3 + t2 * t4
                    H[i][m + 1] = -t2 * t3 + t1 * t4
            reduce_rows(range(m + 1, n), lambda i: range(min(i - 1, m + 1), -1, -1))

            hmax = max(abs(H[j][j]) for j in range(n - 1))
            if hmax > 0:
                norm_bound = max(norm_bound, 1 / hmax)
            small = min(range(n), key=lambda j: abs(y[j]))
            if abs(y[small]) < threshold:
                coeffs, res = relation_from(small)
                if any(coeffs) and res < threshold * scale:
                    if max(abs(c) for c in coeffs) > max_coeff:
                        return RelationResult("none", None, None, it, float(norm_bound / max_coeff), norm_bound)
                    g0 = 0
                    for c in coeffs:
                        g0 = math.gcd(g0, c)
                    coeffs = [c // g0 for c in coeffs]
                    if next(c for c in coeffs if c) < 0:
                        coeffs = [-c for c in coeffs]
                    res = abs(mpmath.fsum(c * v for c, v in zip(coeffs, xs)))
                    conf = float(threshold * scale / res) if res > 0 else math.inf
                    return RelationResult("found", coeffs, res, it, conf, norm_bound)
            if norm_bound > max_coeff:
                return RelationResult("none", None, None, it, float(norm_bound / max_coeff), norm_bound)
            if max(abs(a) for row in A for a in row) > precision_limit or hmax == 0:
                return RelationResult("precision_exhausted", None, None, it, 0.0, norm_bound)
        return RelationResult("precision_exhausted", None, None, it, 0.0, norm_bound)


# ---------------------------------------------------------------------------
# discovery


@dataclass(frozen=True)
class BasisEntry:
    name: str
    expr: SymbolicExpression


@dataclass
class ConstantBasis:
    entries: list[BasisEntry] = field(default_factory=list)

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("basis labels must be distinct")

    @classmethod
    def from_exprs(cls, exprs: Sequence[SymbolicExpression]) -> "ConstantBasis":
        return cls([BasisEntry(e.to_text(), e) for e in exprs])

    def __len__(self):
        return len(self.entries)

    def values(self, digits: int) -> list[mpf]:
        return [eval_symexpr(e.expr, digits) for e in self.entries]


def auto_basis(R: RationalFunction) -> ConstantBasis:
    """Monomials of the ``T(t_j, i)``, ``i <= p_j``, for every pole ``-t_j`` of ``R``.

    A pole at zero uses ``sum H_k/k^i = T(1, i) + zeta(i+1)``.  Polygamma
    values at 1 and 1/2 become zeta values and even zeta values become
    powers of pi, so the basis has no built-in rational relations.
    """
    pfd = partial_fractions(R)
    top: dict[Fraction, int] = {}
    for term in pfd.terms:
        if isinstance(term.pole, AlgebraicPole):
            raise ValueError("automatic basis needs rational poles")
        top[term.pole] = max(top.get(term.pole, 0), term.power)
    monomials = {}
    for t, p in sorted(top.items()):
        for i in range(1, p + 1):
            shape = T_func(1, i) + zeta(i + 1) if t == 0 else T_func(t, i)
            shape = reduce_psi_to_zeta(shape, even_zeta=True)
            for mono, _ in shape.items():
                monomials[mono] = None
    exprs = [SymbolicExpression({mono: 1}) for mono in monomials]
    exprs.sort(key=lambda e: e.to_text())
    return ConstantBasis.from_exprs(exprs)


@dataclass
class DiscoveryResult:
    status: str  # "found", "none", "ambiguous", "precision_exhausted"
    closed_form: Optional[ClosedForm]
    relation: RelationResult
    basis: ConstantBasis


def discover(
    R: RationalFunction,
    basis: ConstantBasis | None = None,
    digits: int = 100,
    *,
    max_coeff: int = 10**8,
    terms: int = 10_000,
) -> DiscoveryResult:
    """Recover ``sum R(k) H_k`` as a rational combination of ``basis``.

    The sum is computed by direct summation only; the closed-form machinery
    is not consulted.
    """
    require_summable(R)
    basis = auto_basis(R) if basis is None else basis
    if len(basis) == 0:
        raise ValueError("empty basis")
    work = digits + 20
    S = direct_euler_sum(R, DirectSumConfig(digits=work, terms=terms)).value
    values = basis.values(work)
    nonzero = [i for i, v in enumerate(values) if v != 0]
    rel = pslq_find([S] + [values[i] for i in nonzero], max_coeff, digits)
    if rel.status != "found":
        return DiscoveryResult(rel.status, None, rel, basis)
    c0, rest = rel.coefficients[0], rel.coefficients[1:]
    if c0 == 0:
        return DiscoveryResult("ambiguous", None, rel, basis)
    # a relation among the basis constants alone would make the answer non-unique
    if len(nonzero) >= 2:
        inner = pslq_find([values[i] for i in nonzero], max_coeff, digits)
        if inner.found:
            return DiscoveryResult("ambiguous", None, rel, basis)
    expr = SymbolicExpression()
    for c, i in zip(rest, nonzero):
        if c:
            expr = expr + basis.entries[i].expr * Fraction(-c, c0)
    with mpmath.workprec(digits_to_bits(work)):
        check = abs(eval_symexpr(expr, work) - S)
        if check > mpf(10) ** (-(digits - 10)):
            return DiscoveryResult("none", None, rel, basis)
    prov = {
        "path": "pslq",
        "input": R.to_text(),
        "relation": rel.coefficients,
        "basis": [e.name for e in basis.entries],
        "iterations": rel.iterations,
    }
    return DiscoveryResult("found", ClosedForm(expr, prov), rel, basis)

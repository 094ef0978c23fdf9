"""Exact Bernoulli numbers via tangent numbers (integer-only recurrence)."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

_lock = threading.Lock()
_even: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def _tangent_numbers(n: int) -> list[int]:
    # Brent-Harvey in-place recurrence; T[k] is the k-th tangent number
    t = [0] * (n + 1)
    if n >= 1:
        t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def even_bernoulli(n: int) -> list[Fraction]:
    """``[B_0, B_2, ..., B_{2n}]``; cached and shared read-only."""
    if n < len(_even):
        return _even[: n + 1]
    with _lock:
        if n >= len(_even):
            # recompute to a comfortable size; the recurrence is not incremental
            size = max(n, 2 * (len(_even) - 1))
            t = _tangent_numbers(size)
            table = [Fraction(1)]
            for k in range(1, size + 1):
                four = 1 << (2 * k)
                b = Fraction(2 * k * t[k], four * (four - 1))
                table.append(b if k % 2 == 1 else -b)
            _even[:] = table
    return _even[: n + 1]


def bernoulli_exact(m: int) -> Fraction:
    """``B_m`` with the convention ``B_1 = -1/2``."""
    if m < 0:
        raise ValueError("negative Bernoulli index")
    if m == 1:
        return Fraction(-1, 2)
    if m % 2:
        return Fraction(0)
    return even_bernoulli(m // 2)[m // 2]


@dataclass(frozen=True)
class BernoulliTable:
    """``B_0 .. B_{2n}``; odd entries beyond ``B_1`` are zero and omitted."""

    count: int
    values: tuple  # B_0, B_1, B_2, B_4, ..., B_{2n}

    def even(self, k: int) -> Fraction:
        return self.values[0] if k == 0 else self.values[k + 1]

    def __getitem__(self, m: int) -> Fraction:
        if m == 1:
            return self.values[1]
        if m % 2:
            return Fraction(0)
        return self.even(m // 2)


def bernoulli_table(n: int) -> BernoulliTable:
    if n < 0:
        raise ValueError("n must be nonnegative")
    ev = even_bernoulli(n)
    return BernoulliTable(n, (ev[0], Fraction(-1, 2), *ev[1:]))

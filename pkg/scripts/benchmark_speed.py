"""Time closed form + evaluation against direct summation for one sum."""

from __future__ import annotations

import argparse
import statistics
import time

from eulersum.directsum import DirectSumConfig, direct_euler_sum
from eulersum.numerics import eval_symexpr
from eulersum.residue import closed_form_fast
from eulersum.rfparse import parse_ratfunc


def _median_seconds(fn, repeats: int) -> float:
    fn()  # warm
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def measure(text: str, digits: int = 100, terms: int = 100_000, repeats: int = 11):
    R = parse_ratfunc(text)
    cfg = DirectSumConfig(digits=digits, terms=terms)
    closed = _median_seconds(lambda: eval_symexpr(closed_form_fast(R).expression, digits), repeats)
    direct = _median_seconds(lambda: direct_euler_sum(R, cfg), max(3, repeats // 3))
    return closed, direct


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("rf", nargs="?", default="1/(3k+2)^4")
    ap.add_argument("--digits", type=int, default=100)
    ap.add_argument("--terms", type=int, default=100_000)
    ap.add_argument("--repeats", type=int, default=11)
    a = ap.parse_args()
    closed, direct = measure(a.rf, a.digits, a.terms, a.repeats)
    print(f"closed {closed*1e3:.3f} ms  direct {direct*1e3:.1f} ms  ratio {direct/closed:.1f}x")


if __name__ == "__main__":
    main()

"""Regenerate src/eulersum/data/catalog.jsonl from a LaTeX source.

Every ``\\sum_{k=1}^\\infty \\frac{H_k}{DEN} &= RHS`` row inside a numbered
``align`` environment becomes a fixture; a handful of hand-entered identities
with zeta/log right-hand sides or decimal values are appended.

    python3 scripts/transcribe_catalog.py SOURCE.md [-o OUT.jsonl]
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path

from eulersum.catalog import Fixture, _CONT, bundled_catalog_path, load_catalog, parse_latex, save_catalog
from eulersum.symbolic import PI, Log, SymbolicExpression, zeta

ROW = re.compile(r"\\sum_\{k=1\}\^\\infty\s*\\frac\{H_k\}\{([^}]*)\}\s*&=\s*(.*)", re.S)


def rows_from_source(text: str):
    for block in re.findall(r"\\begin\{align\}(.*?)\\end\{align\}", text, re.S):
        block = _CONT.sub(" ", block)
        for chunk in block.split("\\\\"):
            m = ROW.search(chunk)
            if m:
                yield m.group(1).strip(), " ".join(m.group(2).split())


def hand_entered() -> list[Fixture]:
    ln2 = SymbolicExpression.atom(Log(2))
    pi = SymbolicExpression.atom(PI)
    return [
        Fixture("intro/k^3", "1/k^3", "intro/k^3", zeta(4) * Fraction(5, 4)),
        Fixture("intro/(k+1)^5", "1/(k+1)^5", "intro/(k+1)^5", (3 * zeta(6) - 2 * zeta(3) ** 2) * Fraction(1, 4)),
        Fixture("intro/(k+1)^7", "1/(k+1)^7", "intro/(k+1)^7", (5 * zeta(8) - 4 * zeta(3) * zeta(5)) * Fraction(1, 4)),
        Fixture(
            "example/(2k-1)^2",
            "1/(2k-1)^2",
            "worked-example/(2k-1)^2",
            zeta(3) * Fraction(7, 4) + pi**2 * Fraction(1, 4) - 2 * ln2 - pi**2 * ln2 * Fraction(1, 4),
        ),
        Fixture("example/k^3+1", "1/(k^3+1)", "worked-example/k^3+1", None, "0.828902143400992508742"),
        Fixture("example/(k^2+3k+1)^2", "1/(k^2+3k+1)^2", "worked-example/(k^2+3k+1)^2"),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source", type=Path)
    ap.add_argument("-o", "--out", type=Path, default=bundled_catalog_path())
    args = ap.parse_args(argv)

    fixtures = []
    for den, rhs in rows_from_source(args.source.read_text(encoding="utf-8")):
        kind = "single" if den.count("(") == 1 else "mixed"
        expected = "0.002220075526" if den == "(3k+2)^4" else None
        fixtures.append(Fixture(f"{kind}/{den}", f"1/({den})", f"catalog-{kind}/{den}", parse_latex(rhs), expected))
    fixtures += hand_entered()
    save_catalog(fixtures, args.out)
    n_single = sum(f.id.startswith("single/") for f in fixtures)
    n_mixed = sum(f.id.startswith("mixed/") for f in fixtures)
    print(f"{len(load_catalog(args.out))} fixtures ({n_single} single-factor, {n_mixed} mixed) -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Verify the bundled catalog and write the per-fixture report.

    python3 scripts/run_catalog.py --jobs 4 --out catalog_report.json
"""

from __future__ import annotations

import argparse
import json

from eulersum.catalog import load_catalog, verify_catalog


def main() -> int:
    ap = argparse.ArgumentParser(description="closed form vs direct summation for every fixture")
    ap.add_argument("--digits", type=int, default=100)
    ap.add_argument("--terms", type=int, default=100_000)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--filter", default=None)
    ap.add_argument("--out", default=None, help="write JSON records here")
    a = ap.parse_args()

    fixtures = load_catalog()
    if a.filter:
        fixtures = [f for f in fixtures if a.filter in f.id]
    rep = verify_catalog(fixtures, digits=a.digits, terms=a.terms, jobs=a.jobs)
    print(rep.table())
    if a.out:
        with open(a.out, "w") as fh:
            json.dump({"digits": rep.digits, "terms": rep.terms, "seconds": rep.seconds, "fixtures": rep.records()}, fh, indent=1)
    return 0 if rep.all_passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

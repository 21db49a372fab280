#!/usr/bin/env python3
"""Run the reference verification sweep and write the report.

Usage:
    python3 scripts/run_verification.py [--quick] [--out report.json] [--csv report.csv]

The default bounds match the acceptance criteria: closed forms at B=5/4/3
by circle size, reduction audits at B=3 (m <= 6) or B=2 (m = 7, 8), edge
rows at B=2, the generalized families at their documented bounds, and the
full mutant battery.  Expect roughly a minute and a half on a laptop.
"""
import argparse
import collections
import sys
import time
from pathlib import Path

from ecnim.verify import export_report, verify_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smoke bounds, ~15s")
    ap.add_argument("--out", type=Path, help="write the JSON report here")
    ap.add_argument("--csv", type=Path, help="write the CSV summary here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = verify_all(quick=args.quick)
    wall = time.perf_counter() - t0

    by_category = collections.Counter(r.category for r in reports)
    by_status = collections.Counter(r.status for r in reports)
    checked = sum(r.positions_checked for r in reports)

    width = max(len(r.subject) for r in reports)
    for r in reports:
        if r.status != "PASS":
            print(f"{r.status:10} {r.subject:{width}} {r.ruleset:22} "
                  f"B={r.bound} {r.note}")
    print(f"\n{len(reports)} reports in {wall:.1f}s, "
          f"{checked:,} positions swept")
    print("by category:", dict(sorted(by_category.items())))
    print("by status:  ", dict(sorted(by_status.items())))

    if args.out:
        args.out.write_text(export_report(reports, "json"))
        print(f"wrote {args.out}")
    if args.csv:
        args.csv.write_text(export_report(reports, "csv"))
        print(f"wrote {args.csv}")

    return 1 if by_status.get("FAIL") else 0


if __name__ == "__main__":
    sys.exit(main())

"""Run the claim suite and write the JSON report plus a short summary.

    python scripts/run_suite.py --n 4 --workers 4 --out suite_n4.json
"""

import argparse
import json
import sys

from covtop.claims import FLAGGED
from covtop.suite import SuiteConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="suite_report.json")
    args = ap.parse_args()

    report = run_suite(SuiteConfig(args.n, args.mode, args.samples, args.seed, args.workers))
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(timing=True), fh, indent=2, sort_keys=True)

    print(f"{report.total_coverings} coverings in {report.duration:.1f}s -> {args.out}")
    for cid, t in report.tallies.items():
        mark = " (flagged)" if cid in FLAGGED else ""
        print(f"  {cid:<28} holds={t['holds']:<6} fails={t['fails']:<6} n/a={t['not-applicable']}{mark}")
    return 1 if report.unflagged_failures else 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Run every verification suite for one Cartan type and write a combined
JSON report.

Usage:
    python scripts/run_all_suites.py --type A1 [--out report.json] [--seed 0]

The A2 sweep takes a couple of minutes (the center solve dominates); A1
finishes in well under a minute.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from qflag.config import RunConfig
from qflag.suites import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--type", default="A1")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    ap.add_argument("--skip", nargs="*", default=[],
                    help="suite names to skip (e.g. center on A2)")
    args = ap.parse_args()
    config = RunConfig(type=args.type, seed=args.seed)
    reports = []
    overall = True
    for name in sorted(SUITES):
        if name in args.skip:
            continue
        t0 = time.time()
        rep = run_suite(name, config)
        dt = time.time() - t0
        overall = overall and rep["pass"]
        print(f"{name:16s} {'PASS' if rep['pass'] else 'FAIL'} "
              f"({dt:6.1f}s, {len(rep['results'])} instances)")
        reports.append(rep)
    payload = {"schema": 1, "type": args.type, "seed": args.seed,
               "pass": overall, "suites": reports}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
        print(f"wrote {args.out}")
    return 0 if overall else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Solve for central elements at a bounded height and tabulate their
characters over a window of weights, marking the shifted-Weyl orbits.

Usage:
    python scripts/center_report.py --type A1 --height 2 --range 3
"""

from __future__ import annotations

import argparse
import sys

from qflag.cartan import preset
from qflag.center import center_solve, zeta_separation_scan
from qflag.enveloping import UAlgebra


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--type", default="A1")
    ap.add_argument("--height", type=int, default=2)
    ap.add_argument("--range", type=int, default=3, dest="bound")
    args = ap.parse_args()
    datum = preset(args.type)
    alg = UAlgebra(datum)
    centers = center_solve(alg, args.height)
    print(f"{len(centers)} central element(s) at height <= {args.height}")
    for idx, zc in enumerate(centers):
        print(f"\nz{idx} = {zc.element.to_str()}")
        print(f"   torus image: "
              f"{ {datum.weight_str(m): c.to_str() for m, c in sorted(zc.hc_image.items())} }")
        print(f"   shifted-Weyl invariant: {zc.hc_is_invariant()}")
    if datum.rank == 1:
        lams = [(n,) for n in range(-args.bound, args.bound + 1)]
    else:
        lams = [(a, b) for a in range(-1, 2) for b in range(-1, 2)]
    scan = zeta_separation_scan(alg, centers, lams)
    print(f"\ncharacter separation over {len(lams)} weights: "
          f"{'exact' if scan['pass'] else 'INCOMPLETE'}")
    for row in scan["results"]:
        if row["equal"] and row["l1"] != row["l2"]:
            print(f"  zeta({row['l1']}) == zeta({row['l2']})"
                  f"  linked: {row['linked']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

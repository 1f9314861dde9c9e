#!/usr/bin/env python3
"""Print the R-operator on a tensor product of two simple modules, with
basis labels, and check its defining properties on the spot.

Usage:
    python scripts/dump_rmatrix.py --type A1 --hw "[1]"
    python scripts/dump_rmatrix.py --type A2 --hw "[1,0]" --hw2 "[0,1]"
"""

from __future__ import annotations

import argparse
import sys

from qflag import linalg
from qflag.cartan import preset
from qflag.enveloping import UAlgebra
from qflag.rmatrix import DrinfeldPairing, r_operator
from qflag.weightmod import module_map_commutes, simple


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--type", default="A1")
    ap.add_argument("--hw", default="[1]")
    ap.add_argument("--hw2", default=None)
    args = ap.parse_args()
    datum = preset(args.type)
    alg = UAlgebra(datum)
    pairing = DrinfeldPairing(alg)
    v1 = simple(alg, datum.parse_weight(args.hw))
    v2 = simple(alg, datum.parse_weight(args.hw2)) if args.hw2 else v1
    r = r_operator(pairing, v1, v2, "R")
    print(f"R on {v1.name} (x) {v2.name}  [{r.source.dim} x {r.source.dim}]")
    width = max(len(x.to_str()) for row in r.matrix for x in row) + 2
    for row, label in zip(r.matrix, r.source.labels):
        cells = "".join(x.to_str().ljust(width) for x in row)
        print(f"  {cells}   <- {label}")
    rinv = r_operator(pairing, v1, v2, "R-inverse")
    ident = linalg.identity(r.source.dim, datum.l0)
    print("R o R^-1 == id:",
          linalg.mat_eq(linalg.mat_mul(r.matrix, rinv.matrix), ident))
    rc = r_operator(pairing, v1, v2, "R-check")
    print("flip o R is a module map:",
          module_map_commutes(rc.source, rc.target, rc.matrix))
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Anisotropy sweep of the full verification pipeline.

Runs the oracle-versus-determinant comparison on a line of gamma values
for a small twisted chain and writes one CSV row per grid point.  Handy
for eyeballing how far the identities survive toward the degenerate
free-fermion point gamma -> 0.
"""

import argparse
import sys

from sixvertex.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=int, default=3)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--points", type=int, default=7)
    ap.add_argument("--out", default="sweep_anisotropy.csv")
    args = ap.parse_args()

    grid = f"gamma=0.05,0.02:0.95,0.02:{args.points}"
    code = cli_main([
        "sweep",
        "--boundary", "twisted",
        "--L", str(args.L),
        "--n", str(args.n),
        "--seed", str(args.seed),
        "--max-starts", "40",
        "--grid", grid,
        "--out", args.out,
    ])
    if code == 0:
        print(f"wrote {args.out}")
        with open(args.out) as fh:
            for line in fh:
                print("  " + line.rstrip())
    return code


if __name__ == "__main__":
    sys.exit(main())

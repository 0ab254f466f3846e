#!/usr/bin/env python3
"""Regenerate every figure CSV into an output directory.

Example:
    python scripts/reproduce_figures.py --trials 100000 --seed 1 --outdir results
"""

import argparse
import pathlib
import time

from noma_as import reproduce_figure


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--ids", default="1,2,3,4,5,6,7,8",
                        help="comma-separated figure ids")
    args = parser.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for fid in (int(x) for x in args.ids.split(",")):
        started = time.perf_counter()
        path = outdir / f"fig{fid}.csv"
        reproduce_figure(fid, args.trials, args.seed, path)
        print(f"fig{fid}: {path} ({time.perf_counter() - started:.1f}s)")


if __name__ == "__main__":
    main()

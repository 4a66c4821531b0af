#!/usr/bin/env python3
"""Small noise sweep: attack accuracy as the channel gets worse.

Runs the sweep harness over a few SNR points and prints the mean accuracy
per method.  The full CSV with per-frame rows is kept for plotting.  With
the default three trials per point this takes around a minute.
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

from audiojigsaw import SweepSpec, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", default="demo_out/noise_sweep.csv")
    ap.add_argument("--snr-db", type=float, nargs="+", default=[40.0, 25.0, 15.0])
    ap.add_argument("--noise-at", choices=("source", "channel"), default="channel")
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seconds", type=float, default=5.0)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    path = Path(args.csv)
    path.parent.mkdir(parents=True, exist_ok=True)
    spec = SweepSpec(
        frame_sizes=(8,),
        segment_ms_values=(40.0,),
        snr_dbs=tuple(args.snr_db),
        noise_at=args.noise_at,
        trials=args.trials,
        seed=args.seed,
        duration_s=args.seconds,
    )
    sweep(spec, path)

    sums = defaultdict(lambda: [0.0, 0])
    with open(path) as handle:
        for row in csv.DictReader(handle):
            key = (row["method"], float(row["snr_db"]))
            sums[key][0] += float(row["accuracy"])
            sums[key][1] += 1
    print(f"{args.noise_at} noise, {args.trials} trials per point")
    print(f"{'snr_db':>8s} {'puzzle':>8s} {'puzzle+rls':>11s}")
    for snr in sorted(args.snr_db, reverse=True):
        cells = []
        for method in ("puzzle", "puzzle+rls"):
            total, count = sums[(method, snr)]
            cells.append(total / count)
        print(f"{snr:8.0f} {cells[0]:8.3f} {cells[1]:11.3f}")
    print(f"rows in {path}")


if __name__ == "__main__":
    main()

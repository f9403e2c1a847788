#!/usr/bin/env python
"""Tabulate qi/sp regime labels over a (kappa, N_B) grid for a few mode counts."""
import argparse
from collections import Counter
from pathlib import Path

import numpy as np

from qidetect import sweep
from qidetect.bounds import ChannelParams, MarginPolicy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--modes", type=int, nargs="+", default=[1, 10, 100, 1000])
    parser.add_argument("--points", type=int, default=50)
    parser.add_argument("--margin-factor", type=float, default=10.0)
    parser.add_argument("--out", type=Path, default=None, help="write every record as CSV")
    args = parser.parse_args()

    margin = MarginPolicy(args.margin_factor)
    records = []
    for m in args.modes:
        for kappa in np.geomspace(1e-6, 0.1, args.points):
            for nb in np.geomspace(1e-8, 0.1, args.points):
                records.append(sweep.evaluate(ChannelParams(float(kappa), float(nb), m), margin))

    for m in args.modes:
        rows = [r for r in records if r.modes == m]
        counts = Counter((r.qi_regime, r.sp_regime) for r in rows)
        print(f"M={m}")
        for (qi, sp), n in sorted(counts.items()):
            print(f"  qi={qi:<14} sp={sp:<14} {n:6d}")
    if args.out:
        args.out.write_text(sweep.render_csv(records), encoding="utf-8", newline="\n")


if __name__ == "__main__":
    main()

#!/usr/bin/env python
"""Per-shot exponents of every transmitter/receiver pair versus background level."""
import argparse

import numpy as np

from qidetect import sweep
from qidetect.bounds import ChannelParams, MarginPolicy


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kappa", type=float, default=1e-3)
    parser.add_argument("--modes", type=int, default=100)
    parser.add_argument("--nb-min", type=float, default=1e-9)
    parser.add_argument("--nb-max", type=float, default=1e-2)
    parser.add_argument("--count", type=int, default=15)
    args = parser.parse_args()

    spec = sweep.SweepSpec.from_range(
        "n_b", args.nb_min, args.nb_max, args.count, "log", ChannelParams(args.kappa, 0.0, args.modes)
    )
    print(f"{'N_B':>10} {'qi/kappa':>10} {'sp/kappa':>10} {'cs/kappa':>10} {'hom/kappa':>10} {'mv/kappa':>10}  qi regime")
    for rec in sweep.run_sweep(spec, MarginPolicy()):
        cells = []
        for value in (rec.qi_exponent, rec.sp_exponent, rec.cs_exponent, rec.hom_exponent, rec.mv_exponent):
            cells.append(f"{value / rec.kappa:10.4f}" if value is not None else f"{'n/a':>10}")
        print(f"{rec.n_b:10.3g} {' '.join(cells)}  {rec.qi_regime}")


if __name__ == "__main__":
    main()

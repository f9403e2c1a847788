#!/usr/bin/env python
"""Run every closed-form vs numerical-oracle check over a (kappa, N_B) grid."""
import argparse
import itertools

from qidetect import verify
from qidetect.bounds import ChannelParams


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kappas", type=float, nargs="+", default=[0.005, 0.01, 0.02, 0.05])
    parser.add_argument("--noises", type=float, nargs="+", default=[0.0, 0.1, 0.5, 1.0])
    args = parser.parse_args()

    failures = 0
    for kappa, nb in itertools.product(args.kappas, args.noises):
        for c in verify.run_checks(ChannelParams(kappa, nb)):
            failures += not c.passed
            print(f"kappa={kappa:<6g} N_B={nb:<5g} {c.name:<40} delta={c.delta:.2e} "
                  f"tol={c.tolerance:.0e} {'ok' if c.passed else 'FAIL'}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()

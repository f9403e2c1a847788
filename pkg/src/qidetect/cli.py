"""Command-line front end: ``qidetect {bounds,verify,sweep,simulate}``.

Exit status: 0 on success, 1 when a verification or consistency check
fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import receivers, sweep, verify
from .bounds import ChannelParams, MarginPolicy
from .fock import TruncationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return value


def _common(kappa_required: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--kappa", type=float, required=kappa_required, help="coupling (0, 1]")
    p.add_argument("--nb", type=float, default=0.0, help="background photons per mode")
    p.add_argument("--modes", type=int, default=1, help="entangled temporal modes M")
    p.add_argument("--shots", type=int, default=1, help="repeated transmissions N")
    p.add_argument("--margin-factor", type=float, default=10.0, help="x << y means x*factor <= y")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", type=Path, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qidetect", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bounds", parents=[_common()], help="evaluate every bound at one point")

    p = sub.add_parser("verify", parents=[_common()], help="cross-check closed forms against oracles")
    p.add_argument("--trunc-dim", type=int, default=None)
    p.add_argument("--tolerance", type=float, default=None, help="override every check tolerance")

    p = sub.add_parser("sweep", parents=[_common(kappa_required=False)], help="sweep one parameter")
    p.add_argument("--axis", choices=sweep.AXES, required=True)
    p.add_argument("--values", type=str, default=None, help="comma-separated values")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--spacing", choices=("linear", "log"), default="linear")

    p = sub.add_parser("simulate", parents=[_common()], help="Monte Carlo receiver simulation")
    p.add_argument("--scenario", choices=[s.value for s in receivers.Scenario], required=True)
    p.add_argument("--trials", type=_u64, default=1_000_000)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--workers", type=int, default=1)
    return parser


def _params(args, kappa: float | None = None) -> ChannelParams:
    try:
        return ChannelParams(
            kappa=args.kappa if kappa is None else kappa,
            n_b=args.nb,
            modes=args.modes,
            shots=args.shots,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _margin(args) -> MarginPolicy:
    try:
        return MarginPolicy(args.margin_factor)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _na(value, status: str) -> str:
    return f"{value:.6g}" if value is not None else f"n/a ({status})"


def cmd_bounds(args) -> int:
    rec = sweep.evaluate(_params(args), _margin(args))
    if args.format:
        _emit(sweep.render([rec], args.format), args.out)
        return EXIT_OK
    lines = [
        f"kappa={rec.kappa:g} n_b={rec.n_b:g} modes={rec.modes} shots={rec.shots}",
        f"{'system':<10} {'exponent':>14} {'bound':>14}  regime",
    ]
    for system, regime in (("qi", rec.qi_regime), ("sp", rec.sp_regime)):
        exp = getattr(rec, f"{system}_exponent")
        lines.append(
            f"{system:<10} {_na(exp, regime):>14} {_na(rec.bound(system), regime):>14}  {regime}"
        )
    for system, label in (("cs", "cs"), ("hom", "homodyne"), ("mv", "majority")):
        lines.append(
            f"{label:<10} {getattr(rec, f'{system}_exponent'):>14.6g} {rec.bound(system):>14.6g}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    params = _params(args)
    try:
        checks = verify.run_checks(params, args.trunc_dim, args.tolerance)
    except TruncationError as exc:
        hint = f"; try --trunc-dim {exc.suggested_dim}" if exc.suggested_dim else ""
        raise UsageError(f"{exc}{hint}") from exc
    ok = all(c.passed for c in checks)
    if args.format == "json":
        payload = [dict(asdict(c), passed=c.passed) for c in checks]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = []
        for c in checks:
            kind = "rel" if c.relative else "abs"
            lines.append(
                f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: closed={c.closed_form:.12g} "
                f"oracle={c.oracle:.12g} {kind} delta={c.delta:.3e} (tol {c.tolerance:.1e})"
            )
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    fixed_kappa = args.kappa
    if fixed_kappa is None:
        if args.axis != "kappa":
            raise UsageError("--kappa is required unless sweeping kappa")
        fixed_kappa = 1.0  # placeholder, replaced on every point
    fixed = _params(args, fixed_kappa)
    try:
        if args.values is not None:
            values = [float(v) for v in args.values.split(",") if v.strip()]
            spec = sweep.SweepSpec(args.axis, tuple(values), fixed)
        else:
            if None in (args.start, args.stop, args.count):
                raise UsageError("give --values or all of --start/--stop/--count")
            spec = sweep.SweepSpec.from_range(
                args.axis, args.start, args.stop, args.count, args.spacing, fixed
            )
        records = sweep.run_sweep(spec, _margin(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(sweep.render(records, args.format or "csv"), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = _params(args)
    try:
        stats = receivers.monte_carlo(args.scenario, params, args.trials, args.seed, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    exact = receivers.exact_error(args.scenario, params)
    consistent = stats.consistent_with(exact)
    row = {
        "scenario": args.scenario,
        **asdict(params),
        **asdict(stats),
        "exact": exact,
        "consistent": consistent,
    }
    if args.format == "csv":
        keys = list(row)
        text = ",".join(keys) + "\n" + ",".join(
            sweep.fmt(v) if isinstance(v, float) else str(v).lower() if isinstance(v, bool) else str(v)
            for v in row.values()
        ) + "\n"
    else:
        text = json.dumps(row, indent=2) + "\n"
    if args.out is not None or args.format:
        _emit(text, args.out)
    sys.stdout.write(
        f"{args.scenario}: {stats.errors}/{stats.trials} errors, rate={stats.error_rate:.6g} "
        f"+/- {stats.ci_halfwidth_3sigma:.2g} (3 sigma), exact={exact:.6g} "
        f"-> {'PASS' if consistent else 'FAIL'}\n"
    )
    return EXIT_OK if consistent else EXIT_FAIL


COMMANDS = {"bounds": cmd_bounds, "verify": cmd_verify, "sweep": cmd_sweep, "simulate": cmd_simulate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qidetect {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

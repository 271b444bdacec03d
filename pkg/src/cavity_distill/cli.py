"""Command line: ``cavity-distill {run,sweep,verify}``."""
from __future__ import annotations

import argparse
import sys

from .sweep import MODES, PROTOCOLS, Axis, SpecError, SweepSpec, sweep, write
from .verification import verify

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 2, 3

_PARAMS = ("alpha", "f0", "g_over_kappa", "delta_over_kappa", "big_delta_over_kappa",
           "gamma_over_kappa", "rounds", "parties")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--protocol", choices=PROTOCOLS, required=True)
    p.add_argument("--mode", choices=MODES, default="ideal")
    p.add_argument("--alpha", type=float, help="smaller input amplitude (ECPs)")
    p.add_argument("--f0", type=float, help="initial fidelity (EPP)")
    p.add_argument("--g-over-kappa", type=float)
    p.add_argument("--delta-over-kappa", type=float, help="photon-cavity detuning delta'/kappa")
    p.add_argument("--big-delta-over-kappa", type=float, help="cavity-dipole detuning Delta/kappa")
    p.add_argument("--gamma-over-kappa", type=float)
    p.add_argument("--rounds", type=int)
    p.add_argument("--parties", type=int, help="number of ensembles for ghz-ecp")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (stdout if omitted)")
    p.add_argument("--shots", type=int, help="add a finite-shot success estimate")
    p.add_argument("--seed", type=int, help="seed for --shots sampling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-distill",
        description="Entanglement distillation with cavity-coupled atomic ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="evaluate one parameter point")
    _add_common(p_run)
    p_sweep = sub.add_parser("sweep", help="evaluate a cartesian parameter grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", action="append", default=[], metavar="NAME:START:STOP:STEPS")
    p_sweep.add_argument("--workers", type=int, default=1)
    sub.add_parser("verify", help="run the self-check suite")
    return parser


def _spec(args, axes=()) -> SweepSpec:
    fixed = {k: getattr(args, k) for k in _PARAMS if getattr(args, k) is not None}
    if args.seed is not None and args.shots is None:
        raise SpecError("--seed only applies together with --shots")
    return SweepSpec(args.protocol, args.mode, tuple(axes), fixed, args.shots, args.seed)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return EXIT_OK if verify() else EXIT_VERIFY
    try:
        if args.command == "run":
            spec = _spec(args)
            rows = sweep(spec)
        else:
            spec = _spec(args, [Axis.parse(a) for a in args.axis])
            rows = sweep(spec, workers=args.workers)
        text = write(rows, args.format)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return EXIT_OK

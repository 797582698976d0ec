"""Command-line entry point.

Exit codes: 0 when every report flag passes, 1 when any flag fails (or a replay
mismatches), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import compression
from .core import ConfigurationError
from .harness import DEFAULTS, ExperimentConfig, load_config, replay_trial, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothlab",
        description="Run smoothed online classification experiments from JSON configs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, kind in (
        ("run-regret", "regret"),
        ("run-pac-curve", "pac_curve"),
        ("run-sufficiency", "sufficiency"),
        ("entropy-suite", "entropy_suite"),
    ):
        p = sub.add_parser(name, help=f"run a {kind} experiment")
        if name == "entropy-suite":
            p.add_argument("--config", help="optional JSON config path")
        else:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, help="override the config's base seed")
        p.add_argument("--trials", type=int, help="override the config's trial count")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.set_defaults(kind=kind)

    p = sub.add_parser("verify-compression", help="round-trip the size-1 compression scheme")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-points", type=int, default=50)
    p.add_argument("--max-anchor", type=int, default=20)

    p = sub.add_parser("replay", help="re-run one serialized trial bit-exactly")
    p.add_argument("--report", required=True, help="path to a report.json with saved bundles")
    p.add_argument("--trial", type=int, required=True)

    return parser


def _load_experiment(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        if cfg.kind != args.kind:
            raise ConfigurationError(
                f"config field 'kind': {cfg.kind!r} does not match subcommand ({args.kind!r})"
            )
    elif args.kind == "entropy_suite":
        cfg = ExperimentConfig.from_dict({"kind": "entropy_suite"})
    else:
        raise ConfigurationError("config: --config is required")
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.raw["seed"] = args.seed
    if args.trials is not None:
        cfg.trials = args.trials
        cfg.raw["trials"] = args.trials
    return cfg


def parse_and_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code not in (0, None) else 0

    try:
        if args.command == "verify-compression":
            rng = np.random.default_rng(args.seed)
            violations = compression.verify_roundtrips(
                args.trials, rng, max_points=args.max_points, max_anchor=args.max_anchor
            )
            print(f"verify-compression: {args.trials} samples, {violations} round-trip failures")
            return 0 if violations == 0 else 1

        if args.command == "replay":
            matches, stored, fresh = replay_trial(args.report, args.trial)
            status = "bit-exact" if matches else "MISMATCH"
            print(f"replay trial {args.trial}: {status}")
            if not matches:
                print(f"  stored: {stored}")
                print(f"  replay: {fresh}")
            return 0 if matches else 1

        cfg = _load_experiment(args)
        report = run_experiment(cfg, outdir=args.out)
        for flag in report.flags:
            mark = "PASS" if flag.passed else "FAIL"
            print(f"[{mark}] {flag.tag}: observed {flag.observed:.6g} "
                  f"vs threshold {flag.threshold:.6g} {flag.detail}")
        print(f"report written to {args.out}/report.json")
        return 0 if report.passed else 1
    except ConfigurationError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command line: ``decaylab run | sweep | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .experiment import ExperimentConfig
from .harness import ExperimentError, run_experiment, run_sweep, sweep_configs
from .verification import SUITES, format_result, run_suite

# flag name -> config field
_FLAGS = {
    "alpha": float,
    "dim": int,
    "gamma": float,
    "r_inner": float,
    "t0": float,
    "t_final": float,
    "dr": float,
    "dt": float,
    "ic": str,
    "samples": int,
    "order": int,
    "out": str,
}


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key=value file; flags given here win")
    for name, typ in _FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None)
    p.add_argument("--no-heat", dest="heat", action="store_false", default=None,
                   help="skip the comparison heat flow (D columns become nan)")


def _flag_overrides(args: argparse.Namespace) -> dict:
    return {k: getattr(args, k) for k in (*_FLAGS, "heat") if getattr(args, k, None) is not None}


def config_from_args(args: argparse.Namespace, path: Path | None = None) -> ExperimentConfig:
    """Config file (``path`` or ``--config``) overlaid with the explicit flags."""
    path = path or args.config
    base = ExperimentConfig.from_file(path) if path else ExperimentConfig()
    return base.replace(**_flag_overrides(args))


def _parse_grid(items: list[str]) -> dict[str, list[str]]:
    grid = {}
    for item in items:
        key, sep, values = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"--grid expects key=v1,v2,..., got {item!r}")
        grid[key.strip().replace("-", "_")] = [v.strip() for v in values.split(",") if v.strip()]
    return grid


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decaylab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment and write its report files")
    _add_config_flags(run)
    run.add_argument("--checkpoints", action="store_true", help="also write (r, u, ut) and (r, v) CSVs per sample")

    sweep = sub.add_parser("sweep", help="run a parameter grid or several config files in parallel")
    _add_config_flags(sweep)
    sweep.add_argument("configs", nargs="*", type=Path, help="config files, one experiment each")
    sweep.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                       help="vary a config field; repeat for a cartesian product")
    sweep.add_argument("--workers", type=int, default=None, help="default: DECAYLAB_THREADS or CPU count")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=[*SUITES, "all"])
    verify.add_argument("--json", action="store_true", help="one JSON object per check")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "verify":
        def emit(res):
            print(json.dumps(asdict(res)) if args.json else format_result(res), flush=True)
        results = run_suite(args.suite, on_result=emit)
        failed = [r.name for r in results if not r.passed]
        if not args.json:
            print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 1 if failed else 0

    try:
        base = config_from_args(args)
        if args.command == "run":
            out = run_experiment(base.validate(), checkpoints=args.checkpoints)
            print(out / "summary.txt")
            print((out / "summary.txt").read_text(), end="")
            return 0
        configs = [config_from_args(args, p).replace(out=str(Path(base.out) / p.stem)) for p in args.configs]
        if args.grid:
            configs += sweep_configs(base, _parse_grid(args.grid))
        if not configs:
            parser.error("sweep needs config files or at least one --grid")
        for out in run_sweep(configs, args.workers):
            print(out)
        return 0
    except (ValueError, ExperimentError) as exc:
        print(f"decaylab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

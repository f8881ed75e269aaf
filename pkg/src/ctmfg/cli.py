"""Command-line interface.

Exit codes: 0 success (including non-converged solves), 2 configuration
errors, 3 numeric failures.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError, SolverError
from .runner import gap_report, run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctmfg",
        description="Entropy-regularized equilibria for continuous-time finite-state mean field games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the experiment described by a config file")
    run_p.add_argument("config", help="TOML config file")
    run_p.add_argument("--out", help="output directory (overrides output.directory)")
    run_p.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config override, e.g. solver.alpha=0.5 (repeatable)",
    )

    gap_p = sub.add_parser("gap", help="recompute equilibrium distances for a stored policy")
    gap_p.add_argument("config", help="TOML config file naming the game and grid")
    gap_p.add_argument("--policy", required=True, help="policy CSV (k,x,u,prob)")
    gap_p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = load_config(args.config, overrides=args.override, out_dir=args.out)
            return run(config)
        config = load_config(args.config, overrides=args.override)
        for line in gap_report(config, args.policy):
            print(line)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Left-right benchmark: convergence traces of FP and FPI at alpha 1.0 and 0.1.

Emits one *_trace.csv per (solver, temperature); plot delta_j_re against k to
see FPI oscillate at alpha 0.1 while FP converges.
"""

import argparse
from pathlib import Path

from ctmfg.cli import main as cli_main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/left_right")
    args = parser.parse_args()
    for config in ("left_right_fp.toml", "left_right_fpi.toml"):
        status = cli_main(["run", str(CONFIGS / config), "--out", args.out])
        if status != 0:
            return status
    print(f"traces written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

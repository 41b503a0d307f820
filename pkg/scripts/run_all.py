#!/usr/bin/env python3
"""Run the three benchmark experiments on the reference scenario.

Produces the spectrum dump, the asymptotic bias scan and the Monte Carlo
RMSE sweep in one go, each into its own subdirectory of --out.  The RMSE
sweep is the slow part: use --fast for a 500-trial smoke run.
"""

import argparse
import dataclasses
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tomoments import default_spec, run_experiment
from tomoments.experiments import FAST_TRIALS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("out"), help="output root directory")
    parser.add_argument("--seed", type=int, default=0, help="master seed for the RMSE sweep")
    parser.add_argument("--fast", action="store_true", help=f"run {FAST_TRIALS} trials instead of the default")
    parser.add_argument("--workers", type=int, default=1, help="trial-level process pool size")
    parser.add_argument("--no-timestamp", action="store_true", help="omit timestamped CSV headers")
    args = parser.parse_args(argv)

    for kind, name in (
        ("spectrum_dump", "spectrum"),
        ("asymptotic_bias_vs_sigma", "bias"),
        ("rmse_vs_N", "rmse"),
    ):
        spec = default_spec(
            kind,
            master_seed=args.seed,
            output_dir=str(args.out / name),
            workers=args.workers,
            timestamp_header=not args.no_timestamp,
        )
        if args.fast and kind == "rmse_vs_N":
            spec = dataclasses.replace(spec, trials=FAST_TRIALS)
        start = time.perf_counter()
        result = run_experiment(spec)
        elapsed = time.perf_counter() - start
        print(f"{name}: {elapsed:.1f} s")
        for path in result.files.values():
            print(f"  wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

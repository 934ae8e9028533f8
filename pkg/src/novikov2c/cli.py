"""Command-line driver for the experiment suite.

    novikov2c <experiment> [--config cfg.json] [--out DIR]
                           [--n-min N] [--n-max N]
                           [--grid-points N] [--half-width L]
                           [--s S] [--p P] [--r R]

Experiments: partition-check, norms, prop1, prop2, theorem, all.  Each run
writes <out>/<experiment>.csv and <out>/<experiment>.json and prints one
PASS/FAIL line per criterion; the exit code is 0 iff every criterion passed.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    ExperimentConfig,
    run_all,
    run_initial_norms,
    run_partition_check,
    run_prop1,
    run_prop2,
    run_theorem,
    write_outputs,
)

_RUNNERS = {
    "partition-check": run_partition_check,
    "norms": run_initial_norms,
    "prop1": run_prop1,
    "prop2": run_prop2,
    "theorem": run_theorem,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novikov2c",
        description="Pseudospectral experiments for the two-component "
                    "Novikov system in Besov spaces.",
    )
    parser.add_argument("experiment",
                        choices=sorted(_RUNNERS) + ["all"],
                        help="which experiment to run")
    parser.add_argument("--config", help="JSON file with ExperimentConfig fields")
    parser.add_argument("--out", help="output directory (default: results)")
    parser.add_argument("--n-min", type=int, dest="n_min")
    parser.add_argument("--n-max", type=int, dest="n_max")
    parser.add_argument("--grid-points", type=int, dest="n_points")
    parser.add_argument("--half-width", type=float, dest="half_width")
    parser.add_argument("--s", type=float, dest="s")
    parser.add_argument("--p", type=float, dest="p")
    parser.add_argument("--r", type=float, dest="r")
    return parser


def config_from_args(args) -> ExperimentConfig:
    base = (ExperimentConfig.from_json(args.config) if args.config
            else ExperimentConfig())
    return base.merged(
        out_dir=args.out,
        n_min=args.n_min,
        n_max=args.n_max,
        n_points=args.n_points,
        half_width=args.half_width,
        s=args.s,
        p=args.p,
        r=args.r,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)

    if args.experiment == "all":
        results = run_all(config)
    else:
        results = [_RUNNERS[args.experiment](config)]

    ok = True
    for result in results:
        write_outputs(result, config)
        for c in result.criteria:
            verdict = "PASS" if c.passed else "FAIL"
            print(f"[{verdict}] {result.name}/{c.name}: value={c.value:.6g} "
                  f"threshold={c.threshold:.6g} ({c.kind})")
        for flag in result.flags:
            print(f"[FLAG] {result.name}: {flag}")
        ok &= result.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line driver: render the standard figure set for a results dir.

    figures --in results --out plots [--format svg|png]

Expects prop1.csv/prop1.json and theorem.csv/theorem.json as written by the
experiment harness and produces four figures: the data-approximation rate,
the initial-distance rate, the divergence-vs-time curves, and the
drift-constant convergence plot.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .render import FigureSpec, render


def standard_specs(in_dir: str, out_dir: str, fmt: str) -> list:
    def fit_value(doc, *keys, default=None):
        node = doc
        for key in keys:
            if not isinstance(node, dict) or key not in node:
                return default
            node = node[key]
        return node

    with open(os.path.join(in_dir, "prop1.json")) as fh:
        prop1_doc = json.load(fh)
    with open(os.path.join(in_dir, "theorem.json")) as fh:
        theorem_doc = json.load(fh)

    prop1_csv = os.path.join(in_dir, "prop1.csv")
    theorem_csv = os.path.join(in_dir, "theorem.csv")
    rconst = fit_value(theorem_doc, "fits", "riemann_constant")

    return [
        FigureSpec(
            csv_path=prop1_csv,
            kind="rate",
            out_path=os.path.join(out_dir, f"rate_prop1.{fmt}"),
            y_column="err_sum",
            reference_slope=fit_value(prop1_doc, "fits", "reference_slope"),
            x_label="frequency index n",
            y_label="log2 sup_t distance from data",
            title="solution stays near high-frequency data",
        ),
        FigureSpec(
            csv_path=theorem_csv,
            kind="rate",
            out_path=os.path.join(out_dir, f"rate_initial_distance.{fmt}"),
            y_column="dist0_sum",
            reference_slope=fit_value(theorem_doc, "fits",
                                      "reference_slope_initial"),
            x_label="frequency index n",
            y_label="log2 initial pair distance",
            title="initial data merge",
        ),
        FigureSpec(
            csv_path=theorem_csv,
            kind="divergence",
            out_path=os.path.join(out_dir, f"divergence_theorem.{fmt}"),
            y_column="dist_rho",
            guide_constant=rconst,
            x_label="time t",
            y_label="density distance in B^{s-1}",
            title="solutions separate linearly in time",
        ),
        FigureSpec(
            csv_path=theorem_csv,
            kind="constant",
            out_path=os.path.join(out_dir, f"constant_theorem.{fmt}"),
            guide_constant=rconst,
            x_label="frequency index n",
            y_label="drift norm in B^{s-1}",
            title="drift norm approaches the limit constant",
        ),
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render the standard novikov2c figure set from "
                    "experiment CSV/JSON outputs.",
    )
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory with <experiment>.csv/.json files")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory to write images to")
    parser.add_argument("--format", choices=("svg", "png"), default="svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    os.makedirs(args.out_dir, exist_ok=True)
    try:
        specs = standard_specs(args.in_dir, args.out_dir, args.format)
    except FileNotFoundError as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    for spec in specs:
        try:
            path = render(spec)
        except ValueError as exc:
            print(f"figures: {exc}", file=sys.stderr)
            return 1
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

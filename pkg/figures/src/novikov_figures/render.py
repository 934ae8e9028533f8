"""Render the standard figure set from experiment CSV/JSON outputs.

Three plot kinds:

- ``rate``: log2(error) against the frequency index n, the least-squares fit,
  and a dashed reference-slope guide.
- ``divergence``: solution distance against time, one curve per n, with a
  dashed guide line of slope equal to the drift constant.
- ``constant``: the drift norm and its single-block main term against n with
  the limiting constant as a horizontal guide.

Rendering only reads the input files; outputs are byte-stable for a fixed
style seed (SVG hash salt pinned, no date metadata).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["FigureSpec", "render", "read_table"]

STYLE_SEED = "novikov2c-figures"

plt.rcParams["svg.hashsalt"] = STYLE_SEED


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input table, plot kind, output path, and guides.

    y_column selects the error column for ``rate`` / the distance column for
    ``divergence``; reference_slope draws the dashed rate guide;
    guide_constant is the drift constant used by ``divergence`` (slope) and
    ``constant`` (horizontal line).
    """

    csv_path: str
    kind: str  # 'rate' | 'divergence' | 'constant'
    out_path: str
    y_column: str = ""
    reference_slope: float | None = None
    guide_constant: float | None = None
    x_label: str = ""
    y_label: str = ""
    title: str = ""


def read_table(path) -> dict:
    """Parse a harness CSV into {column: float list}; needs >= 2 data rows."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header, data = rows[0], rows[1:]
    if len(data) < 2:
        raise ValueError(f"{path}: need at least 2 data rows, got {len(data)}")
    table = {name: [] for name in header}
    for row in data:
        for name, value in zip(header, row):
            table[name].append(float(value))
    return table


def _require(table: dict, columns, path) -> None:
    missing = [c for c in columns if c not in table]
    if missing:
        raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")


def _per_n_max(table: dict, column: str) -> tuple:
    """Collapse per-(n, t) rows to the per-n maximum of a column."""
    acc = {}
    for n, v in zip(table["n"], table[column]):
        acc[n] = max(acc.get(n, -math.inf), v)
    ns = sorted(acc)
    return np.array(ns), np.array([acc[n] for n in ns])


def _new_axes(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(5.4, 3.8), dpi=120)
    if spec.x_label:
        ax.set_xlabel(spec.x_label)
    if spec.y_label:
        ax.set_ylabel(spec.y_label)
    if spec.title:
        ax.set_title(spec.title)
    return fig, ax


def _save(fig, spec: FigureSpec) -> str:
    fig.tight_layout()
    metadata = {"Date": None} if spec.out_path.endswith(".svg") else None
    fig.savefig(spec.out_path, metadata=metadata)
    plt.close(fig)
    return spec.out_path


def _render_rate(spec: FigureSpec, table: dict) -> str:
    _require(table, ["n", spec.y_column], spec.csv_path)
    ns, errs = _per_n_max(table, spec.y_column)
    if np.any(errs <= 0):
        raise ValueError(f"{spec.csv_path}: column {spec.y_column} must be "
                         "positive for a rate plot")
    logs = np.log2(errs)
    slope, intercept = np.polyfit(ns, logs, 1)

    fig, ax = _new_axes(spec)
    ax.plot(ns, logs, "o", color="#1f5fa8", label="measured")
    ax.plot(ns, slope * ns + intercept, "-", color="#1f5fa8",
            label=f"fit: slope {slope:.2f}")
    if spec.reference_slope is not None:
        anchor = logs[0] - spec.reference_slope * ns[0]
        ax.plot(ns, spec.reference_slope * ns + anchor, "--", color="#777777",
                label=f"reference slope {spec.reference_slope:.2f}")
    ax.set_xticks(ns)
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, spec)


def _render_divergence(spec: FigureSpec, table: dict) -> str:
    y = spec.y_column or "dist_rho"
    _require(table, ["n", "t", y], spec.csv_path)
    ns = sorted(set(table["n"]))
    fig, ax = _new_axes(spec)
    cmap = plt.get_cmap("viridis")
    for i, n in enumerate(ns):
        ts = [t for nn, t in zip(table["n"], table["t"]) if nn == n]
        vals = [v for nn, v in zip(table["n"], table[y]) if nn == n]
        order = np.argsort(ts)
        ax.plot(np.asarray(ts)[order], np.asarray(vals)[order], "o-",
                color=cmap(0.15 + 0.7 * i / max(len(ns) - 1, 1)),
                label=f"n = {int(n)}", markersize=3.5)
    if spec.guide_constant is not None:
        ts = np.array(sorted(set(table["t"])))
        ax.plot(ts, spec.guide_constant * ts, "--", color="#777777",
                label="drift-constant slope")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, spec)


def _render_constant(spec: FigureSpec, table: dict) -> str:
    _require(table, ["n", "main_term", "drift_rho_norm"], spec.csv_path)
    ns, main = _per_n_max(table, "main_term")
    _, drift = _per_n_max(table, "drift_rho_norm")
    fig, ax = _new_axes(spec)
    ax.plot(ns, main, "o-", color="#1f5fa8", label="single-block main term")
    ax.plot(ns, drift, "s-", color="#b0521f", label="full drift norm")
    if spec.guide_constant is not None:
        ax.axhline(spec.guide_constant, linestyle="--", color="#777777",
                   label="limit constant")
    ax.set_xticks(ns)
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, spec)


_RENDERERS = {
    "rate": _render_rate,
    "divergence": _render_divergence,
    "constant": _render_constant,
}


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the output path.

    Raises ValueError (naming the column) for malformed input and writes no
    file in that case.
    """
    if spec.kind not in _RENDERERS:
        raise ValueError(f"unknown plot kind {spec.kind!r}; "
                         f"expected one of {sorted(_RENDERERS)}")
    table = read_table(spec.csv_path)
    return _RENDERERS[spec.kind](spec, table)

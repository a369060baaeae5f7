"""Render publication-style figures from depref CSV files.

Four plot kinds:
  lambda_vs_alpha  -- lambda_sweep.csv: one curve per delta
  lambda_vs_delta  -- lambda_sweep.csv: one curve per alpha
  degree_dist      -- degree_dist.csv: empirical bars on log-y with the
                      theoretical p_k overlaid for every plotted k
  convergence      -- any CSV whose first column is n: every other
                      column traced against n on a log-x axis

render() returns a RenderResult carrying the plotted curve data, so
tests assert data properties (curve counts, monotonicity) instead of
pixels; figures themselves are regenerated artifacts.
"""
import warnings
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .data import SchemaError, group_curves, load_csv, require_columns

KINDS = ("lambda_vs_alpha", "lambda_vs_delta", "degree_dist", "convergence")

# fixed style so identical inputs give identical figure content
STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "depref-plots",
    "legend.fontsize": 9,
}


@dataclass
class PlotSpec:
    kind: str
    inputs: tuple
    output: str
    title: str = ""
    logy: bool = None  # default decided per kind

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass
class RenderResult:
    output: str            # written path, or "" when the plot was skipped
    curves: dict = field(default_factory=dict)   # label -> (x, y)
    overlay: dict = field(default_factory=dict)  # label -> (x, y) theory points
    skipped: bool = False


def render(spec):
    """Render one figure; read-only over its inputs."""
    with plt.rc_context(STYLE):
        if spec.kind == "lambda_vs_alpha":
            return _render_lambda(spec, x_col="alpha", by_col="delta")
        if spec.kind == "lambda_vs_delta":
            return _render_lambda(spec, x_col="delta", by_col="alpha")
        if spec.kind == "degree_dist":
            return _render_degree_dist(spec)
        return _render_convergence(spec)


def _render_lambda(spec, x_col, by_col):
    path = spec.inputs[0]
    cols = require_columns(load_csv(path), ("alpha", "delta", "lambda_star"), path)
    curves = group_curves(cols, x_col, "lambda_star", by_col)
    fig, ax = plt.subplots()
    result = RenderResult(output=spec.output)
    for val, (x, y) in sorted(curves.items()):
        label = f"{by_col}={val:g}"
        ax.plot(x, y, marker="o", label=label)
        result.curves[label] = (x, y)
    ax.set_xlabel(x_col)
    ax.set_ylabel("lambda*")
    ax.set_title(spec.title or f"Malthusian root vs {x_col}")
    ax.legend()
    fig.savefig(spec.output)
    plt.close(fig)
    return result


def _render_degree_dist(spec):
    path = spec.inputs[0]
    cols = require_columns(load_csv(path), ("k", "P_k", "limit_pk"), path)
    k = cols["k"]
    emp = cols["P_k"]
    theory = cols["limit_pk"]
    fig, ax = plt.subplots()
    ax.bar(k, emp, width=0.8, alpha=0.6, label="empirical P_k")
    keep = theory > 0
    ax.plot(k[keep], theory[keep], "k_", markersize=12, label="limit p_k")
    if spec.logy is not False:
        ax.set_yscale("log")
    ax.set_xlabel("degree k")
    ax.set_ylabel("fraction of vertices")
    ax.set_title(spec.title or "degree distribution")
    ax.legend()
    fig.savefig(spec.output)
    plt.close(fig)
    result = RenderResult(output=spec.output)
    result.curves["empirical"] = (k, emp)
    result.overlay["limit"] = (k[keep], theory[keep])
    return result


def _render_convergence(spec):
    series = []
    for path in spec.inputs:
        cols = load_csv(path)
        if not cols or all(len(v) == 0 for v in cols.values()):
            warnings.warn(f"{path}: empty convergence CSV, plot skipped")
            continue
        names = list(cols)
        if names[0] != "n":
            raise SchemaError(f"{path}: convergence CSVs start with column 'n' (has {names})")
        for name in names[1:]:
            series.append((f"{name}", cols["n"], cols[name]))
    result = RenderResult(output=spec.output)
    if not series:
        result.skipped = True
        result.output = ""
        return result
    fig, ax = plt.subplots()
    for label, x, y in series:
        ax.plot(x, y, marker=".", label=label)
        result.curves[label] = (x, y)
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_title(spec.title or "convergence traces")
    ax.legend()
    fig.savefig(spec.output)
    plt.close(fig)
    return result

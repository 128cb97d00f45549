"""Build and save the three comparison panels.

Style is pinned (colors, geometry, no timestamps) so rendering the same run
directory twice produces byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .loader import Curve, aggregate, scan_run_dir

COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")
FIGSIZE = (6.4, 4.4)
DPI = 110

# svg element ids are salted hashes; a fixed salt keeps re-renders identical
_SVG_SALT = "mdvne-plots"


@dataclass(frozen=True)
class Panel:
    metric: str
    title: str
    filename: str


PANELS = (
    Panel("mean_cost", "Embedding cost", "cost"),
    Panel("mean_delay", "Network delay", "delay"),
    Panel("acceptance_rate", "Request acceptance rate", "acceptance"),
)


def build_figure(panel: Panel, curves: list[Curve]) -> Figure:
    """One panel: a mean curve per algorithm with a shaded CI band.

    Single-seed curves get no band (their CI is identically zero).
    """
    fig = Figure(figsize=FIGSIZE, dpi=DPI)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    for i, curve in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        ys = curve.mean[panel.metric]
        ax.plot(curve.arrivals, ys, color=color, linewidth=1.8, label=curve.label)
        if curve.seeds > 1:
            err = curve.ci95[panel.metric]
            lo = [y - e for y, e in zip(ys, err)]
            hi = [y + e for y, e in zip(ys, err)]
            ax.fill_between(curve.arrivals, lo, hi,
                            color=color, alpha=0.18, linewidth=0)
    # arrivals count, not wall-clock time: every run samples once per
    # arrival, so seeds line up exactly on this axis
    ax.set_xlabel("cumulative arrivals")
    ax.set_ylabel(panel.metric)
    ax.set_title(panel.title)
    if panel.metric == "acceptance_rate":
        ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    if curves:
        ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return fig


def save_figure(fig: Figure, path) -> None:
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower()
    if fmt == "svg":
        with matplotlib.rc_context({"svg.hashsalt": _SVG_SALT}):
            fig.savefig(path, format="svg", metadata={"Date": None})
    elif fmt == "png":
        fig.savefig(path, format="png")
    else:
        raise ValueError(f"unsupported format {fmt!r}")


def render(run_dir, out_dir, fmt: str = "png") -> list[Path]:
    """Read a run directory and write cost/delay/acceptance panels.

    Returns the written paths in panel order.
    """
    groups = scan_run_dir(run_dir)
    curves = [aggregate(records) for records in groups]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for panel in PANELS:
        fig = build_figure(panel, curves)
        path = out / f"{panel.filename}.{fmt}"
        save_figure(fig, path)
        written.append(path)
    return written

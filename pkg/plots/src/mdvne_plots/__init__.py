"""Offline chart generator for simulator run directories.

Reads the per-seed metric CSVs and summary.json that `mdvne run` leaves in
its output directory and renders one comparison panel per metric. This
package talks to the simulator only through those files; it never imports
it, so either side can be installed without the other.
"""

from .loader import ColumnError, LoaderError, RunRecord, aggregate, load_csv, scan_run_dir
from .render import PANELS, build_figure, render

__all__ = [
    "ColumnError",
    "LoaderError",
    "RunRecord",
    "aggregate",
    "load_csv",
    "scan_run_dir",
    "PANELS",
    "build_figure",
    "render",
]

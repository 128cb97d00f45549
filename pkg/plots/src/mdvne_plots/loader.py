"""Parse and aggregate the metric CSVs a run directory contains.

One CSV per (algorithm, seed), sampled once per request arrival, with the
fixed column set in REQUIRED_COLUMNS. summary.json, when present, names the
files and carries the legend labels; without it the *_seed*.csv naming
convention is enough to group runs.
"""

from __future__ import annotations

import json
import math
import re
import statistics
from dataclasses import dataclass
from pathlib import Path

REQUIRED_COLUMNS = ("time", "arrivals", "acceptances", "acceptance_rate",
                    "mean_cost", "mean_delay", "cpu_util", "bw_util")

# everything plottable against the arrivals axis
METRIC_COLUMNS = tuple(c for c in REQUIRED_COLUMNS if c not in ("time", "arrivals"))

_FILE_RE = re.compile(r"^(?P<algo>[A-Za-z0-9]+)_seed(?P<seed>\d+)\.csv$")


class LoaderError(ValueError):
    """Run directory contents cannot be plotted as-is."""


class ColumnError(LoaderError):
    """A required column is missing or holds an unparsable value."""


@dataclass(frozen=True)
class RunRecord:
    """One parsed CSV: a single seeded run of a single algorithm."""

    algorithm: str
    seed: int
    columns: dict[str, tuple[float, ...]]

    def __len__(self) -> int:
        return len(self.columns["time"])


@dataclass(frozen=True)
class Curve:
    """Per-algorithm mean and half-width of the 95% CI over seeds."""

    label: str
    arrivals: tuple[float, ...]
    mean: dict[str, tuple[float, ...]]
    ci95: dict[str, tuple[float, ...]]
    seeds: int


def load_csv(path, algorithm: str, seed: int) -> RunRecord:
    """Read one run CSV, checking schema and row ordering."""
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise ColumnError(f"{path.name}: missing required column 'time' (file is empty)")
    header = lines[0].split(",")
    index = {}
    for col in REQUIRED_COLUMNS:
        if col not in header:
            raise ColumnError(f"{path.name}: missing required column {col!r}")
        index[col] = header.index(col)

    rows: list[list[float]] = [[] for _ in REQUIRED_COLUMNS]
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            if len(fields) < len(header):
                missing = header[len(fields)]
                raise ColumnError(
                    f"{path.name}, line {lineno}: no value for column {missing!r}")
            raise ColumnError(
                f"{path.name}, line {lineno}: {len(fields)} fields for "
                f"{len(header)} columns")
        for slot, col in enumerate(REQUIRED_COLUMNS):
            raw = fields[index[col]]
            try:
                value = float(raw)
            except ValueError:
                raise ColumnError(
                    f"{path.name}, line {lineno}: bad value for column "
                    f"{col!r}: {raw!r}") from None
            if not math.isfinite(value):
                raise ColumnError(
                    f"{path.name}, line {lineno}: bad value for column "
                    f"{col!r}: {raw!r}")
            rows[slot].append(value)

    columns = {col: tuple(rows[slot]) for slot, col in enumerate(REQUIRED_COLUMNS)}
    times = columns["time"]
    for i in range(1, len(times)):
        if times[i] < times[i - 1]:
            raise LoaderError(f"{path.name}, line {i + 2}: rows not time-ordered")
    arrivals = columns["arrivals"]
    for i in range(1, len(arrivals)):
        if arrivals[i] <= arrivals[i - 1]:
            raise LoaderError(
                f"{path.name}, line {i + 2}: arrivals column must increase")
    return RunRecord(algorithm=algorithm, seed=seed, columns=columns)


def scan_run_dir(run_dir) -> list[list[RunRecord]]:
    """Group the directory's runs by algorithm, one record list each.

    Order follows summary.json when it exists, otherwise sorted algorithm
    prefixes of the file names.
    """
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise LoaderError(f"{run_dir}: not a directory")
    summary = run_dir / "summary.json"
    groups: list[list[RunRecord]] = []
    if summary.is_file():
        try:
            data = json.loads(summary.read_text())
        except json.JSONDecodeError as exc:
            raise LoaderError(f"{summary.name}: not valid JSON ({exc})") from None
        algos = data.get("algorithms")
        if not isinstance(algos, dict) or not algos:
            raise LoaderError(f"{summary.name}: no algorithm entries")
        for key, block in algos.items():
            label = block.get("label", key)
            seeds = block.get("seeds", [])
            files = block.get("files", [])
            if not files:
                raise LoaderError(f"{summary.name}: algorithm {key!r} lists no files")
            if len(seeds) != len(files):
                raise LoaderError(
                    f"{summary.name}: algorithm {key!r} lists {len(seeds)} seeds "
                    f"but {len(files)} files")
            groups.append([load_csv(run_dir / name, label, int(seed))
                           for seed, name in zip(seeds, files)])
    else:
        found: dict[str, list[tuple[int, Path]]] = {}
        for path in sorted(run_dir.iterdir()):
            match = _FILE_RE.match(path.name)
            if match:
                found.setdefault(match["algo"], []).append((int(match["seed"]), path))
        if not found:
            raise LoaderError(
                f"{run_dir}: no summary.json and no *_seed*.csv files")
        for algo in sorted(found):
            groups.append([load_csv(path, algo, seed)
                           for seed, path in sorted(found[algo])])
    return groups


def aggregate(records: list[RunRecord]) -> Curve:
    """Collapse one algorithm's seeds into mean and CI95 per metric.

    Seeds may stop at different arrival counts (horizon truncation); the
    common prefix is kept. Every run samples once per arrival, so equal
    prefixes of the arrivals column line up row for row.
    """
    if not records:
        raise LoaderError("no runs to aggregate")
    label = records[0].algorithm
    n = min(len(r) for r in records)
    axis = records[0].columns["arrivals"][:n]
    for r in records[1:]:
        if r.columns["arrivals"][:n] != axis:
            raise LoaderError(f"{label}: seeds disagree on the arrivals axis")
    mean: dict[str, tuple[float, ...]] = {}
    ci95: dict[str, tuple[float, ...]] = {}
    for metric in METRIC_COLUMNS:
        series = [r.columns[metric] for r in records]
        mean[metric] = tuple(statistics.fmean(s[i] for s in series) for i in range(n))
        if len(records) > 1:
            ci95[metric] = tuple(
                1.96 * statistics.stdev([s[i] for s in series]) / math.sqrt(len(series))
                for i in range(n))
        else:
            ci95[metric] = tuple(0.0 for _ in range(n))
    return Curve(label=label, arrivals=axis, mean=mean, ci95=ci95, seeds=len(records))

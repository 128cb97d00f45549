"""Synthetic run directories in the exact on-disk layout the simulator writes."""

import json
import random

HEADER = "time,arrivals,acceptances,acceptance_rate,mean_cost,mean_delay,cpu_util,bw_util"
ROW_FMT = "%.6f,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f"


def synth_rows(seed, n, acceptance=None, cost_base=40.0):
    """Plausible per-arrival samples; `acceptance` pins the rate column."""
    rng = random.Random(seed)
    rows = []
    t = 0.0
    accepted = 0
    for i in range(1, n + 1):
        t += rng.expovariate(0.04)
        accepted += rng.random() < 0.85
        rate = acceptance if acceptance is not None else accepted / i
        rows.append((t, i, accepted, rate,
                     cost_base + 10.0 * rng.random(),
                     12.0 + 4.0 * rng.random(),
                     rng.uniform(0.05, 0.4),
                     rng.uniform(0.05, 0.4)))
    return rows


def write_csv(path, rows):
    lines = [HEADER] + [ROW_FMT % row for row in rows]
    path.write_text("\n".join(lines) + "\n")


def make_run_dir(root, algorithms, seeds, n=40, with_summary=True, **synth_kwargs):
    """Lay out {algo}_seed{seed}.csv files plus (optionally) summary.json.

    `algorithms` maps the file-name key to the legend label. Per-run rows are
    seeded from (key, seed) so distinct runs differ but reruns do not.
    """
    root.mkdir(parents=True, exist_ok=True)
    summary = {"algorithms": {}}
    for key, label in algorithms.items():
        files = []
        for seed in seeds:
            name = f"{key}_seed{seed}.csv"
            write_csv(root / name, synth_rows(f"{key}-{seed}", n, **synth_kwargs))
            files.append(name)
        summary["algorithms"][key] = {
            "label": label, "seeds": list(seeds), "files": files}
    if with_summary:
        (root / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return root

"""Command line front end: substrate generation, experiment runs, and
comparison reports.

Exit codes: 0 success, 2 configuration error, 3 runtime error (including
partially failed experiment sweeps; completed runs still write their files).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

from .baselines import ALGORITHM_LABELS
from .embedder import EmbedderConfig, ObjectiveWeights
from .generators import (
    ConfigError,
    SubstrateConfig,
    VnrConfig,
    config_from_dict,
    config_to_dict,
    generate_substrate,
)
from .model import ModelError
from .serialize import load_json, save_json, substrate_to_dict
from .sim import RunScenario, Simulation

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

SUMMARY_METRICS = ("acceptance_rate", "mean_cost", "mean_delay", "cpu_util", "bw_util")


@dataclass
class ExperimentConfig:
    substrate: SubstrateConfig = field(default_factory=SubstrateConfig)
    vnr: VnrConfig = field(default_factory=VnrConfig)
    algorithms: list[str] = field(default_factory=lambda: ["moo", "pso", "mc"])
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    horizon: float | None = None
    vnr_count: int = 500
    out_dir: str = "runs"
    k: int = 2
    w_price: float = 1.0
    w_delay: float = 1.0
    splitting: bool = False
    jobs: int = 1

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("need at least one algorithm")
        for a in self.algorithms:
            if a not in ALGORITHM_LABELS:
                raise ConfigError(f"unknown algorithm {a!r}")
        if not self.seeds:
            raise ConfigError("need at least one seed")
        if self.k < 1:
            raise ConfigError("k must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.vnr_count < 0:
            raise ConfigError("vnr_count must be >= 0")

    def embedder_config(self) -> EmbedderConfig:
        return EmbedderConfig(k=self.k,
                              weights=ObjectiveWeights(self.w_price, self.w_delay),
                              splitting=self.splitting)


def experiment_from_dict(data: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = dict(data)
    if "substrate" in kwargs:
        kwargs["substrate"] = config_from_dict(SubstrateConfig, kwargs["substrate"])
    if "vnr" in kwargs:
        kwargs["vnr"] = config_from_dict(VnrConfig, kwargs["vnr"])
    return ExperimentConfig(**kwargs)


def experiment_to_dict(exp: ExperimentConfig) -> dict:
    out = {}
    for f in fields(ExperimentConfig):
        value = getattr(exp, f.name)
        if f.name == "substrate":
            value = config_to_dict(value)
        elif f.name == "vnr":
            value = config_to_dict(value)
        out[f.name] = value
    return out


# ---------------------------------------------------------------------------
# subcommands

def cmd_generate(args) -> int:
    if args.config:
        exp = experiment_from_dict(load_json(args.config))
        cfg = exp.substrate
    else:
        cfg = SubstrateConfig()
    overrides = {}
    if args.domains is not None:
        overrides["domain_count"] = args.domains
    if args.nodes is not None:
        overrides["nodes_per_domain"] = args.nodes
    if overrides:
        cfg = config_from_dict(SubstrateConfig,
                               {**config_to_dict(cfg), **overrides})
    net = generate_substrate(cfg, args.seed)
    save_json(args.out, substrate_to_dict(net))
    print(f"wrote {args.out} ({len(net.nodes)} nodes, {len(net.links)} links, "
          f"{len(net.domains)} domains)")
    return EXIT_OK


def _run_task(payload):
    """One (algorithm, seed) run; executed in-process or in a worker."""
    scenario, csv_path = payload
    series = Simulation(scenario).run()
    series.write_csv(csv_path)
    return series.final_row()


def _mean_ci(values):
    mean = statistics.fmean(values)
    if len(values) < 2:
        return mean, 0.0
    return mean, 1.96 * statistics.stdev(values) / math.sqrt(len(values))


def cmd_run(args) -> int:
    exp = _load_experiment(args)
    os.makedirs(exp.out_dir, exist_ok=True)

    tasks = []
    for algo in exp.algorithms:
        for seed in exp.seeds:
            scenario = RunScenario(
                substrate=exp.substrate, vnr=exp.vnr,
                embedder=exp.embedder_config(), algorithm=algo,
                vnr_count=exp.vnr_count, horizon=exp.horizon, seed=seed)
            csv_path = os.path.join(exp.out_dir, f"{algo}_seed{seed}.csv")
            tasks.append(((scenario, csv_path), algo, seed, csv_path))

    results = {}
    failures = []
    if exp.jobs > 1:
        with ProcessPoolExecutor(max_workers=exp.jobs) as pool:
            futures = [(pool.submit(_run_task, payload), algo, seed, path)
                       for payload, algo, seed, path in tasks]
            for fut, algo, seed, path in futures:
                try:
                    results[(algo, seed)] = (fut.result(), path)
                except Exception as exc:
                    failures.append({"algorithm": algo, "seed": seed, "error": str(exc)})
                    print(f"run {algo} seed {seed} failed: {exc}", file=sys.stderr)
    else:
        for payload, algo, seed, path in tasks:
            try:
                results[(algo, seed)] = (_run_task(payload), path)
            except Exception as exc:
                failures.append({"algorithm": algo, "seed": seed, "error": str(exc)})
                print(f"run {algo} seed {seed} failed: {exc}", file=sys.stderr)

    summary = {"experiment": experiment_to_dict(exp), "algorithms": {}, "failures": failures}
    for algo in exp.algorithms:
        finals = [(seed, results[(algo, seed)]) for seed in exp.seeds
                  if (algo, seed) in results]
        if not finals:
            continue
        block = {
            "label": ALGORITHM_LABELS[algo],
            "seeds": [seed for seed, _ in finals],
            "files": [os.path.basename(path) for _, (_, path) in finals],
            "final": {},
        }
        for metric in SUMMARY_METRICS:
            values = [row[metric] for _, (row, _) in finals]
            mean, ci = _mean_ci(values)
            block["final"][metric] = {"mean": mean, "ci95": ci, "values": values}
        summary["algorithms"][algo] = block

    summary_path = os.path.join(exp.out_dir, "summary.json")
    save_json(summary_path, summary)
    done = len(results)
    print(f"{done}/{len(tasks)} runs completed; summary at {summary_path}")
    return EXIT_RUNTIME if failures else EXIT_OK


def cmd_compare(args) -> int:
    data = load_json(args.summary)
    if "algorithms" not in data or not data["algorithms"]:
        raise ConfigError(f"{args.summary}: no algorithm results in summary")
    for algo, block in data["algorithms"].items():
        if "final" not in block:
            raise ConfigError(f"{args.summary}: algorithm {algo!r} lacks final metrics")
        for metric in ("mean_cost", "mean_delay", "acceptance_rate"):
            if metric not in block["final"]:
                raise ConfigError(f"{args.summary}: {algo!r} lacks metric {metric!r}")

    rankings = (("mean cost", "mean_cost", False),
                ("mean delay", "mean_delay", False),
                ("acceptance rate", "acceptance_rate", True))
    for title, metric, descending in rankings:
        rows = []
        for algo, block in data["algorithms"].items():
            entry = block["final"][metric]
            label = block.get("label", algo)
            rows.append((entry["mean"], entry.get("ci95", 0.0), label))
        rows.sort(key=lambda r: (-r[0] if descending else r[0], r[2]))
        direction = "higher is better" if descending else "lower is better"
        print(f"Ranking by {title} ({direction}):")
        prev = None
        for i, (mean, ci, label) in enumerate(rows, start=1):
            tie = "  (tie)" if prev is not None and mean == prev else ""
            print(f"  {i}. {label:<24} {mean:>12.4f} +/- {ci:.4f}{tie}")
            prev = mean
        print()
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing

def _parse_seeds(text: str) -> list[int]:
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ConfigError(f"could not parse seeds from {text!r}")
    return seeds


def _load_experiment(args) -> ExperimentConfig:
    data = load_json(args.config) if args.config else {}
    exp = experiment_from_dict(data)
    if args.algorithm:
        exp.algorithms = [a.strip() for a in args.algorithm.split(",")]
    if args.seeds:
        exp.seeds = _parse_seeds(args.seeds)
    if args.horizon is not None:
        exp.horizon = args.horizon
    if args.out:
        exp.out_dir = args.out
    if args.jobs is not None:
        exp.jobs = args.jobs
    if args.split:
        exp.splitting = True
    if args.k is not None:
        exp.k = args.k
    if args.w_price is not None:
        exp.w_price = args.w_price
    if args.w_delay is not None:
        exp.w_delay = args.w_delay
    if args.vnrs is not None:
        exp.vnr_count = args.vnrs
    # re-validate after overrides
    return experiment_from_dict(experiment_to_dict(exp))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdvne",
        description="Cross-domain virtual network embedding simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a substrate JSON file")
    gen.add_argument("--config", help="experiment config JSON (substrate section used)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--domains", type=int, help="override domain count")
    gen.add_argument("--nodes", type=int, help="override nodes per domain")
    gen.add_argument("--out", default="substrate.json")
    gen.set_defaults(func=cmd_generate)

    runp = sub.add_parser("run", help="run the experiment sweep")
    runp.add_argument("--config", help="experiment config JSON")
    runp.add_argument("--algorithm", help="comma list from {moo,pso,mc}")
    runp.add_argument("--seeds", help="comma list and/or ranges, e.g. 0,1,4-7")
    runp.add_argument("--horizon", type=float)
    runp.add_argument("--out", help="output directory")
    runp.add_argument("--jobs", type=int)
    runp.add_argument("--split", action="store_true", help="enable path splitting")
    runp.add_argument("--k", type=int, help="candidates per virtual node")
    runp.add_argument("--w-price", type=float, dest="w_price")
    runp.add_argument("--w-delay", type=float, dest="w_delay")
    runp.add_argument("--vnrs", type=int, help="requests per run")
    runp.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="rank algorithms from a summary file")
    cmp_.add_argument("summary", help="summary.json written by run")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

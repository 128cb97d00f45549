"""Discrete-event workload engine.

Requests arrive as a Poisson process, live for an exponential holding time,
and depart. Arrivals run the selected embedding algorithm against the live
substrate; acceptance commits resources and schedules the departure that
releases them. Departures sort before arrivals at equal timestamps so a
leaving request frees capacity for a simultaneous incoming one.

Metrics are sampled at every arrival: cumulative acceptance rate, running
mean embedding cost and delay over accepted requests, and substrate
utilization.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .baselines import ALGORITHMS, border_hop_distances, embed_boundary_hops, embed_link_first
from .embedder import EmbedderConfig, Embedding, embed
from .generators import (
    ConfigError,
    SubstrateConfig,
    VnrConfig,
    arrival_times,
    generate_substrate,
    generate_vnr,
)
from .model import LinkKey, SubstrateNetwork
from .paths import GraphView


@dataclass
class Event:
    time: float
    kind: str                  # "arrival" | "departure"
    vnr_id: int
    vnr: object = None         # arrivals carry the request

    @property
    def sort_key(self):
        # departures drain resources before a simultaneous arrival is tried
        return (self.time, 0 if self.kind == "departure" else 1, self.vnr_id)


@dataclass
class RunScenario:
    substrate: SubstrateConfig = field(default_factory=SubstrateConfig)
    vnr: VnrConfig = field(default_factory=VnrConfig)
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)
    algorithm: str = "moo"
    vnr_count: int = 500
    horizon: float | None = None    # None: process every scheduled event
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.vnr_count < 0:
            raise ConfigError("vnr_count must be >= 0")
        if self.horizon is not None and self.horizon < 0:
            raise ConfigError("horizon must be >= 0")


class MetricsSeries:
    """Per-arrival samples of the cumulative experiment metrics."""

    COLUMNS = ("time", "arrivals", "acceptances", "acceptance_rate",
               "mean_cost", "mean_delay", "cpu_util", "bw_util")

    def __init__(self):
        self.time: list[float] = []
        self.arrivals: list[int] = []
        self.acceptances: list[int] = []
        self.acceptance_rate: list[float] = []
        self.mean_cost: list[float] = []
        self.mean_delay: list[float] = []
        self.cpu_util: list[float] = []
        self.bw_util: list[float] = []

    def __len__(self):
        return len(self.time)

    def sample(self, time, arrivals, acceptances, cost_sum, delay_sum,
               cpu_alloc, cpu_cap, bw_alloc, bw_cap):
        self.time.append(time)
        self.arrivals.append(arrivals)
        self.acceptances.append(acceptances)
        self.acceptance_rate.append(acceptances / arrivals if arrivals else 0.0)
        self.mean_cost.append(cost_sum / acceptances if acceptances else 0.0)
        self.mean_delay.append(delay_sum / acceptances if acceptances else 0.0)
        self.cpu_util.append(cpu_alloc / cpu_cap if cpu_cap else 0.0)
        self.bw_util.append(bw_alloc / bw_cap if bw_cap else 0.0)

    def final_row(self) -> dict:
        if not self.time:
            return {c: 0.0 for c in self.COLUMNS}
        return {c: getattr(self, c)[-1] for c in self.COLUMNS}

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for i in range(len(self.time)):
                fh.write("%.6f,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n" % (
                    self.time[i], self.arrivals[i], self.acceptances[i],
                    self.acceptance_rate[i], self.mean_cost[i],
                    self.mean_delay[i], self.cpu_util[i], self.bw_util[i]))


# ---------------------------------------------------------------------------
# resource accounting

def aggregate_demands(emb: Embedding):
    """Total demand per physical node and per physical link for one
    embedding (split shares and link reuse summed)."""
    nodes: dict[int, int] = {}
    links: dict[LinkKey, int] = {}
    for vid, pid in emb.node_map.items():
        nodes[pid] = nodes.get(pid, 0) + emb.node_demands[vid]
    for assignments in emb.link_map.values():
        for pa in assignments:
            for key in pa.path:
                links[key] = links.get(key, 0) + pa.share
    return nodes, links


def commit(emb: Embedding, net: SubstrateNetwork) -> None:
    """Decrement residuals by the embedding's demands. The embed step
    already verified feasibility; a failed recheck here means the caller
    broke the single-writer contract, so it raises instead of degrading."""
    if not emb.accepted:
        raise ValueError("cannot commit a rejected embedding")
    if emb.committed:
        raise RuntimeError(f"vnr {emb.vnr_id}: double commit")
    nodes, links = aggregate_demands(emb)
    for pid, amount in nodes.items():
        if net.nodes[pid].cpu_residual < amount:
            raise RuntimeError(f"vnr {emb.vnr_id}: commit would overdraw node {pid}")
    for key, amount in links.items():
        if net.links[key].bw_residual < amount:
            raise RuntimeError(f"vnr {emb.vnr_id}: commit would overdraw link {key}")
    for pid, amount in nodes.items():
        net.nodes[pid].cpu_residual -= amount
    for key, amount in links.items():
        net.links[key].bw_residual -= amount
    emb.committed = True


def release(emb: Embedding, net: SubstrateNetwork) -> None:
    """Exact inverse of commit."""
    if not emb.committed:
        raise RuntimeError(f"vnr {emb.vnr_id}: release without commit")
    nodes, links = aggregate_demands(emb)
    for pid, amount in nodes.items():
        if net.nodes[pid].cpu_residual + amount > net.nodes[pid].cpu_capacity:
            raise RuntimeError(f"vnr {emb.vnr_id}: release would overflow node {pid}")
    for key, amount in links.items():
        if net.links[key].bw_residual + amount > net.links[key].bw_capacity:
            raise RuntimeError(f"vnr {emb.vnr_id}: release would overflow link {key}")
    for pid, amount in nodes.items():
        net.nodes[pid].cpu_residual += amount
    for key, amount in links.items():
        net.links[key].bw_residual += amount
    emb.committed = False


class ConservationAuditor:
    """Debug walker: capacity - residual must equal the summed demands of
    active embeddings, for every node and link, at every event boundary."""

    def __init__(self, net: SubstrateNetwork):
        self.net = net
        self._nodes = list(net.nodes.values())
        self._links = list(net.links.values())
        self.node_used: dict[int, int] = {}
        self.link_used: dict[LinkKey, int] = {}

    def note_commit(self, emb: Embedding) -> None:
        nodes, links = aggregate_demands(emb)
        for pid, amount in nodes.items():
            self.node_used[pid] = self.node_used.get(pid, 0) + amount
        for key, amount in links.items():
            self.link_used[key] = self.link_used.get(key, 0) + amount

    def note_release(self, emb: Embedding) -> None:
        nodes, links = aggregate_demands(emb)
        for pid, amount in nodes.items():
            self.node_used[pid] -= amount
        for key, amount in links.items():
            self.link_used[key] -= amount

    def check(self) -> None:
        nu = self.node_used
        for n in self._nodes:
            if n.cpu_capacity - n.cpu_residual != nu.get(n.id, 0):
                raise AssertionError(
                    f"node {n.id}: allocated {n.cpu_capacity - n.cpu_residual} "
                    f"!= active demand {nu.get(n.id, 0)}")
        lu = self.link_used
        for l in self._links:
            if l.bw_capacity - l.bw_residual != lu.get(l.endpoints, 0):
                raise AssertionError(
                    f"link {l.endpoints}: allocated {l.bw_capacity - l.bw_residual} "
                    f"!= active demand {lu.get(l.endpoints, 0)}")


# ---------------------------------------------------------------------------
# the event loop

class Simulation:
    """One seeded workload run. State stays inspectable after run() for
    tests (live substrate, active embeddings, event log counters)."""

    def __init__(self, scenario: RunScenario, audit: bool = False):
        self.scenario = scenario
        self.audit = audit
        self.net = generate_substrate(scenario.substrate, scenario.seed)
        self.active: dict[int, Embedding] = {}
        self.events_processed = 0
        self.auditor = ConservationAuditor(self.net) if audit else None
        self._runner = self._build_runner()

    def _build_runner(self):
        cfg = self.scenario.embedder
        net = self.net
        name = self.scenario.algorithm
        if name == "moo":
            tables: dict = {}
            view = GraphView(net)
            return lambda vnr: embed(vnr, net, cfg, tables=tables, full_view=view)
        if name == "pso":
            hops = border_hop_distances(net)
            view = GraphView(net)
            return lambda vnr: embed_boundary_hops(vnr, net, cfg,
                                                   border_hops=hops, full_view=view)
        return lambda vnr: embed_link_first(vnr, net, cfg)

    def run(self) -> MetricsSeries:
        sc = self.scenario
        series = MetricsSeries()
        times = arrival_times(sc.vnr, sc.seed, sc.vnr_count)
        heap = []
        for i, t in enumerate(times):
            if sc.horizon is not None and t > sc.horizon:
                break
            ev = Event(t, "arrival", i, generate_vnr(sc.vnr, sc.seed, i, t))
            heapq.heappush(heap, (ev.sort_key, ev))

        cpu_cap = sum(n.cpu_capacity for n in self.net.nodes.values())
        bw_cap = sum(l.bw_capacity for l in self.net.links.values())
        arrivals = acceptances = 0
        cost_sum = delay_sum = 0
        cpu_alloc = bw_alloc = 0

        while heap:
            _, ev = heapq.heappop(heap)
            if sc.horizon is not None and ev.time > sc.horizon:
                break
            self.events_processed += 1
            if ev.kind == "departure":
                emb = self.active.pop(ev.vnr_id)
                release(emb, self.net)
                nodes, links = aggregate_demands(emb)
                cpu_alloc -= sum(nodes.values())
                bw_alloc -= sum(links.values())
                if self.auditor:
                    self.auditor.note_release(emb)
                    self.auditor.check()
                continue
            arrivals += 1
            emb = self._runner(ev.vnr)
            if emb.accepted:
                commit(emb, self.net)
                self.active[ev.vnr_id] = emb
                acceptances += 1
                cost_sum += emb.cost
                delay_sum += emb.delay
                nodes, links = aggregate_demands(emb)
                cpu_alloc += sum(nodes.values())
                bw_alloc += sum(links.values())
                dep = Event(ev.time + ev.vnr.lifetime, "departure", ev.vnr_id)
                heapq.heappush(heap, (dep.sort_key, dep))
                if self.auditor:
                    self.auditor.note_commit(emb)
            if self.auditor:
                self.auditor.check()
            series.sample(ev.time, arrivals, acceptances, cost_sum, delay_sum,
                          cpu_alloc, cpu_cap, bw_alloc, bw_cap)
        return series


def run(scenario: RunScenario, audit: bool = False) -> MetricsSeries:
    """Convenience wrapper: build and run one simulation."""
    return Simulation(scenario, audit=audit).run()

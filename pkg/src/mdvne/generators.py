"""Seeded random generators for substrates and virtual network requests.

Defaults mirror the evaluation setup: 4 domains of 30 nodes, CPU U[100,300],
bandwidth U[1000,3000], prices and delays U[1,10], VNRs of U[2,6] nodes with
CPU demands U[1,10] and bandwidth demands U[5,15]. Topology knobs (link
probabilities, border node counts) are generator parameters with documented
defaults since the evaluation tables leave them open.

Determinism contract: equal (config, seed) inputs produce attribute-for-
attribute identical networks. All randomness flows through one
``random.Random`` stream seeded from a string tag, so draw order is part of
the format.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, fields, asdict

from .model import (
    ModelError,
    PhysicalLink,
    PhysicalNode,
    SubstrateNetwork,
    VirtualLink,
    VirtualNetworkRequest,
    VirtualNode,
    link_key,
)


class ConfigError(ValueError):
    """Invalid or unknown configuration input."""


Range = tuple[int, int]


def _check_range(name: str, r) -> Range:
    try:
        lo, hi = r
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected [min, max], got {r!r}") from None
    if not (isinstance(lo, int) and isinstance(hi, int)):
        raise ConfigError(f"{name}: bounds must be integers, got {r!r}")
    if lo > hi:
        raise ConfigError(f"{name}: min {lo} > max {hi}")
    return (lo, hi)


@dataclass
class SubstrateConfig:
    domain_count: int = 4
    nodes_per_domain: int = 30
    cpu_range: Range = (100, 300)
    node_delay_range: Range = (1, 10)
    cpu_price_range: Range = (1, 10)
    bw_range: Range = (1000, 3000)
    link_delay_range: Range = (1, 10)
    bw_price_range: Range = (1, 10)
    intra_link_probability: float = 0.3
    inter_links_per_domain_pair: int = 2
    border_nodes_per_domain: int = 3

    def __post_init__(self):
        if self.domain_count < 1:
            raise ConfigError("domain_count must be >= 1")
        if self.nodes_per_domain < 1:
            raise ConfigError("nodes_per_domain must be >= 1")
        for name in ("cpu_range", "node_delay_range", "cpu_price_range",
                     "bw_range", "link_delay_range", "bw_price_range"):
            setattr(self, name, _check_range(name, getattr(self, name)))
        if not 0 < self.intra_link_probability <= 1:
            raise ConfigError("intra_link_probability must be in (0, 1]")
        if self.cpu_range[0] <= 0 or self.bw_range[0] <= 0:
            raise ConfigError("capacities must be positive")
        if self.cpu_price_range[0] <= 0 or self.bw_price_range[0] <= 0:
            raise ConfigError("prices must be positive")
        if self.node_delay_range[0] < 0 or self.link_delay_range[0] < 0:
            raise ConfigError("delays must be non-negative")
        if self.domain_count > 1:
            if self.inter_links_per_domain_pair < 1:
                raise ConfigError("inter_links_per_domain_pair must be >= 1")
            if self.border_nodes_per_domain < 1:
                raise ConfigError("border_nodes_per_domain must be >= 1")
            if self.border_nodes_per_domain > self.nodes_per_domain:
                raise ConfigError("border_nodes_per_domain exceeds nodes_per_domain")
            if self.inter_links_per_domain_pair > self.border_nodes_per_domain ** 2:
                raise ConfigError("inter_links_per_domain_pair exceeds distinct border pairs")


@dataclass
class VnrConfig:
    node_count_range: Range = (2, 6)
    cpu_demand_range: Range = (1, 10)
    bw_demand_range: Range = (5, 15)
    virtual_link_probability: float = 0.5
    arrival_rate: float = 0.04  # VNRs per time unit (4 per 100)
    mean_lifetime: float = 500.0

    def __post_init__(self):
        for name in ("node_count_range", "cpu_demand_range", "bw_demand_range"):
            setattr(self, name, _check_range(name, getattr(self, name)))
        if self.node_count_range[0] < 1:
            raise ConfigError("node_count_range must start at >= 1")
        if self.cpu_demand_range[0] <= 0 or self.bw_demand_range[0] <= 0:
            raise ConfigError("demands must be positive")
        if not 0 < self.virtual_link_probability <= 1:
            raise ConfigError("virtual_link_probability must be in (0, 1]")
        if self.arrival_rate <= 0:
            raise ConfigError("arrival_rate must be > 0")
        if self.mean_lifetime <= 0:
            raise ConfigError("mean_lifetime must be > 0")


def config_from_dict(cls, data: dict):
    """Build a config dataclass from a JSON dict; unknown keys are an error."""
    if not isinstance(data, dict):
        raise ConfigError(f"{cls.__name__}: expected an object, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{cls.__name__}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for key, value in data.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    return cls(**kwargs)


def config_to_dict(cfg) -> dict:
    out = {}
    for key, value in asdict(cfg).items():
        out[key] = list(value) if isinstance(value, tuple) else value
    return out


def _uniform(rng: random.Random, r: Range) -> int:
    return rng.randint(r[0], r[1])


def generate_substrate(cfg: SubstrateConfig, seed: int) -> SubstrateNetwork:
    """Generate a multi-domain substrate.

    Per-domain topology is Erdos-Renyi with ``intra_link_probability``,
    augmented with component-joining edges until connected. Each domain pair
    is joined by ``inter_links_per_domain_pair`` links between randomly
    chosen border nodes, so the inter-domain graph is a complete domain mesh.
    """
    rng = random.Random(f"substrate-{seed}")
    domains = list(range(cfg.domain_count))
    npd = cfg.nodes_per_domain

    nodes: list[PhysicalNode] = []
    for d in domains:
        for i in range(npd):
            cpu = _uniform(rng, cfg.cpu_range)
            nodes.append(PhysicalNode(
                id=d * npd + i,
                domain=d,
                cpu_capacity=cpu,
                cpu_residual=cpu,
                cpu_price=_uniform(rng, cfg.cpu_price_range),
                delay=_uniform(rng, cfg.node_delay_range),
            ))

    links: list[PhysicalLink] = []
    seen = set()

    def add_link(u: int, v: int, kind: str):
        key = link_key(u, v)
        seen.add(key)
        bw = _uniform(rng, cfg.bw_range)
        links.append(PhysicalLink(
            endpoints=key,
            bw_capacity=bw,
            bw_residual=bw,
            bw_price=_uniform(rng, cfg.bw_price_range),
            delay=_uniform(rng, cfg.link_delay_range),
            kind=kind,
        ))

    for d in domains:
        base = d * npd
        member_ids = list(range(base, base + npd))
        for i in member_ids:
            for j in range(i + 1, base + npd):
                if rng.random() < cfg.intra_link_probability:
                    add_link(i, j, "intra")
        # join leftover components with extra edges (spanning augmentation)
        comps = _components(member_ids, seen)
        while len(comps) > 1:
            comps.sort(key=min)
            u = rng.choice(sorted(comps[0]))
            v = rng.choice(sorted(comps[1]))
            add_link(u, v, "intra")
            comps[0] |= comps[1]
            del comps[1]

    border: dict[int, list[int]] = {}
    if cfg.domain_count > 1:
        for d in domains:
            base = d * npd
            border[d] = sorted(rng.sample(range(base, base + npd), cfg.border_nodes_per_domain))
        for a in domains:
            for b in domains:
                if a >= b:
                    continue
                pairs = [(u, v) for u in border[a] for v in border[b]]
                chosen = rng.sample(pairs, cfg.inter_links_per_domain_pair)
                for u, v in chosen:
                    add_link(u, v, "inter")

    inter_endpoints = {e for l in links if l.kind == "inter" for e in l.endpoints}
    for n in nodes:
        n.is_border = n.id in inter_endpoints

    net = SubstrateNetwork(domains, nodes, links)
    net.validate()
    return net


def _components(member_ids: list[int], edge_set: set) -> list[set]:
    members = set(member_ids)
    adj: dict[int, list[int]] = {i: [] for i in members}
    for u, v in edge_set:
        if u in members and v in members:
            adj[u].append(v)
            adj[v].append(u)
    comps = []
    left = set(members)
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
        left -= comp
    return comps


def generate_vnr(cfg: VnrConfig, seed: int, vnr_id: int, arrival_time: float) -> VirtualNetworkRequest:
    """Generate one VNR: random spanning tree plus extra links with
    ``virtual_link_probability``; lifetime drawn exponential with
    ``mean_lifetime``. Deterministic in (cfg, seed, vnr_id)."""
    rng = random.Random(f"vnr-{seed}-{vnr_id}")
    n = _uniform(rng, cfg.node_count_range)
    vnodes = [VirtualNode(id=i, cpu_demand=_uniform(rng, cfg.cpu_demand_range))
              for i in range(n)]

    edges = set()
    for i in range(1, n):
        edges.add(link_key(rng.randrange(i), i))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < cfg.virtual_link_probability:
                edges.add((i, j))

    vlinks = [VirtualLink(endpoints=e, bw_demand=_uniform(rng, cfg.bw_demand_range))
              for e in sorted(edges)]
    lifetime = rng.expovariate(1.0 / cfg.mean_lifetime)
    if lifetime <= 0.0:  # expovariate can return 0.0 at the float edge
        lifetime = 1e-9
    return VirtualNetworkRequest(
        id=vnr_id, nodes=vnodes, links=vlinks,
        arrival_time=arrival_time, lifetime=lifetime,
    )


def arrival_times(cfg: VnrConfig, seed: int, count: int) -> list[float]:
    """Poisson arrival instants for ``count`` VNRs (exponential gaps)."""
    rng = random.Random(f"arrivals-{seed}")
    times = []
    t = 0.0
    for _ in range(count):
        t += rng.expovariate(cfg.arrival_rate)
        times.append(t)
    return times

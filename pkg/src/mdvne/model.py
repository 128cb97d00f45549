"""Domain types for substrate networks and virtual network requests.

The substrate is a multi-domain undirected weighted graph. Node attributes:
CPU capacity/residual, unit price, delay. Link attributes: bandwidth
capacity/residual, unit price, delay. Links are either intra-domain or
inter-domain; nodes with an incident inter-domain link are border nodes.

All attribute quantities are integers. Types are immutable after
construction except the residual fields, which are mutated only by the
simulation engine's commit/release step.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ModelError(ValueError):
    """Raised when a network object violates a structural invariant."""


LinkKey = tuple[int, int]


def link_key(u: int, v: int) -> LinkKey:
    """Canonical (sorted) endpoint pair identifying an undirected link."""
    return (u, v) if u < v else (v, u)


@dataclass
class PhysicalNode:
    id: int
    domain: int
    cpu_capacity: int
    cpu_residual: int
    cpu_price: int
    delay: int
    is_border: bool = False

    def __post_init__(self):
        if self.cpu_capacity <= 0:
            raise ModelError(f"node {self.id}: cpu_capacity must be > 0")
        if not 0 <= self.cpu_residual <= self.cpu_capacity:
            raise ModelError(f"node {self.id}: residual {self.cpu_residual} outside [0, {self.cpu_capacity}]")
        if self.cpu_price <= 0:
            raise ModelError(f"node {self.id}: cpu_price must be > 0")
        if self.delay < 0:
            raise ModelError(f"node {self.id}: delay must be >= 0")


@dataclass
class PhysicalLink:
    endpoints: LinkKey
    bw_capacity: int
    bw_residual: int
    bw_price: int
    delay: int
    kind: str  # "intra" | "inter"

    def __post_init__(self):
        u, v = self.endpoints
        if u == v:
            raise ModelError(f"link {self.endpoints}: self-loop")
        if u > v:
            raise ModelError(f"link {self.endpoints}: endpoints must be sorted")
        if self.bw_capacity <= 0:
            raise ModelError(f"link {self.endpoints}: bw_capacity must be > 0")
        if not 0 <= self.bw_residual <= self.bw_capacity:
            raise ModelError(f"link {self.endpoints}: residual {self.bw_residual} outside [0, {self.bw_capacity}]")
        if self.bw_price <= 0:
            raise ModelError(f"link {self.endpoints}: bw_price must be > 0")
        if self.delay < 0:
            raise ModelError(f"link {self.endpoints}: delay must be >= 0")


class SubstrateNetwork:
    """Multi-domain substrate graph with residual resource tracking."""

    def __init__(self, domains: list[int], nodes: list[PhysicalNode], links: list[PhysicalLink]):
        self.domains = list(domains)
        self.nodes: dict[int, PhysicalNode] = {}
        for n in nodes:
            if n.id in self.nodes:
                raise ModelError(f"duplicate node id {n.id}")
            if n.domain not in self.domains:
                raise ModelError(f"node {n.id}: unknown domain {n.domain}")
            self.nodes[n.id] = n
        self.links: dict[LinkKey, PhysicalLink] = {}
        for l in links:
            if l.endpoints in self.links:
                raise ModelError(f"duplicate link {l.endpoints}")
            u, v = l.endpoints
            if u not in self.nodes or v not in self.nodes:
                raise ModelError(f"link {l.endpoints}: unknown endpoint")
            inter = self.nodes[u].domain != self.nodes[v].domain
            if (l.kind == "inter") != inter:
                raise ModelError(f"link {l.endpoints}: kind {l.kind!r} inconsistent with endpoint domains")
            self.links[l.endpoints] = l
        # node id -> list of incident link keys
        self.adjacency: dict[int, list[LinkKey]] = {nid: [] for nid in self.nodes}
        for key in self.links:
            u, v = key
            self.adjacency[u].append(key)
            self.adjacency[v].append(key)
        # topology is frozen after construction, so group membership can be
        # computed once (residuals mutate, membership never does)
        self._domain_nodes: dict[int, list[PhysicalNode]] = {d: [] for d in self.domains}
        for n in self.nodes.values():
            self._domain_nodes[n.domain].append(n)
        self._domain_intra: dict[int, list[PhysicalLink]] = {d: [] for d in self.domains}
        self._inter: list[PhysicalLink] = []
        for l in self.links.values():
            if l.kind == "inter":
                self._inter.append(l)
            else:
                self._domain_intra[self.nodes[l.endpoints[0]].domain].append(l)
        self._link_means: tuple | None = None

    def link_between(self, u: int, v: int) -> PhysicalLink | None:
        return self.links.get(link_key(u, v))

    def neighbors(self, nid: int):
        for u, v in self.adjacency[nid]:
            yield v if u == nid else u

    def nodes_in_domain(self, domain: int) -> list[PhysicalNode]:
        return self._domain_nodes[domain]

    def border_nodes(self, domain: int) -> list[PhysicalNode]:
        return [n for n in self._domain_nodes[domain] if n.is_border]

    def intra_links(self, domain: int) -> list[PhysicalLink]:
        return self._domain_intra[domain]

    def inter_links(self) -> list[PhysicalLink]:
        return self._inter

    def link_attribute_means(self) -> tuple[dict, dict, float, float]:
        """(per-domain mean intra bw_price, per-domain mean intra delay,
        mean inter bw_price, mean inter delay); prices and delays are
        immutable so the result is memoized."""
        if self._link_means is None:
            intra_price: dict[int, float] = {}
            intra_delay: dict[int, float] = {}
            for d in self.domains:
                links = self._domain_intra[d]
                if links:
                    intra_price[d] = sum(l.bw_price for l in links) / len(links)
                    intra_delay[d] = sum(l.delay for l in links) / len(links)
                else:
                    intra_price[d] = 0.0
                    intra_delay[d] = 0.0
            if self._inter:
                ip = sum(l.bw_price for l in self._inter) / len(self._inter)
                idl = sum(l.delay for l in self._inter) / len(self._inter)
            else:
                ip = idl = 0.0
            self._link_means = (intra_price, intra_delay, ip, idl)
        return self._link_means

    def validate(self) -> None:
        """Check connectivity invariants; raises ModelError on violation."""
        for d in self.domains:
            members = {n.id for n in self.nodes_in_domain(d)}
            if not members:
                raise ModelError(f"domain {d} has no nodes")
            if not self._connected(members, intra_only=True):
                raise ModelError(f"domain {d} is not connected by intra-domain links")
        if len(self.domains) > 1:
            # contract the inter-domain graph to one vertex per domain
            reached = {self.domains[0]}
            frontier = [self.domains[0]]
            while frontier:
                d = frontier.pop()
                for l in self.inter_links():
                    du = self.nodes[l.endpoints[0]].domain
                    dv = self.nodes[l.endpoints[1]].domain
                    if du == d and dv not in reached:
                        reached.add(dv)
                        frontier.append(dv)
                    elif dv == d and du not in reached:
                        reached.add(du)
                        frontier.append(du)
            if reached != set(self.domains):
                raise ModelError("inter-domain graph does not connect all domains")

    def _connected(self, members: set[int], intra_only: bool) -> bool:
        start = next(iter(members))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for key in self.adjacency[u]:
                if intra_only and self.links[key].kind != "intra":
                    continue
                v = key[1] if key[0] == u else key[0]
                if v in members and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == members

    def copy(self) -> "SubstrateNetwork":
        nodes = [PhysicalNode(n.id, n.domain, n.cpu_capacity, n.cpu_residual,
                              n.cpu_price, n.delay, n.is_border)
                 for n in self.nodes.values()]
        links = [PhysicalLink(l.endpoints, l.bw_capacity, l.bw_residual,
                              l.bw_price, l.delay, l.kind)
                 for l in self.links.values()]
        return SubstrateNetwork(self.domains, nodes, links)


@dataclass
class VirtualNode:
    id: int
    cpu_demand: int

    def __post_init__(self):
        if self.cpu_demand <= 0:
            raise ModelError(f"virtual node {self.id}: cpu_demand must be > 0")


@dataclass
class VirtualLink:
    endpoints: LinkKey
    bw_demand: int

    def __post_init__(self):
        u, v = self.endpoints
        if u == v:
            raise ModelError(f"virtual link {self.endpoints}: endpoints must be distinct")
        if u > v:
            raise ModelError(f"virtual link {self.endpoints}: endpoints must be sorted")
        if self.bw_demand <= 0:
            raise ModelError(f"virtual link {self.endpoints}: bw_demand must be > 0")


@dataclass
class VirtualNetworkRequest:
    id: int
    nodes: list[VirtualNode]
    links: list[VirtualLink]
    arrival_time: float
    lifetime: float
    _by_id: dict[int, VirtualNode] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.nodes:
            raise ModelError(f"vnr {self.id}: must have at least one node")
        if self.lifetime <= 0:
            raise ModelError(f"vnr {self.id}: lifetime must be > 0")
        self._by_id = {}
        for n in self.nodes:
            if n.id in self._by_id:
                raise ModelError(f"vnr {self.id}: duplicate virtual node id {n.id}")
            self._by_id[n.id] = n
        seen_links = set()
        for l in self.links:
            if l.endpoints in seen_links:
                raise ModelError(f"vnr {self.id}: duplicate virtual link {l.endpoints}")
            seen_links.add(l.endpoints)
            for e in l.endpoints:
                if e not in self._by_id:
                    raise ModelError(f"vnr {self.id}: link {l.endpoints} references unknown node")
        if not self._is_connected():
            raise ModelError(f"vnr {self.id}: virtual graph is not connected")

    def node(self, vid: int) -> VirtualNode:
        return self._by_id[vid]

    def _is_connected(self) -> bool:
        ids = set(self._by_id)
        adj: dict[int, list[int]] = {i: [] for i in ids}
        for l in self.links:
            u, v = l.endpoints
            adj[u].append(v)
            adj[v].append(u)
        start = next(iter(ids))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == ids

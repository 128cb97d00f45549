"""Multi-objective cross-domain embedding pipeline.

Five stages per request, mirroring the global/local controller split:

1. partition: assign every virtual node to one domain by minimizing an
   objective estimate (exact enumeration at small scale, greedy beyond).
2. candidate selection: per domain, the k cheapest feasible unmarked
   physical nodes per virtual node, ranked by demand * cpu_price + delay.
3. intra-domain mapping: cheapest candidate combination whose virtual links
   all fit on least-delay paths from the domain's Floyd table, with bounded
   backtracking over the remaining combinations.
4. inter-domain stitching: cut virtual links routed over the full graph by
   feasibility-filtered least-delay search.
5. accept/reject: all-or-nothing; rejection leaves no resource footprint.

All operations are pure with respect to the substrate: residual mutation is
owned by the simulation engine's commit/release.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from .model import LinkKey, SubstrateNetwork, VirtualLink, VirtualNetworkRequest, VirtualNode
from .paths import GraphView, PathTable, all_pairs_shortest_paths, dijkstra_path


@dataclass
class ObjectiveWeights:
    w_price: float = 1.0
    w_delay: float = 1.0


@dataclass
class EmbedderConfig:
    k: int = 2                      # candidates per virtual node
    weights: ObjectiveWeights = field(default_factory=ObjectiveWeights)
    splitting: bool = False         # allow two-path splits on link-mapping failure
    backtrack_limit: int = 64       # candidate combinations tried per domain
    assignment_cap: int = 4096      # exhaustive partition search bound
    cut_hop_estimate: int = 3       # assumed hops for a cut link in the partition estimate
    local_search_iters: int = 50    # boundary-hops baseline budget
    seed: int = 0                   # baseline randomization seed


class RejectionError(Exception):
    """Internal signal: the current request cannot be embedded."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class PathAssignment:
    path: tuple[LinkKey, ...]
    share: int


@dataclass
class Embedding:
    vnr_id: int
    status: str                                   # "accepted" | "rejected"
    reason: str | None = None
    node_map: dict[int, int] = field(default_factory=dict)
    node_demands: dict[int, int] = field(default_factory=dict)
    link_map: dict[LinkKey, list[PathAssignment]] = field(default_factory=dict)
    objective: float = 0.0
    cost: int = 0
    delay: int = 0
    committed: bool = False

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


@dataclass
class CandidateSet:
    """Per virtual node: feasible physical nodes with mapping costs,
    ascending by (cost, node id). An empty list marks a node with no
    feasible unmarked candidate."""
    entries: dict[int, list[tuple[int, float]]]

    def empty_nodes(self) -> list[int]:
        return [vid for vid, lst in self.entries.items() if not lst]


@dataclass
class Subgraph:
    nodes: list[VirtualNode]
    links: list[VirtualLink]


@dataclass
class Partition:
    assignment: dict[int, int]            # virtual node id -> domain
    subgraphs: dict[int, Subgraph]
    cut_links: list[VirtualLink]
    estimate: float


class Reservations:
    """Tentative per-request resource bookkeeping (never touches residuals)."""

    def __init__(self):
        self.node_used: dict[int, int] = {}
        self.link_used: dict[LinkKey, int] = {}

    def available_bw(self, net: SubstrateNetwork, key: LinkKey) -> int:
        return net.links[key].bw_residual - self.link_used.get(key, 0)

    def reserve_node(self, nid: int, amount: int) -> None:
        self.node_used[nid] = self.node_used.get(nid, 0) + amount

    def reserve_path(self, path, amount: int) -> None:
        for key in path:
            self.link_used[key] = self.link_used.get(key, 0) + amount


# ---------------------------------------------------------------------------
# feasibility and cost primitives

def check_node_feasible(vn: VirtualNode, pn, candidate_domains) -> bool:
    """CPU and candidate-domain constraints for one node placement."""
    return pn.domain in candidate_domains and vn.cpu_demand <= pn.cpu_residual


def check_link_feasible(vl: VirtualLink, path, demand: int | None = None) -> bool:
    """True iff every physical link on the path can carry the demand
    (or an explicit split share) out of its residual bandwidth."""
    need = vl.bw_demand if demand is None else demand
    return all(l.bw_residual >= need for l in path)


def node_mapping_cost(vn: VirtualNode, pn, weights: ObjectiveWeights) -> float:
    """Objective node term for placing vn on pn: allocated CPU times unit
    price, plus node delay, under the configured weights."""
    return weights.w_price * (vn.cpu_demand * pn.cpu_price) + weights.w_delay * pn.delay


# ---------------------------------------------------------------------------
# candidate selection

def select_candidates(subgraph: Subgraph, net: SubstrateNetwork, domain: int,
                      k: int, weights: ObjectiveWeights,
                      marked: set[int] | None = None) -> CandidateSet:
    """Pick up to k cheapest feasible physical nodes per virtual node.

    Virtual nodes are processed in descending cpu_demand order (id breaks
    ties); every selected physical node is marked so later virtual nodes of
    the same request cannot reuse it.
    """
    if marked is None:
        marked = set()
    pool = net.nodes_in_domain(domain)
    entries: dict[int, list[tuple[int, float]]] = {}
    for vn in sorted(subgraph.nodes, key=lambda v: (-v.cpu_demand, v.id)):
        feasible = [(node_mapping_cost(vn, pn, weights), pn.id) for pn in pool
                    if pn.id not in marked and pn.cpu_residual >= vn.cpu_demand]
        feasible.sort()
        chosen = feasible[:k]
        entries[vn.id] = [(nid, cost) for cost, nid in chosen]
        marked.update(nid for _, nid in chosen)
    return CandidateSet(entries)


# ---------------------------------------------------------------------------
# partition (global controller pre-mapping)

def partition_vnr(vnr: VirtualNetworkRequest, net: SubstrateNetwork,
                  config: EmbedderConfig) -> Partition:
    """Assign each virtual node to one domain.

    Scored estimate: best node_mapping_cost per virtual node in its domain,
    plus one-hop link terms from average intra-domain attributes; links cut
    between domains are charged ``cut_hop_estimate`` hops at average
    inter-domain attributes. The assignment space is searched exhaustively
    while it fits ``assignment_cap``, else per-node greedy argmin.
    """
    w = config.weights
    vnodes = sorted(vnr.nodes, key=lambda v: v.id)
    n = len(vnodes)
    domains = sorted(net.domains)

    best_cost: list[dict[int, float]] = []
    for vn in vnodes:
        per_domain: dict[int, float] = {}
        for d in domains:
            costs = [node_mapping_cost(vn, pn, w) for pn in net.nodes_in_domain(d)
                     if pn.cpu_residual >= vn.cpu_demand]
            if costs:
                per_domain[d] = min(costs)
        if not per_domain:
            raise RejectionError("no_candidates")
        best_cost.append(per_domain)

    cand_domains = [sorted(per.keys()) for per in best_cost]
    intra_price, intra_delay, inter_price, inter_delay = net.link_attribute_means()
    index_of = {vn.id: i for i, vn in enumerate(vnodes)}

    def intra_estimate(vl: VirtualLink, d: int) -> float:
        return w.w_price * vl.bw_demand * intra_price[d] + w.w_delay * intra_delay[d]

    def inter_estimate(vl: VirtualLink) -> float:
        one_hop = w.w_price * vl.bw_demand * inter_price + w.w_delay * inter_delay
        return config.cut_hop_estimate * one_hop

    space = 1
    for lst in cand_domains:
        space *= len(lst)
        if space > config.assignment_cap:
            break

    if space <= config.assignment_cap:
        # numpy pays off only once the assignment grid is large
        search = _partition_exhaustive if space > 256 else _partition_scan
        chosen, estimate = search(
            vnodes, vnr.links, cand_domains, best_cost, index_of,
            intra_estimate, inter_estimate)
    else:
        # greedy per-node argmin, capped by how many virtual nodes a domain
        # can actually host: candidate selection claims up to k exclusive
        # physical nodes per virtual node, so m hosts carry at most
        # ceil(m / k) of them
        cap = {d: (len(net.nodes_in_domain(d)) - 1) // config.k + 1
               for d in domains}
        load = {d: 0 for d in domains}
        chosen = [0] * n
        for i, vn in sorted(enumerate(vnodes),
                            key=lambda iv: (-iv[1].cpu_demand, iv[1].id)):
            open_domains = [d for d in cand_domains[i] if load[d] < cap[d]]
            pool = open_domains or cand_domains[i]
            chosen[i] = min(pool, key=lambda d: (best_cost[i][d], d))
            load[chosen[i]] += 1
        estimate = sum(best_cost[i][chosen[i]] for i in range(n))
        for vl in vnr.links:
            du = chosen[index_of[vl.endpoints[0]]]
            dv = chosen[index_of[vl.endpoints[1]]]
            estimate += intra_estimate(vl, du) if du == dv else inter_estimate(vl)

    assignment = {vn.id: chosen[i] for i, vn in enumerate(vnodes)}
    subgraphs: dict[int, Subgraph] = {}
    for vn in vnodes:
        subgraphs.setdefault(assignment[vn.id], Subgraph([], [])).nodes.append(vn)
    cut_links: list[VirtualLink] = []
    for vl in vnr.links:
        du, dv = assignment[vl.endpoints[0]], assignment[vl.endpoints[1]]
        if du == dv:
            subgraphs[du].links.append(vl)
        else:
            cut_links.append(vl)
    return Partition(assignment, subgraphs, cut_links, estimate)


def _partition_scan(vnodes, vlinks, cand_domains, best_cost, index_of,
                    intra_estimate, inter_estimate):
    """Plain loop over every domain-assignment vector; first strict minimum
    wins (lexicographic enumeration order, same contract as the vectorized
    route below)."""
    link_ends = [(index_of[vl.endpoints[0]], index_of[vl.endpoints[1]], vl)
                 for vl in vlinks]
    best_val = None
    best_assign = None
    for assign in itertools.product(*cand_domains):
        total = sum(best_cost[i][d] for i, d in enumerate(assign))
        for iu, iv, vl in link_ends:
            du, dv = assign[iu], assign[iv]
            total += intra_estimate(vl, du) if du == dv else inter_estimate(vl)
        if best_val is None or total < best_val:
            best_val = total
            best_assign = assign
    return list(best_assign), float(best_val)


def _partition_exhaustive(vnodes, vlinks, cand_domains, best_cost, index_of,
                          intra_estimate, inter_estimate):
    """Vectorized scan of every domain-assignment vector (first minimum wins,
    which matches lexicographic enumeration order)."""
    n = len(vnodes)
    counts = [len(lst) for lst in cand_domains]
    grid = np.indices(counts).reshape(n, -1).T      # (space, n) positions
    domain_arrays = [np.array(lst, dtype=np.int64) for lst in cand_domains]
    cost_arrays = [np.array([best_cost[i][d] for d in cand_domains[i]])
                   for i in range(n)]

    total = np.zeros(grid.shape[0])
    dom_cols = []
    for i in range(n):
        total += cost_arrays[i][grid[:, i]]
        dom_cols.append(domain_arrays[i][grid[:, i]])

    max_domain = int(max(arr.max() for arr in domain_arrays)) if n else 0
    for vl in vlinks:
        iu, iv = index_of[vl.endpoints[0]], index_of[vl.endpoints[1]]
        du, dv = dom_cols[iu], dom_cols[iv]
        intra_by_domain = np.zeros(max_domain + 1)
        for d in set(cand_domains[iu]) | set(cand_domains[iv]):
            intra_by_domain[d] = intra_estimate(vl, d)
        total += np.where(du == dv, intra_by_domain[du], inter_estimate(vl))

    best = int(np.argmin(total))
    chosen = [int(dom_cols[i][best]) for i in range(n)]
    return chosen, float(total[best])


# ---------------------------------------------------------------------------
# link mapping helpers

def _map_single_link(net, view, src, dst, demand, res: Reservations,
                     table_path=None, splitting=False):
    """Map one virtual link between fixed physical endpoints.

    Prefers the supplied least-delay table path; when that is bandwidth-
    infeasible (or no table path given) falls back to a feasibility-filtered
    least-delay search, optionally splitting the demand over two paths.
    Returns a list of PathAssignment or None.
    """
    if table_path is not None:
        if all(res.available_bw(net, key) >= demand for key in table_path):
            return [PathAssignment(tuple(table_path), demand)]
        if not splitting:
            return None
    else:
        found = dijkstra_path(view, src, dst,
                              lambda key: res.available_bw(net, key) >= demand)
        if found is not None:
            return [PathAssignment(tuple(found[1]), demand)]
        if not splitting:
            return None

    # two-path split: carry what the best usable path can, route the rest
    found = dijkstra_path(view, src, dst,
                          lambda key: res.available_bw(net, key) >= 1)
    if found is None or not found[1]:
        return None
    first = found[1]
    share1 = min(min(res.available_bw(net, key) for key in first), demand)
    if share1 >= demand:
        return [PathAssignment(tuple(first), demand)]
    remaining = demand - share1
    res.reserve_path(first, share1)
    second = dijkstra_path(view, src, dst,
                           lambda key: res.available_bw(net, key) >= remaining)
    # undo the probe reservation; the caller re-reserves on success
    for key in first:
        res.link_used[key] -= share1
    if second is None:
        return None
    return [PathAssignment(tuple(first), share1),
            PathAssignment(tuple(second[1]), remaining)]


def _cheapest_combinations(lists, limit):
    """Yield index tuples into per-node candidate lists in ascending order
    of total cost (ties by index tuple), without materializing the full
    product. Standard best-first frontier walk; each list is cost-ascending.
    """
    start = (0,) * len(lists)
    heap = [(sum(lst[0][1] for lst in lists), start)]
    seen = {start}
    yielded = 0
    while heap and yielded < limit:
        total, idx = heapq.heappop(heap)
        yield idx
        yielded += 1
        for i, lst in enumerate(lists):
            j = idx[i] + 1
            if j < len(lst):
                nxt = idx[:i] + (j,) + idx[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(
                        heap, (total - lst[j - 1][1] + lst[j][1], nxt))


def map_intra_domain(candidates: CandidateSet, subgraph: Subgraph,
                     net: SubstrateNetwork, domain: int, table: PathTable,
                     config: EmbedderConfig, res: Reservations,
                     view: GraphView | None = None):
    """Map one domain's subgraph: cheapest candidate combination whose
    virtual links all fit on least-delay table paths. Tries combinations in
    ascending total-node-cost order up to ``backtrack_limit``.

    Returns (placement, link assignments) and records reservations;
    raises RejectionError when every tried combination fails.
    """
    order = sorted(subgraph.nodes, key=lambda v: (-v.cpu_demand, v.id))
    lists = [candidates.entries[vn.id] for vn in order]
    if any(not lst for lst in lists):
        raise RejectionError("no_candidates")

    if config.splitting and view is None:
        view = GraphView(net, domain)

    links = sorted(subgraph.links, key=lambda l: l.endpoints)
    for idx in _cheapest_combinations(lists, config.backtrack_limit):
        placement = {vn.id: lists[i][idx[i]][0] for i, vn in enumerate(order)}
        trial = Reservations()
        trial.link_used.update(res.link_used)
        assignments: dict[LinkKey, list[PathAssignment]] = {}
        ok = True
        for vl in links:
            src = placement[vl.endpoints[0]]
            dst = placement[vl.endpoints[1]]
            table_path = table.path_links(src, dst)
            if table_path is None:
                ok = False
                break
            mapped = _map_single_link(net, view, src, dst, vl.bw_demand, trial,
                                      table_path=table_path,
                                      splitting=config.splitting)
            if mapped is None:
                ok = False
                break
            assignments[vl.endpoints] = mapped
            for pa in mapped:
                trial.reserve_path(pa.path, pa.share)
        if ok:
            res.link_used = trial.link_used
            for vn in order:
                res.reserve_node(placement[vn.id], vn.cpu_demand)
            return placement, assignments
    raise RejectionError("intra_mapping_failed")


def map_inter_domain(node_map: dict[int, int], cut_links: list[VirtualLink],
                     net: SubstrateNetwork, config: EmbedderConfig,
                     res: Reservations, view: GraphView | None = None):
    """Route each cut virtual link over the full substrate graph on the
    least-delay path with sufficient residual bandwidth on every hop."""
    if view is None:
        view = GraphView(net)
    assignments: dict[LinkKey, list[PathAssignment]] = {}
    for vl in sorted(cut_links, key=lambda l: l.endpoints):
        src, dst = node_map[vl.endpoints[0]], node_map[vl.endpoints[1]]
        mapped = _map_single_link(net, view, src, dst, vl.bw_demand, res,
                                  splitting=config.splitting)
        if mapped is None:
            raise RejectionError("inter_mapping_failed")
        assignments[vl.endpoints] = mapped
        for pa in mapped:
            res.reserve_path(pa.path, pa.share)
    return assignments


# ---------------------------------------------------------------------------
# orchestration

def embed(vnr: VirtualNetworkRequest, net: SubstrateNetwork,
          config: EmbedderConfig | None = None,
          tables: dict[int, PathTable] | None = None,
          full_view: GraphView | None = None) -> Embedding:
    """Run the full pipeline for one request. Returns an accepted Embedding
    with objective/cost/delay populated, or a rejected one with a reason and
    no resource footprint. Never mutates the substrate."""
    if config is None:
        config = EmbedderConfig()
    if tables is None:
        tables = {}
    try:
        part = partition_vnr(vnr, net, config)
        res = Reservations()
        node_map: dict[int, int] = {}
        link_map: dict[LinkKey, list[PathAssignment]] = {}
        for d in sorted(part.subgraphs):
            sub = part.subgraphs[d]
            cands = select_candidates(sub, net, d, config.k, config.weights)
            if cands.empty_nodes():
                raise RejectionError("no_candidates")
            if d not in tables:
                tables[d] = all_pairs_shortest_paths(net, d)
            placement, assignments = map_intra_domain(
                cands, sub, net, d, tables[d], config, res)
            node_map.update(placement)
            link_map.update(assignments)
        if part.cut_links:
            link_map.update(map_inter_domain(node_map, part.cut_links, net,
                                             config, res, view=full_view))
    except RejectionError as rej:
        return Embedding(vnr_id=vnr.id, status="rejected", reason=rej.reason)

    emb = Embedding(
        vnr_id=vnr.id, status="accepted",
        node_map=node_map,
        node_demands={vn.id: vn.cpu_demand for vn in vnr.nodes},
        link_map=link_map,
    )
    emb.objective = objective_value(emb, net, config.weights)
    emb.cost = embedding_cost(emb)
    emb.delay = embedding_delay(emb, net)
    return emb


# ---------------------------------------------------------------------------
# metrics

def objective_value(emb: Embedding, net: SubstrateNetwork,
                    weights: ObjectiveWeights) -> float:
    """Objective: allocated CPU x price + node delay over mapped nodes, plus
    allocated bandwidth x price + link delay over every physical link
    carrying each virtual link."""
    if not emb.accepted:
        raise ValueError("objective is defined only for accepted embeddings")
    total = 0.0
    for vid, pid in emb.node_map.items():
        pn = net.nodes[pid]
        total += weights.w_price * (emb.node_demands[vid] * pn.cpu_price)
        total += weights.w_delay * pn.delay
    for assignments in emb.link_map.values():
        for pa in assignments:
            for key in pa.path:
                l = net.links[key]
                total += weights.w_price * (pa.share * l.bw_price)
                total += weights.w_delay * l.delay
    return total


def embedding_cost(emb: Embedding) -> int:
    """Resource cost: total CPU demand plus bandwidth demand weighted by the
    hop count of each mapped path (shares for split links)."""
    if not emb.accepted:
        raise ValueError("cost is defined only for accepted embeddings")
    total = sum(emb.node_demands.values())
    for assignments in emb.link_map.values():
        for pa in assignments:
            total += pa.share * len(pa.path)
    return total


def embedding_delay(emb: Embedding, net: SubstrateNetwork) -> int:
    """Total delay: each mapped physical node once, plus each physical link
    once per virtual link it carries."""
    if not emb.accepted:
        raise ValueError("delay is defined only for accepted embeddings")
    total = sum(net.nodes[pid].delay for pid in set(emb.node_map.values()))
    for assignments in emb.link_map.values():
        used = {key for pa in assignments for key in pa.path}
        total += sum(net.links[key].delay for key in used)
    return total

"""Simplified comparison algorithms.

Two single-sentence characterizations turned into runnable policies:

* boundary-hops: candidate nodes ranked by proximity to border nodes, node
  choice refined by a seeded randomized local search (a deliberate
  simplification of the PSO original, hence the "(simplified)" label).
* link-first: a Kruskal spanning structure over bandwidth-feasible physical
  links decides paths first; node placement follows from the tree.

Both share the embedder's feasibility rules, reservation bookkeeping, and
metric computations; they differ only in selection policy.
"""

from __future__ import annotations

import random
from collections import deque

from .embedder import (
    Embedding,
    EmbedderConfig,
    PathAssignment,
    Reservations,
    _map_single_link,
    embed,
    embedding_cost,
    embedding_delay,
    node_mapping_cost,
    objective_value,
)
from .model import LinkKey, SubstrateNetwork, VirtualNetworkRequest
from .paths import GraphView


def border_hop_distances(net: SubstrateNetwork) -> dict[int, int]:
    """Hop distance from every node to its domain's nearest border node,
    over intra-domain links only. Domains without border nodes (single-domain
    substrates) get distance 0 everywhere."""
    dist: dict[int, int] = {}
    for d in net.domains:
        borders = [n.id for n in net.border_nodes(d)]
        if not borders:
            for n in net.nodes_in_domain(d):
                dist[n.id] = 0
            continue
        frontier = deque()
        for nid in borders:
            dist[nid] = 0
            frontier.append(nid)
        while frontier:
            u = frontier.popleft()
            for key in net.adjacency[u]:
                if net.links[key].kind != "intra":
                    continue
                v = key[1] if key[0] == u else key[0]
                if v not in dist:
                    dist[v] = dist[u] + 1
                    frontier.append(v)
        # unreachable intra-domain nodes cannot occur in a valid substrate,
        # but hand-built test nets may be sloppy
        for n in net.nodes_in_domain(d):
            dist.setdefault(n.id, 0)
    return dist


def embed_boundary_hops(vnr: VirtualNetworkRequest, net: SubstrateNetwork,
                        config: EmbedderConfig | None = None,
                        border_hops: dict[int, int] | None = None,
                        full_view: GraphView | None = None) -> Embedding:
    """Boundary-proximity embedding with randomized local search.

    Candidates per virtual node: the k feasible unmarked nodes ranked by
    (border-hop distance, cpu_residual descending, id), substrate-wide. A
    seeded hill climb over single-candidate swaps minimizes the objective
    estimate; link mapping then routes every virtual link on the full graph.
    """
    if config is None:
        config = EmbedderConfig()
    if border_hops is None:
        border_hops = border_hop_distances(net)
    w = config.weights

    order = sorted(vnr.nodes, key=lambda v: (-v.cpu_demand, v.id))
    marked: set[int] = set()
    lists = []          # per virtual node: [(pnode id, node cost, domain)]
    pool = sorted(net.nodes.values(), key=lambda n: n.id)
    for vn in order:
        ranked = sorted(
            (n for n in pool if n.id not in marked and n.cpu_residual >= vn.cpu_demand),
            key=lambda n: (border_hops[n.id], -n.cpu_residual, n.id))
        chosen = ranked[:config.k]
        if not chosen:
            return Embedding(vnr_id=vnr.id, status="rejected", reason="no_candidates")
        lists.append([(n.id, node_mapping_cost(vn, n, w), n.domain) for n in chosen])
        marked.update(n.id for n in chosen)

    intra_price, intra_delay, inter_price, inter_delay = net.link_attribute_means()
    links = sorted(vnr.links, key=lambda l: l.endpoints)
    index_of = {vn.id: i for i, vn in enumerate(order)}

    def estimate(pos) -> float:
        total = sum(lists[i][pos[i]][1] for i in range(len(order)))
        for vl in links:
            du = lists[index_of[vl.endpoints[0]]][pos[index_of[vl.endpoints[0]]]][2]
            dv = lists[index_of[vl.endpoints[1]]][pos[index_of[vl.endpoints[1]]]][2]
            if du == dv:
                total += w.w_price * vl.bw_demand * intra_price[du] + w.w_delay * intra_delay[du]
            else:
                total += config.cut_hop_estimate * (
                    w.w_price * vl.bw_demand * inter_price + w.w_delay * inter_delay)
        return total

    rng = random.Random(f"pso-{config.seed}-{vnr.id}")
    current = (0,) * len(order)
    evaluated = {current: estimate(current)}
    for _ in range(config.local_search_iters):
        i = rng.randrange(len(order))
        j = rng.randrange(len(lists[i]))
        if j == current[i]:
            continue
        trial = current[:i] + (j,) + current[i + 1:]
        if trial not in evaluated:
            evaluated[trial] = estimate(trial)
        if evaluated[trial] < evaluated[current]:
            current = trial

    if full_view is None:
        full_view = GraphView(net)
    ranked_positions = sorted(evaluated.items(), key=lambda kv: (kv[1], kv[0]))
    for pos, _ in ranked_positions[:config.backtrack_limit]:
        placement = {vn.id: lists[i][pos[i]][0] for i, vn in enumerate(order)}
        res = Reservations()
        link_map: dict[LinkKey, list[PathAssignment]] = {}
        ok = True
        for vl in links:
            src, dst = placement[vl.endpoints[0]], placement[vl.endpoints[1]]
            mapped = _map_single_link(net, full_view, src, dst, vl.bw_demand,
                                      res, splitting=config.splitting)
            if mapped is None:
                ok = False
                break
            link_map[vl.endpoints] = mapped
            for pa in mapped:
                res.reserve_path(pa.path, pa.share)
        if ok:
            emb = Embedding(
                vnr_id=vnr.id, status="accepted", node_map=placement,
                node_demands={vn.id: vn.cpu_demand for vn in vnr.nodes},
                link_map=link_map)
            emb.objective = objective_value(emb, net, w)
            emb.cost = embedding_cost(emb)
            emb.delay = embedding_delay(emb, net)
            return emb
    return Embedding(vnr_id=vnr.id, status="rejected", reason="link_mapping_failed")


# ---------------------------------------------------------------------------
# link-first (spanning tree) baseline

class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _tree_path(tree_adj, src, dst):
    """Unique path between two nodes of a forest, as a link-key list, or
    None when they sit in different components."""
    if src == dst:
        return []
    parent = {src: (None, None)}
    frontier = deque([src])
    while frontier:
        u = frontier.popleft()
        for v, key in tree_adj[u]:
            if v not in parent:
                parent[v] = (u, key)
                if v == dst:
                    frontier.clear()
                    break
                frontier.append(v)
    if dst not in parent:
        return None
    path = []
    node = dst
    while node != src:
        prev, key = parent[node]
        path.append(key)
        node = prev
    path.reverse()
    return path


def embed_link_first(vnr: VirtualNetworkRequest, net: SubstrateNetwork,
                     config: EmbedderConfig | None = None) -> Embedding:
    """Link-first embedding over a Kruskal spanning structure.

    Each virtual node gets a candidate terminal (cheapest feasible unused
    node). Physical links with residual bandwidth below the request's
    largest demand are dropped; the rest form a minimum-weight spanning
    forest under weight = bw_price x demand + delay. Every virtual link is
    then mapped onto the unique tree path between its terminals, however
    long; greedy throughout, no backtracking.
    """
    if config is None:
        config = EmbedderConfig()
    w = config.weights
    res = Reservations()
    used: set[int] = set()
    node_map: dict[int, int] = {}
    link_map: dict[LinkKey, list[PathAssignment]] = {}

    def reject(reason):
        return Embedding(vnr_id=vnr.id, status="rejected", reason=reason)

    for vn in sorted(vnr.nodes, key=lambda v: (-v.cpu_demand, v.id)):
        feasible = sorted(
            ((node_mapping_cost(vn, n, w), n.id) for n in net.nodes.values()
             if n.id not in used and n.cpu_residual >= vn.cpu_demand))
        if not feasible:
            return reject("no_candidates")
        node_map[vn.id] = feasible[0][1]
        used.add(feasible[0][1])

    if vnr.links:
        bw_ref = max(l.bw_demand for l in vnr.links)
        edges = sorted(
            ((w.w_price * l.bw_price * bw_ref + w.w_delay * l.delay, key)
             for key, l in net.links.items() if l.bw_residual >= bw_ref))
        uf = _UnionFind(net.nodes.keys())
        tree_adj: dict[int, list] = {nid: [] for nid in net.nodes}
        for _, key in edges:
            if uf.union(*key):
                u, v = key
                tree_adj[u].append((v, key))
                tree_adj[v].append((u, key))

        for vl in sorted(vnr.links, key=lambda l: (-l.bw_demand, l.endpoints)):
            keys = _tree_path(tree_adj, node_map[vl.endpoints[0]],
                              node_map[vl.endpoints[1]])
            if keys is None:
                return reject("link_mapping_failed")
            if any(res.available_bw(net, k) < vl.bw_demand for k in keys):
                return reject("link_mapping_failed")
            link_map[vl.endpoints] = [PathAssignment(tuple(keys), vl.bw_demand)]
            res.reserve_path(keys, vl.bw_demand)

    emb = Embedding(
        vnr_id=vnr.id, status="accepted", node_map=node_map,
        node_demands={vn.id: vn.cpu_demand for vn in vnr.nodes},
        link_map=link_map)
    emb.objective = objective_value(emb, net, w)
    emb.cost = embedding_cost(emb)
    emb.delay = embedding_delay(emb, net)
    return emb


ALGORITHMS = {
    "moo": embed,
    "pso": embed_boundary_hops,
    "mc": embed_link_first,
}

ALGORITHM_LABELS = {
    "moo": "MOO-VNE",
    "pso": "PSO-VNE (simplified)",
    "mc": "MC-VNE (simplified)",
}

"""Least-delay path machinery.

``PathTable`` holds all-pairs least-delay distances for one domain's
intra-domain graph, computed with Floyd-Warshall and a next-hop matrix for
path reconstruction. Link delays never change after generation, so a table
stays valid for a whole simulation run; only bandwidth feasibility has to be
rechecked per request.

``dijkstra_path`` is the single-source counterpart used where the candidate
link set depends on current residuals (inter-domain stitching, path
splitting), with deterministic (distance, node id) tie-breaking.
"""

from __future__ import annotations

import heapq
from math import inf

from .model import LinkKey, SubstrateNetwork, link_key


class PathTable:
    """All-pairs least-delay distances and paths over one domain."""

    def __init__(self, node_ids: list[int], dist: list[list[float]], nxt: list[list[int | None]]):
        self.node_ids = node_ids
        self.index = {nid: i for i, nid in enumerate(node_ids)}
        self.dist = dist
        self.nxt = nxt

    def distance(self, a: int, b: int) -> float:
        return self.dist[self.index[a]][self.index[b]]

    def path(self, a: int, b: int) -> list[int] | None:
        """Node sequence from a to b, or None if unreachable."""
        i, j = self.index[a], self.index[b]
        if i == j:
            return [a]
        if self.nxt[i][j] is None:
            return None
        seq = [a]
        while i != j:
            i = self.nxt[i][j]
            seq.append(self.node_ids[i])
        return seq

    def path_links(self, a: int, b: int) -> list[LinkKey] | None:
        seq = self.path(a, b)
        if seq is None:
            return None
        return [link_key(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]


def all_pairs_shortest_paths(net: SubstrateNetwork, domain: int) -> PathTable:
    """Floyd-Warshall over the domain's intra-domain links, weighted by delay."""
    node_ids = sorted(n.id for n in net.nodes_in_domain(domain))
    n = len(node_ids)
    index = {nid: i for i, nid in enumerate(node_ids)}

    dist = [[inf] * n for _ in range(n)]
    nxt: list[list[int | None]] = [[None] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = 0.0
    for l in net.intra_links(domain):
        u, v = l.endpoints
        i, j = index[u], index[v]
        dist[i][j] = dist[j][i] = float(l.delay)
        nxt[i][j] = j
        nxt[j][i] = i

    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            ni = nxt[i]
            nik = ni[k]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
                    ni[j] = nik
    return PathTable(node_ids, dist, nxt)


class GraphView:
    """Adjacency snapshot of a substrate (full graph or one domain's
    intra-domain subgraph) for repeated Dijkstra queries."""

    def __init__(self, net: SubstrateNetwork, domain: int | None = None):
        self.net = net
        self.adj: dict[int, list[tuple[int, float, LinkKey]]] = {}
        if domain is None:
            members = set(net.nodes)
        else:
            members = {n.id for n in net.nodes_in_domain(domain)}
        for nid in members:
            self.adj[nid] = []
        for key, l in net.links.items():
            u, v = key
            if u not in self.adj or v not in self.adj:
                continue
            if domain is not None and l.kind != "intra":
                continue
            w = float(l.delay)
            self.adj[u].append((v, w, key))
            self.adj[v].append((u, w, key))


def dijkstra_path(view: GraphView, src: int, dst: int,
                  usable) -> tuple[float, list[LinkKey]] | None:
    """Least-delay path from src to dst over links where ``usable(key)`` is
    true. Returns (delay, link keys) or None if dst is unreachable."""
    if src == dst:
        return (0.0, [])
    dist = {src: 0.0}
    prev: dict[int, tuple[int, LinkKey]] = {}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == dst:
            break
        done.add(u)
        for v, w, key in view.adj[u]:
            if v in done or not usable(key):
                continue
            alt = d + w
            if alt < dist.get(v, inf):
                dist[v] = alt
                prev[v] = (u, key)
                heapq.heappush(heap, (alt, v))
    if dst not in prev:
        return None
    keys = []
    node = dst
    while node != src:
        node, key = prev[node]
        keys.append(key)
    keys.reverse()
    return (dist[dst], keys)

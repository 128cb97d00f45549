"""Independent reference implementations used to cross-check the library.

Everything here is deliberately written from scratch against the same
definitions (not imported from the package internals), so agreement is
evidence rather than tautology.
"""

import heapq
import itertools

from mdvne.model import link_key


def snapshot(net):
    """Residual state as comparable tuples."""
    nodes = tuple(sorted((n.id, n.cpu_residual) for n in net.nodes.values()))
    links = tuple(sorted((l.endpoints, l.bw_residual) for l in net.links.values()))
    return nodes, links


# ---------------------------------------------------------------------------
# shortest paths

def dijkstra_distances(net, source, domain=None, weight="delay"):
    """Single-source least-delay distances; intra-domain only when a domain
    is given. Plain binary-heap Dijkstra."""
    dist = {source: 0}
    heap = [(0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for key in net.adjacency[u]:
            l = net.links[key]
            if domain is not None and l.kind != "intra":
                continue
            v = key[1] if key[0] == u else key[0]
            if domain is not None and net.nodes[v].domain != domain:
                continue
            nd = d + getattr(l, weight)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def filtered_dijkstra(net, src, dst, demand):
    """Least-delay path over links with bw_residual >= demand. Returns
    (delay, [link keys]) or None."""
    dist = {src: 0}
    prev = {}
    heap = [(0, src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u == dst:
            break
        if u in done:
            continue
        done.add(u)
        for key in net.adjacency[u]:
            l = net.links[key]
            if l.bw_residual < demand:
                continue
            v = key[1] if key[0] == u else key[0]
            nd = d + l.delay
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                prev[v] = (u, key)
                heapq.heappush(heap, (nd, v))
    if dst not in dist:
        return None
    path = []
    node = dst
    while node != src:
        u, key = prev[node]
        path.append(key)
        node = u
    path.reverse()
    return dist[dst], path


# ---------------------------------------------------------------------------
# brute-force embedding enumeration (toy scale only)

def all_simple_paths(net, src, dst, max_len=8):
    """Every simple path src->dst as a list of link keys (DFS)."""
    paths = []
    stack = [(src, [src], [])]
    while stack:
        u, visited, keys = stack.pop()
        if len(keys) >= max_len:
            continue
        for key in net.adjacency[u]:
            v = key[1] if key[0] == u else key[0]
            if v in visited:
                continue
            if v == dst:
                paths.append(keys + [key])
            else:
                stack.append((v, visited + [v], keys + [key]))
    return paths


def best_path_objective(net, src, dst, demand, w_price=1.0, w_delay=1.0):
    """Minimum link-term objective over all bandwidth-feasible simple
    paths between two hosts, or None."""
    best = None
    for keys in all_simple_paths(net, src, dst):
        if any(net.links[k].bw_residual < demand for k in keys):
            continue
        val = sum(w_price * demand * net.links[k].bw_price + w_delay * net.links[k].delay
                  for k in keys)
        if best is None or val < best:
            best = val
    return best


def brute_force_objective(vnr, net, w_price=1.0, w_delay=1.0):
    """Optimal objective over every injective node placement, with each
    virtual link routed on its own best feasible simple path.

    Links are treated independently, which is exact when bandwidth is ample
    or the request has a single link; only use it on such instances.
    """
    vnodes = sorted(vnr.nodes, key=lambda v: v.id)
    pids = sorted(net.nodes)
    best = None
    for placement in itertools.permutations(pids, len(vnodes)):
        ok = True
        total = 0.0
        for vn, pid in zip(vnodes, placement):
            pn = net.nodes[pid]
            if vn.cpu_demand > pn.cpu_residual:
                ok = False
                break
            total += w_price * vn.cpu_demand * pn.cpu_price + w_delay * pn.delay
        if not ok:
            continue
        by_id = {vn.id: pid for vn, pid in zip(vnodes, placement)}
        for vl in vnr.links:
            term = best_path_objective(net, by_id[vl.endpoints[0]],
                                       by_id[vl.endpoints[1]], vl.bw_demand,
                                       w_price, w_delay)
            if term is None:
                ok = False
                break
            total += term
        if ok and (best is None or total < best):
            best = total
    return best


# ---------------------------------------------------------------------------
# metric recomputation walkers

def recompute_objective(emb, net, w_price=1.0, w_delay=1.0):
    total = 0.0
    for vid, pid in emb.node_map.items():
        pn = net.nodes[pid]
        total += w_price * emb.node_demands[vid] * pn.cpu_price + w_delay * pn.delay
    for assignments in emb.link_map.values():
        for pa in assignments:
            for key in pa.path:
                l = net.links[key]
                total += w_price * pa.share * l.bw_price + w_delay * l.delay
    return total


def recompute_cost(emb):
    total = sum(emb.node_demands.values())
    for assignments in emb.link_map.values():
        for pa in assignments:
            total += pa.share * len(pa.path)
    return total


def recompute_delay(emb, net):
    total = sum(net.nodes[p].delay for p in set(emb.node_map.values()))
    for assignments in emb.link_map.values():
        seen = set()
        for pa in assignments:
            seen.update(pa.path)
        total += sum(net.links[k].delay for k in seen)
    return total


# ---------------------------------------------------------------------------
# structural validity walker

def check_embedding_valid(emb, vnr, net, splitting=False):
    """Assert structural invariants of an accepted embedding: injective
    node map, endpoint-correct contiguous cycle-free paths, demands met
    against residuals. Call before committing, while the substrate still
    holds admission-time state."""
    assert emb.accepted
    hosts = list(emb.node_map.values())
    assert len(hosts) == len(set(hosts)), "node_map not injective"
    assert set(emb.node_map) == {vn.id for vn in vnr.nodes}
    for vn in vnr.nodes:
        pn = net.nodes[emb.node_map[vn.id]]
        assert vn.cpu_demand <= pn.cpu_residual, "residual below demand"
    usage = {}
    for assignments in emb.link_map.values():
        for pa in assignments:
            for key in pa.path:
                usage[key] = usage.get(key, 0) + pa.share
    for key, amount in usage.items():
        assert amount <= net.links[key].bw_residual, f"link {key} overdrawn"
    assert set(emb.link_map) == {vl.endpoints for vl in vnr.links}
    for vl in vnr.links:
        assignments = emb.link_map[vl.endpoints]
        if not splitting:
            assert len(assignments) == 1
        assert sum(pa.share for pa in assignments) == vl.bw_demand
        src = emb.node_map[vl.endpoints[0]]
        dst = emb.node_map[vl.endpoints[1]]
        for pa in assignments:
            assert pa.share >= 1
            node = src
            seen = {node}
            for key in pa.path:
                assert key in net.links, f"unknown link {key}"
                u, v = key
                assert node in (u, v), "path not contiguous"
                node = v if node == u else u
                assert node not in seen, "path has a cycle"
                seen.add(node)
            assert node == dst, "path endpoint mismatch"

"""Small constructors for hand-built test fixtures."""

from mdvne.model import (
    PhysicalLink,
    PhysicalNode,
    SubstrateNetwork,
    VirtualLink,
    VirtualNetworkRequest,
    VirtualNode,
    link_key,
)


def make_net(node_specs, link_specs, residuals=None):
    """Build a substrate from terse tuples.

    node_specs: (id, domain, cpu, price, delay) — residual starts at cpu.
    link_specs: (u, v, bw, price, delay) — kind derived from node domains.
    residuals: optional {"nodes": {id: residual}, "links": {(u,v): residual}}.
    """
    residuals = residuals or {}
    nres = residuals.get("nodes", {})
    lres = residuals.get("links", {})
    domain_of = {nid: d for nid, d, *_ in node_specs}
    nodes = [PhysicalNode(nid, d, cpu, nres.get(nid, cpu), price, delay)
             for nid, d, cpu, price, delay in node_specs]
    links = []
    for u, v, bw, price, delay in link_specs:
        key = link_key(u, v)
        kind = "intra" if domain_of[u] == domain_of[v] else "inter"
        links.append(PhysicalLink(key, bw, lres.get(key, bw), price, delay, kind))
    for n in nodes:
        n.is_border = any(l.kind == "inter" and n.id in l.endpoints for l in links)
    return SubstrateNetwork(sorted(set(domain_of.values())), nodes, links)


def make_vnr(node_specs, link_specs, vnr_id=0, arrival=0.0, lifetime=100.0):
    """node_specs: (id, cpu_demand); link_specs: (u, v, bw_demand)."""
    nodes = [VirtualNode(nid, d) for nid, d in node_specs]
    links = [VirtualLink(link_key(u, v), d) for u, v, d in link_specs]
    return VirtualNetworkRequest(vnr_id, nodes, links, arrival, lifetime)

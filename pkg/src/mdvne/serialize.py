"""JSON (de)serialization for substrates, VNRs, and embedding results.

Schema (stable field order, suitable for golden files):

substrate: {"domains": [int], "nodes": [{id, domain, cpu_capacity,
    cpu_residual, cpu_price, delay, is_border}], "links": [{u, v,
    bw_capacity, bw_residual, bw_price, delay, kind}]}
vnr: {"id", "arrival_time", "lifetime", "nodes": [{id, cpu_demand}],
    "links": [{u, v, bw_demand}]}
embedding: {"vnr_id", "status", "reason", "node_map": {vid: pid},
    "link_map": [{u, v, "paths": [{"links": [[a, b]...], "share"}]}],
    "objective", "cost", "delay"}
"""

from __future__ import annotations

import json

from .model import (
    PhysicalLink,
    PhysicalNode,
    SubstrateNetwork,
    VirtualLink,
    VirtualNetworkRequest,
    VirtualNode,
)


def substrate_to_dict(net: SubstrateNetwork) -> dict:
    return {
        "domains": list(net.domains),
        "nodes": [
            {"id": n.id, "domain": n.domain, "cpu_capacity": n.cpu_capacity,
             "cpu_residual": n.cpu_residual, "cpu_price": n.cpu_price,
             "delay": n.delay, "is_border": n.is_border}
            for n in sorted(net.nodes.values(), key=lambda n: n.id)
        ],
        "links": [
            {"u": l.endpoints[0], "v": l.endpoints[1],
             "bw_capacity": l.bw_capacity, "bw_residual": l.bw_residual,
             "bw_price": l.bw_price, "delay": l.delay, "kind": l.kind}
            for l in sorted(net.links.values(), key=lambda l: l.endpoints)
        ],
    }


def substrate_from_dict(data: dict) -> SubstrateNetwork:
    nodes = [PhysicalNode(id=d["id"], domain=d["domain"],
                          cpu_capacity=d["cpu_capacity"], cpu_residual=d["cpu_residual"],
                          cpu_price=d["cpu_price"], delay=d["delay"],
                          is_border=d["is_border"])
             for d in data["nodes"]]
    links = [PhysicalLink(endpoints=(d["u"], d["v"]),
                          bw_capacity=d["bw_capacity"], bw_residual=d["bw_residual"],
                          bw_price=d["bw_price"], delay=d["delay"], kind=d["kind"])
             for d in data["links"]]
    return SubstrateNetwork(data["domains"], nodes, links)


def vnr_to_dict(vnr: VirtualNetworkRequest) -> dict:
    return {
        "id": vnr.id,
        "arrival_time": vnr.arrival_time,
        "lifetime": vnr.lifetime,
        "nodes": [{"id": n.id, "cpu_demand": n.cpu_demand} for n in vnr.nodes],
        "links": [{"u": l.endpoints[0], "v": l.endpoints[1], "bw_demand": l.bw_demand}
                  for l in vnr.links],
    }


def vnr_from_dict(data: dict) -> VirtualNetworkRequest:
    return VirtualNetworkRequest(
        id=data["id"],
        nodes=[VirtualNode(id=d["id"], cpu_demand=d["cpu_demand"]) for d in data["nodes"]],
        links=[VirtualLink(endpoints=(d["u"], d["v"]), bw_demand=d["bw_demand"])
               for d in data["links"]],
        arrival_time=data["arrival_time"],
        lifetime=data["lifetime"],
    )


def embedding_to_dict(emb) -> dict:
    return {
        "vnr_id": emb.vnr_id,
        "status": emb.status,
        "reason": emb.reason,
        "node_map": {str(vid): pid for vid, pid in sorted(emb.node_map.items())},
        "link_map": [
            {"u": vl[0], "v": vl[1],
             "paths": [{"links": [list(k) for k in assignment.path], "share": assignment.share}
                       for assignment in assignments]}
            for vl, assignments in sorted(emb.link_map.items())
        ],
        "objective": emb.objective,
        "cost": emb.cost,
        "delay": emb.delay,
    }


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def save_json(path, data: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(data))


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

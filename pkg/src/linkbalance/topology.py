"""Random strongly connected topologies, demand sets and JSON documents.

Document formats (JSON, integers only)::

    topology  {"nodes": 4, "edges": [[0, 1], [0, 2], ...]}
    flows     [{"src": 0, "dst": 3, "units": 1}, ...]
    weights   [{"src": 0, "dst": 1, "weight": 5}, ...]

Edges and weights are written in canonical edge order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DocumentError, InfeasibleProfile, InputError
from .network import Demand, FlowSet, NetworkGraph, WeightVector, build_graph


@dataclass(frozen=True)
class TopologyProfile:
    name: str
    node_count: int
    edge_count: int
    weight_max: int
    flow_count: int
    reference_cn: int | None = None  # as printed in the source table, for reference only

    @property
    def connectivity(self) -> int:
        n = self.node_count
        return round(100 * self.edge_count / (n * (n - 1)))

    def check(self) -> None:
        n, e = self.node_count, self.edge_count
        if n < 2:
            raise InfeasibleProfile(f"{self.name}: need at least 2 nodes, got {n}")
        if e < n:
            raise InfeasibleProfile(
                f"{self.name}: {e} edges cannot make {n} nodes strongly connected (need >= {n})"
            )
        if e > n * (n - 1):
            raise InfeasibleProfile(f"{self.name}: {e} edges exceed the complete digraph ({n * (n - 1)})")


PROFILES = {
    p.name: p
    for p in (
        TopologyProfile("n4e5", 4, 5, 5, 5, 31),
        TopologyProfile("n5e11", 5, 11, 5, 10, 44),
        TopologyProfile("n6e15", 6, 15, 5, 15, 42),
        TopologyProfile("n10e39", 10, 39, 9, 20, 39),
        TopologyProfile("n25e219", 25, 219, 9, 45, 35),
        TopologyProfile("n50e872", 50, 872, 9, 100, 35),
    )
}


def get_profile(name: str) -> TopologyProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise InputError(f"unknown profile {name!r}; known: {', '.join(PROFILES)}") from None


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def generate_topology(profile: TopologyProfile, rng_seed: int) -> NetworkGraph:
    """Directed cycle through all nodes in random order plus random extra edges."""
    profile.check()
    rng = _rng(rng_seed)
    n = profile.node_count
    perm = rng.permutation(n).tolist()
    cycle = {(perm[i], perm[(i + 1) % n]) for i in range(n)}
    rest = [(i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in cycle]
    extra = rng.choice(len(rest), size=profile.edge_count - n, replace=False)
    return build_graph(n, sorted(cycle) + [rest[k] for k in sorted(extra.tolist())])


def generate_flows(graph: NetworkGraph, flow_count: int, rng_seed: int) -> FlowSet:
    """``flow_count`` one-unit flows between random ordered pairs.

    Pairs are distinct while there are enough of them. Beyond that, the
    surplus flows land on uniformly drawn pairs and are merged into that
    pair's units.
    """
    n = graph.node_count
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    if flow_count < 0 or (flow_count and not pairs):
        raise InputError(f"cannot draw {flow_count} flows on {n} nodes")
    rng = _rng(rng_seed)
    picked = rng.choice(len(pairs), size=min(flow_count, len(pairs)), replace=False).tolist()
    units = dict.fromkeys(picked, 1)
    for k in rng.integers(len(pairs), size=max(0, flow_count - len(pairs))).tolist():
        units[k] += 1
    return FlowSet(tuple(Demand(*pairs[k], units[k]) for k in picked))


def connectivity(graph: NetworkGraph) -> float:
    """Percentage of the complete digraph's edges present, to one decimal."""
    n = graph.node_count
    if n < 2:
        return 0.0
    return round(100 * graph.edge_count / (n * (n - 1)), 1)


def strongly_connected(graph: NetworkGraph) -> bool:
    n = graph.node_count
    fwd = [[] for _ in range(n)]
    rev = [[] for _ in range(n)]
    for i, j in graph.edges:
        fwd[i].append(j)
        rev[j].append(i)

    def reach(adj):
        seen = {0}
        stack = [0]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen)

    return reach(fwd) == n and reach(rev) == n


# -- documents -------------------------------------------------------------


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    return value


def _fields(obj, allowed, where):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise DocumentError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = [k for k in allowed if k not in obj]
    if missing:
        raise DocumentError(f"{where}: missing field(s) {missing}")
    return [obj[k] for k in allowed]


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc})") from None


def _dump(doc, path):
    text = json.dumps(doc)
    Path(path).write_text(text + "\n", encoding="utf-8")


def topology_document(graph: NetworkGraph) -> dict:
    return {"nodes": graph.node_count, "edges": [list(e) for e in graph.edges]}


def parse_topology(doc) -> NetworkGraph:
    nodes, edges = _fields(doc, ("nodes", "edges"), "topology")
    nodes = _int(nodes, "topology.nodes")
    if not isinstance(edges, list):
        raise DocumentError("topology.edges: expected an array")
    pairs = []
    for k, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise DocumentError(f"topology.edges[{k}]: expected [src, dst], got {e!r}")
        pairs.append((_int(e[0], f"topology.edges[{k}][0]"), _int(e[1], f"topology.edges[{k}][1]")))
    try:
        return build_graph(nodes, pairs)
    except InputError as exc:
        raise DocumentError(f"topology: {exc}") from exc


def read_topology(path) -> NetworkGraph:
    return parse_topology(_load(path))


def write_topology(graph: NetworkGraph, path) -> None:
    _dump(topology_document(graph), path)


def flows_document(flows: FlowSet) -> list:
    return [{"src": d.source, "dst": d.dest, "units": d.units} for d in flows]


def parse_flows(doc, graph: NetworkGraph | None = None) -> FlowSet:
    if not isinstance(doc, list):
        raise DocumentError("flows: expected an array of objects")
    demands = []
    for k, obj in enumerate(doc):
        src, dst, units = (_int(x, f"flows[{k}]") for x in _fields(obj, ("src", "dst", "units"), f"flows[{k}]"))
        if graph is not None and not (0 <= src < graph.node_count and 0 <= dst < graph.node_count):
            raise DocumentError(
                f"flows[{k}]: pair ({src}, {dst}) references a node outside [0, {graph.node_count})"
            )
        demands.append(Demand(src, dst, units))
    try:
        return FlowSet(tuple(demands))
    except InputError as exc:
        raise DocumentError(f"flows: {exc}") from exc


def read_flows(path, graph: NetworkGraph | None = None) -> FlowSet:
    return parse_flows(_load(path), graph)


def write_flows(flows: FlowSet, path) -> None:
    _dump(flows_document(flows), path)


def weights_document(graph: NetworkGraph, weights: WeightVector) -> list:
    weights.check_graph(graph)
    return [{"src": i, "dst": j, "weight": w} for (i, j), w in zip(graph.edges, weights.weights)]


def parse_weights(doc, graph: NetworkGraph, weight_max: int | None = None) -> WeightVector:
    if not isinstance(doc, list):
        raise DocumentError("weights: expected an array of objects")
    found = {}
    for k, obj in enumerate(doc):
        src, dst, w = (_int(x, f"weights[{k}]") for x in _fields(obj, ("src", "dst", "weight"), f"weights[{k}]"))
        if not graph.has_edge(src, dst):
            raise DocumentError(f"weights[{k}]: edge ({src}, {dst}) is not in the topology")
        if (src, dst) in found:
            raise DocumentError(f"weights[{k}]: duplicate entry for edge ({src}, {dst})")
        found[(src, dst)] = w
    missing = [e for e in graph.edges if e not in found]
    if missing:
        raise DocumentError(f"weights: no weight for edge {missing[0]}")
    values = tuple(found[e] for e in graph.edges)
    if weight_max is None:
        weight_max = max(values, default=1)
    try:
        return WeightVector(values, weight_max)
    except InputError as exc:
        raise DocumentError(f"weights: {exc}") from exc


def read_weights(path, graph: NetworkGraph, weight_max: int | None = None) -> WeightVector:
    return parse_weights(_load(path), graph, weight_max)


def write_weights(graph: NetworkGraph, weights: WeightVector, path) -> None:
    _dump(weights_document(graph, weights), path)

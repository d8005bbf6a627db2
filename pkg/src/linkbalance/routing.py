"""Shortest-path routing and the max-link-load fitness function.

Tie-breaking is deterministic: among equal tentative distances Dijkstra
settles the lowest node id first, and a predecessor is only replaced on a
strict improvement. With positive integer weights this means the
predecessor of ``v`` is the in-neighbour ``u`` on a shortest path that
minimises ``(dist(u), u)``. :func:`batch_max_loads` relies on that
characterisation to evaluate a whole population with array operations.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .errors import InputError, Unreachable
from .network import Demand, Edge, FlowSet, LoadMatrix, NetworkGraph, WeightVector


@dataclass(frozen=True)
class Path:
    flow: Demand
    edges: tuple[Edge, ...]
    total_weight: int

    def nodes(self) -> list[int]:
        if not self.edges:
            return [self.flow.source]
        return [self.edges[0][0]] + [j for _, j in self.edges]


@dataclass(frozen=True)
class RoutingTable:
    rows: tuple[Path, ...]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


@dataclass(frozen=True, eq=False)
class FitnessResult:
    max_load: int
    load_matrix: LoadMatrix
    routing_table: RoutingTable

    def __eq__(self, other):
        if not isinstance(other, FitnessResult):
            return NotImplemented
        return (
            self.max_load == other.max_load
            and self.load_matrix == other.load_matrix
            and self.routing_table == other.routing_table
        )


def _dijkstra(graph, w, source, target=None):
    """Return (dist, pred_edge) dicts; stops once ``target`` is settled."""
    dist = {source: 0}
    pred: dict[int, int] = {}
    done = set()
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        for v, k in graph.out_edges(u):
            nd = d + w[k]
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = k
                heapq.heappush(heap, (nd, v))
    return dist, pred


def shortest_path(
    graph: NetworkGraph, weights: WeightVector, source: int, dest: int, units: int = 1
) -> Path:
    """Minimum-weight directed path from ``source`` to ``dest``.

    Raises :class:`Unreachable` if ``dest`` cannot be reached.
    """
    weights.check_graph(graph)
    if source == dest:
        raise InputError(f"source and destination are both {source}")
    dist, pred = _dijkstra(graph, weights.weights, source, dest)
    if dest not in dist:
        raise Unreachable(source, dest)
    seq = []
    v = dest
    while v != source:
        k = pred[v]
        seq.append(graph.edges[k])
        v = graph.edges[k][0]
    seq.reverse()
    return Path(Demand(source, dest, units), tuple(seq), dist[dest])


def evaluate_fitness(
    graph: NetworkGraph, weights: WeightVector, flows: FlowSet
) -> FitnessResult:
    """Route every demand independently and return the max link load."""
    weights.check_graph(graph)
    flows.check_graph(graph)
    loads = LoadMatrix(graph)
    rows = []
    for demand in flows:
        path = shortest_path(graph, weights, demand.source, demand.dest, demand.units)
        rows.append(Path(demand, path.edges, path.total_weight))
        for i, j in path.edges:
            loads.loads[i, j] += demand.units
    return FitnessResult(loads.max(), loads, RoutingTable(tuple(rows)))


def flatten_loads(result: FitnessResult) -> np.ndarray:
    return result.load_matrix.vector()


_INF = np.int64(1) << 40


class BatchEvaluator:
    """Max link load for many weight vectors at once.

    Precomputes the graph and demand layout; :meth:`max_loads` takes a
    ``(P, |E|)`` integer array and returns ``P`` fitness values equal to
    ``evaluate_fitness(...).max_load`` for each row.
    """

    def __init__(self, graph: NetworkGraph, flows: FlowSet):
        flows.check_graph(graph)
        self.graph = graph
        self.flows = flows
        n = graph.node_count
        self.n = n
        src, dst = graph.edge_arrays()
        self.src, self.dst = src, dst
        fm = flows.matrix(n)
        self.sources = np.flatnonzero(fm.sum(axis=1))
        self.demand = fm[self.sources]  # (S, N)
        # Edges grouped by destination, for the predecessor reduction.
        order = np.argsort(dst, kind="stable")
        self._by_dst = order
        counts = np.bincount(dst, minlength=n)
        self._has_in = counts > 0
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        self._seg_starts = starts[self._has_in]
        self._in_nodes = np.flatnonzero(self._has_in)
        self._edge_id = np.full((n, n), -1, dtype=np.int64)
        self._edge_id[src, dst] = np.arange(len(src))

    def max_loads(self, weights) -> np.ndarray:
        return self.edge_loads(weights).max(axis=1, initial=0)

    def edge_loads(self, weights) -> np.ndarray:
        """``(P, |E|)`` per-edge loads for each weight row."""
        w = np.atleast_2d(np.asarray(weights, dtype=np.int64))
        p_count, e_count = w.shape
        if e_count != len(self.src):
            raise InputError(f"weight rows have {e_count} entries, graph has {len(self.src)} edges")
        n = self.n
        s_count = len(self.sources)
        if s_count == 0 or e_count == 0:
            return np.zeros((p_count, e_count), dtype=np.int64)

        dist = np.full((p_count, n, n), _INF, dtype=np.int64)
        dist[:, np.arange(n), np.arange(n)] = 0
        dist[:, self.src, self.dst] = w
        for k in range(n):
            np.minimum(dist, dist[:, :, k, None] + dist[:, None, k, :], out=dist)
        d = dist[:, self.sources, :]  # (P, S, N)

        unreachable = (self.demand[None] > 0) & (d >= _INF)
        if unreachable.any():
            _, si, v = np.argwhere(unreachable)[0]
            raise Unreachable(int(self.sources[si]), int(v))

        # Predecessor of v: tight in-edge (u, v) minimising (dist(u), u).
        du = d[:, :, self.src]
        tight = (du + w[:, None, :] == d[:, :, self.dst]) & (du < _INF)
        key = np.where(tight, du * n + self.src, np.iinfo(np.int64).max)
        key = key[:, :, self._by_dst]
        best = np.full((p_count, s_count, n), np.iinfo(np.int64).max, dtype=np.int64)
        best[:, :, self._in_nodes] = np.minimum.reduceat(key, self._seg_starts, axis=2)
        reach = best != np.iinfo(np.int64).max
        reach[:, np.arange(s_count), self.sources] = False
        pred = np.where(reach, best % n, 0)

        # Push subtree demand up each shortest-path tree, farthest node first.
        acc = np.broadcast_to(self.demand, (p_count, s_count, n)).copy()
        node_key = np.where(d < _INF, d * n + np.arange(n), -1)
        order = np.argsort(-node_key, axis=2, kind="stable")
        pi, si = np.meshgrid(np.arange(p_count), np.arange(s_count), indexing="ij")
        for t in range(n):
            v = order[:, :, t]
            live = reach[pi, si, v]
            if not live.any():
                continue
            pl, sl, vl = pi[live], si[live], v[live]
            acc[pl, sl, pred[pl, sl, vl]] += acc[pl, sl, vl]

        edge = self._edge_id[pred, np.arange(n)]
        mask = reach & (acc > 0)
        flat = (np.arange(p_count)[:, None, None] * e_count + edge)[mask]
        loads = np.bincount(flat, weights=acc[mask], minlength=p_count * e_count)
        return loads.astype(np.int64).reshape(p_count, e_count)

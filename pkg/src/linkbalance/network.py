"""Graph, weight, flow and load representations.

Edges are kept in canonical order, lexicographic by ``(source, dest)``.
That order defines chromosome indexing: gene ``k`` of a weight vector is the
weight of ``graph.edges[k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateEdgeError,
    InputError,
    NodeRangeError,
    SelfLoopError,
    UnknownEdgeError,
    WeightLengthError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class NetworkGraph:
    """Directed graph on dense node ids ``0..node_count-1``.

    Build with :func:`build_graph`; the constructor assumes ``edges`` is
    already validated and sorted.
    """

    node_count: int
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {e: k for k, e in enumerate(self.edges)}
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for k, (i, j) in enumerate(self.edges):
            out[i].append((j, k))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_index(self, i: int, j: int) -> int:
        try:
            return self._index[(i, j)]
        except KeyError:
            raise UnknownEdgeError((i, j)) from None

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self._index

    def out_edges(self, node: int) -> tuple[tuple[int, int], ...]:
        """``(neighbor, edge_index)`` pairs leaving ``node``, by neighbor id."""
        return self._out[node]

    def adjacency(self) -> np.ndarray:
        """0/1 adjacency matrix M (not necessarily symmetric)."""
        m = np.zeros((self.node_count, self.node_count), dtype=np.int64)
        if self.edges:
            src, dst = self.edge_arrays()
            m[src, dst] = 1
        return m

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]


def build_graph(node_count: int, edge_list: Iterable[Sequence[int]]) -> NetworkGraph:
    """Validate ``edge_list`` and return a graph with canonical edge order.

    Raises :class:`SelfLoopError`, :class:`DuplicateEdgeError` or
    :class:`NodeRangeError` naming the offending pair.
    """
    if not isinstance(node_count, (int, np.integer)) or node_count < 1:
        raise InputError(f"node_count must be a positive integer, got {node_count!r}")
    node_count = int(node_count)
    seen: set[Edge] = set()
    for pair in edge_list:
        if len(pair) != 2:
            raise InputError(f"edge {tuple(pair)!r} is not a (source, dest) pair")
        i, j = int(pair[0]), int(pair[1])
        if not (0 <= i < node_count and 0 <= j < node_count):
            raise NodeRangeError((i, j), node_count)
        if i == j:
            raise SelfLoopError(i)
        if (i, j) in seen:
            raise DuplicateEdgeError((i, j))
        seen.add((i, j))
    return NetworkGraph(node_count, tuple(sorted(seen)))


@dataclass(frozen=True)
class WeightVector:
    """One integer weight in ``[1, weight_max]`` per edge, in canonical order."""

    weights: tuple[int, ...]
    weight_max: int

    def __post_init__(self):
        if self.weight_max < 1:
            raise InputError(f"weight_max must be >= 1, got {self.weight_max}")
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if w and (min(w) < 1 or max(w) > self.weight_max):
            bad = next(x for x in w if not 1 <= x <= self.weight_max)
            raise InputError(f"weight {bad} outside [1, {self.weight_max}]")

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k):
        return self.weights[k]

    @classmethod
    def ones(cls, length: int, weight_max: int = 1) -> "WeightVector":
        return cls((1,) * length, weight_max)

    def check_graph(self, graph: NetworkGraph) -> None:
        if len(self.weights) != graph.edge_count:
            raise WeightLengthError(len(self.weights), graph.edge_count)


def hadamard(graph: NetworkGraph, weights: WeightVector) -> np.ndarray:
    """Element-wise product of the adjacency and weight matrices.

    Entry ``(i, j)`` is the weight of edge ``(i, j)`` or 0 where there is
    no edge.
    """
    weights.check_graph(graph)
    mw = np.zeros((graph.node_count, graph.node_count), dtype=np.int64)
    if graph.edges:
        src, dst = graph.edge_arrays()
        mw[src, dst] = weights.weights
    return mw


@dataclass(frozen=True)
class Demand:
    source: int
    dest: int
    units: int = 1


@dataclass(frozen=True)
class FlowSet:
    """Demands between ordered node pairs, at most one per pair.

    ``granularity`` is the size of one flow unit (e.g. 64 kb); loads are
    always counted in units, so it only matters for reporting.
    """

    demands: tuple[Demand, ...] = ()
    granularity: float = 1

    def __post_init__(self):
        demands = tuple(self.demands)
        object.__setattr__(self, "demands", demands)
        pairs = set()
        for d in demands:
            if d.source == d.dest:
                raise InputError(f"demand ({d.source}, {d.dest}) has source == dest")
            if not isinstance(d.units, (int, np.integer)) or d.units < 1:
                raise InputError(
                    f"demand ({d.source}, {d.dest}) units must be a positive integer"
                )
            key = (d.source, d.dest)
            if key in pairs:
                raise InputError(f"more than one demand for pair {key}")
            pairs.add(key)

    def __len__(self) -> int:
        return len(self.demands)

    def __iter__(self):
        return iter(self.demands)

    @classmethod
    def unit(cls, pairs: Iterable[Sequence[int]]) -> "FlowSet":
        return cls(tuple(Demand(int(s), int(d)) for s, d in pairs))

    def volume(self, demand: Demand) -> float:
        """Total demand ``units * granularity``."""
        return demand.units * self.granularity

    def check_graph(self, graph: NetworkGraph) -> None:
        n = graph.node_count
        for d in self.demands:
            if not (0 <= d.source < n and 0 <= d.dest < n):
                raise InputError(
                    f"demand ({d.source}, {d.dest}) references a node outside [0, {n})"
                )

    def matrix(self, node_count: int) -> np.ndarray:
        """Flow matrix: entry ``(s, d)`` holds the units demanded from s to d."""
        f = np.zeros((node_count, node_count), dtype=np.int64)
        for d in self.demands:
            f[d.source, d.dest] = d.units
        return f


class LoadMatrix:
    """Per-edge load accumulator (flow units), confined to one evaluation."""

    def __init__(self, graph: NetworkGraph, loads: np.ndarray | None = None):
        self.graph = graph
        n = graph.node_count
        if loads is None:
            loads = np.zeros((n, n), dtype=np.int64)
        self.loads = loads

    def __eq__(self, other):
        if not isinstance(other, LoadMatrix):
            return NotImplemented
        return self.graph == other.graph and np.array_equal(self.loads, other.loads)

    def __repr__(self):
        return f"LoadMatrix({self.loads.tolist()})"

    def max(self) -> int:
        return int(self.loads.max()) if self.loads.size else 0

    def total(self) -> int:
        return int(self.loads.sum())

    def vector(self) -> np.ndarray:
        """Row-major flattening (the load vector VL), length N**2."""
        return self.loads.reshape(-1).copy()

    def edge_loads(self) -> np.ndarray:
        """Loads in canonical edge order."""
        src, dst = self.graph.edge_arrays()
        return self.loads[src, dst]


def accumulate_load(loads: LoadMatrix, path: Iterable[Edge], units: int) -> LoadMatrix:
    """Add ``units`` to every edge of ``path`` in place and return ``loads``.

    The path is validated first, so an unknown edge leaves ``loads`` untouched.
    """
    path = [tuple(e) for e in path]
    for i, j in path:
        if not loads.graph.has_edge(i, j):
            raise UnknownEdgeError((i, j))
    for i, j in path:
        loads.loads[i, j] += units
    return loads

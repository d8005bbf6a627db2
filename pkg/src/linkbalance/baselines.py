"""Comparison optimizers: exhaustive search, ant colony routing, random weights."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, ConfigError, InputError, Unreachable
from .network import Demand, FlowSet, LoadMatrix, NetworkGraph, WeightVector
from .routing import BatchEvaluator, Path, RoutingTable, evaluate_fitness

BF_BUDGET = 10**8
_BF_CHUNK = 4096
_STEP_CAP = 10_000  # per node; ant walks longer than this are treated as a fault


@dataclass(frozen=True)
class ACOConfig:
    ant_count: int = 10
    iterations: int = 50
    evaporation_rate: float = 0.5
    pheromone_exponent: float = 1.0
    heuristic_exponent: float = 2.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.ant_count < 1:
            raise ConfigError("ant_count must be >= 1")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if not 0.0 < self.evaporation_rate < 1.0:
            raise ConfigError("evaporation_rate must be in (0, 1)")
        if self.pheromone_exponent < 0 or self.heuristic_exponent < 0:
            raise ConfigError("exponents must be non-negative")


@dataclass(frozen=True)
class BaselineResult:
    label: str
    max_load: int
    weights: WeightVector | None = None
    routes: RoutingTable | None = None
    elapsed: float = 0.0


def brute_force(graph: NetworkGraph, flows: FlowSet, v: int, budget: int = BF_BUDGET) -> BaselineResult:
    """Global minimum of the max link load over all of ``[1, v]**|E|``.

    Vectors are enumerated in lexicographic order (last gene fastest) and the
    first optimum is kept, so the witness is the lexicographically smallest
    optimal vector.
    """
    start = time.perf_counter()
    e = graph.edge_count
    candidates = v**e
    if candidates > budget:
        raise BudgetExceeded(candidates, budget)
    if e == 0:
        result = evaluate_fitness(graph, WeightVector((), v), flows)
        return BaselineResult("BF", result.max_load, WeightVector((), v), elapsed=time.perf_counter() - start)
    evaluator = BatchEvaluator(graph, flows)
    place = v ** np.arange(e - 1, -1, -1, dtype=np.int64)
    best_value, best_index = None, None
    for lo in range(0, candidates, _BF_CHUNK):
        idx = np.arange(lo, min(lo + _BF_CHUNK, candidates), dtype=np.int64)
        block = (idx[:, None] // place) % v + 1
        values = evaluator.max_loads(block)
        k = int(np.argmin(values))
        if best_value is None or values[k] < best_value:
            best_value, best_index = int(values[k]), int(idx[k])
            if best_value == _lower_bound(flows):
                break
    genes = (best_index // place) % v + 1
    weights = WeightVector(tuple(genes.tolist()), v)
    return BaselineResult("BF", best_value, weights, elapsed=time.perf_counter() - start)


def _lower_bound(flows: FlowSet) -> int:
    return max((d.units for d in flows), default=0)


def dspa_route(graph: NetworkGraph, flows: FlowSet, v: int, rng_seed: int) -> BaselineResult:
    """Route once under a single uniform random weight draw."""
    start = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    weights = WeightVector(tuple(rng.integers(1, v, size=graph.edge_count, endpoint=True).tolist()), v)
    result = evaluate_fitness(graph, weights, flows)
    return BaselineResult("DSPA", result.max_load, weights, result.routing_table, time.perf_counter() - start)


def _reachable(graph, source):
    seen = {source}
    stack = [source]
    while stack:
        for v, _ in graph.out_edges(stack.pop()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _walk(out, demand, pheromone, load, alpha, beta, draw, step_cap):
    """One ant's walk from source to destination, as a list of edge ids.

    There is no tabu list: like a plain ant-system walker the ant may revisit
    nodes and re-traverse edges, each traversal adding to the edge load seen
    by later moves.
    """
    u, d = demand.source, demand.dest
    taken: list[int] = []
    while u != d:
        if len(taken) >= step_cap:
            raise RuntimeError(f"ant walk for ({demand.source}, {d}) exceeded {step_cap} steps")
        options = out[u]
        total = 0.0
        cum = []
        for _, k in options:
            total += pheromone[k] ** alpha / (load[k] + 1.0) ** beta
            cum.append(total)
        x = draw() * total
        pick = 0
        while pick < len(cum) - 1 and cum[pick] <= x:
            pick += 1
        u, k = options[pick]
        taken.append(k)
        load[k] += demand.units
    return taken


def aco_optimize(graph: NetworkGraph, flows: FlowSet, config: ACOConfig) -> BaselineResult:
    """Ant system over per-flow routes with shared edge pheromone.

    Every ant routes all demands in order; the attractiveness of an edge is
    ``pheromone**alpha * (1 / (load + 1))**beta`` with ``load`` the units the
    ant has already put on it. After each iteration pheromone evaporates and
    the iteration's best ant deposits ``1 / max_load`` on each edge it used.
    """
    start = time.perf_counter()
    flows.check_graph(graph)
    for demand in flows:
        if demand.dest not in _reachable(graph, demand.source):
            raise Unreachable(demand.source, demand.dest)
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))
    draw = rng.random
    out = [graph.out_edges(u) for u in range(graph.node_count)]
    step_cap = _STEP_CAP * graph.node_count
    alpha, beta = config.pheromone_exponent, config.heuristic_exponent
    pheromone = [1.0] * graph.edge_count
    best_load, best_routes = None, None
    for _ in range(config.iterations):
        iter_load, iter_routes = None, None
        for _ in range(config.ant_count):
            load = [0] * graph.edge_count
            routes = [_walk(out, demand, pheromone, load, alpha, beta, draw, step_cap) for demand in flows]
            peak = max(load, default=0)
            if iter_load is None or peak < iter_load:
                iter_load, iter_routes = peak, routes
        keep = 1.0 - config.evaporation_rate
        pheromone = [t * keep for t in pheromone]
        if iter_load > 0:
            for taken in iter_routes:
                for k in taken:
                    pheromone[k] += 1.0 / iter_load
        if best_load is None or iter_load < best_load:
            best_load, best_routes = iter_load, iter_routes

    rows = tuple(
        Path(demand, tuple(graph.edges[k] for k in taken), len(taken))
        for demand, taken in zip(flows, best_routes)
    )
    return BaselineResult("ACOLB", best_load, routes=RoutingTable(rows), elapsed=time.perf_counter() - start)


def route_loads(graph: NetworkGraph, routes: RoutingTable) -> LoadMatrix:
    """Load matrix produced by explicit per-flow routes."""
    loads = LoadMatrix(graph)
    for path in routes:
        for i, j in path.edges:
            if not graph.has_edge(i, j):
                raise InputError(f"route uses edge ({i}, {j}) not in the graph")
            loads.loads[i, j] += path.flow.units
    return loads

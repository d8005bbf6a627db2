import random
from pathlib import Path

import pytest

from linkbalance.network import FlowSet, WeightVector, build_graph
from linkbalance.topology import read_flows, read_topology

FIXTURES = Path(__file__).parent / "fixtures"

# Exhaustive optima over [1, 5]**5, computed once with itertools.product
# and the reference evaluator (see test_baselines.test_fixture_optimum_by_enumeration).
FIXTURE_OPTIMA = {
    "n4e5_a": (3, (1, 1, 1, 1, 1)),
    "n4e5_b": (2, (1, 2, 1, 1, 1)),
}


@pytest.fixture(params=sorted(FIXTURE_OPTIMA))
def n4e5_fixture(request):
    name = request.param
    graph = read_topology(FIXTURES / f"{name}_topology.json")
    flows = read_flows(FIXTURES / f"{name}_flows.json", graph)
    return name, graph, flows


@pytest.fixture
def chain3():
    return build_graph(3, [(0, 1), (1, 2)])


def bellman_ford(graph, weights, source):
    """Plain edge-relaxation shortest distances; independent of the Dijkstra code."""
    inf = float("inf")
    dist = [inf] * graph.node_count
    dist[source] = 0
    for _ in range(graph.node_count - 1):
        changed = False
        for (i, j), w in zip(graph.edges, weights.weights):
            if dist[i] + w < dist[j]:
                dist[j] = dist[i] + w
                changed = True
        if not changed:
            break
    return dist


def random_instance(rng: random.Random, max_nodes=8, v=None, strongly=False, flows=None):
    """Random digraph, weights and unit flow set; optionally strongly connected."""
    n = rng.randint(2, max_nodes)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    edges = set(rng.sample(pairs, rng.randint(1, len(pairs))))
    if strongly:
        perm = list(range(n))
        rng.shuffle(perm)
        edges |= {(perm[k], perm[(k + 1) % n]) for k in range(n)}
    graph = build_graph(n, sorted(edges))
    v = v or rng.choice([1, 2, 3, 5, 9])
    weights = WeightVector(tuple(rng.randint(1, v) for _ in graph.edges), v)
    k = rng.randint(0, len(pairs)) if flows is None else min(flows, len(pairs))
    flow_set = FlowSet.unit(rng.sample(pairs, k))
    return graph, weights, flow_set


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import SUMMARY

    if SUMMARY:
        terminalreporter.section("acceptance criteria")
        for line in SUMMARY:
            terminalreporter.write_line(line)

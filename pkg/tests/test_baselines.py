import itertools
import random

import pytest

from linkbalance.baselines import (
    ACOConfig,
    aco_optimize,
    brute_force,
    dspa_route,
    route_loads,
)
from linkbalance.errors import BudgetExceeded, ConfigError, Unreachable
from linkbalance.ga import GAConfig, optimize
from linkbalance.network import FlowSet, WeightVector, build_graph
from linkbalance.routing import evaluate_fitness
from linkbalance.topology import PROFILES, generate_flows, generate_topology

from conftest import FIXTURE_OPTIMA, random_instance


def test_fixture_optimum_by_enumeration(n4e5_fixture):
    """Independent oracle: itertools enumeration through the reference evaluator."""
    name, g, flows = n4e5_fixture
    best = min(
        (evaluate_fitness(g, WeightVector(w, 5), flows).max_load, w)
        for w in itertools.product(range(1, 6), repeat=g.edge_count)
    )
    assert best == FIXTURE_OPTIMA[name]


def test_brute_force_fixture(n4e5_fixture):
    name, g, flows = n4e5_fixture
    r = brute_force(g, flows, 5)
    assert (r.max_load, r.weights.weights) == FIXTURE_OPTIMA[name]
    assert r.label == "BF"


def test_brute_force_single_edge():
    g = build_graph(2, [(0, 1)])
    from linkbalance.network import Demand

    r = brute_force(g, FlowSet((Demand(0, 1, 4),)), 9)
    assert r.max_load == 4
    assert r.weights.weights == (1,)


def test_brute_force_budget_guard():
    g = generate_topology(PROFILES["n10e39"], 0)
    with pytest.raises(BudgetExceeded) as info:
        brute_force(g, generate_flows(g, 20, 0), 9)
    assert info.value.candidates == 9**39


def test_brute_force_without_lower_bound_shortcut():
    # Compare against enumeration on instances whose optimum is above the
    # trivial bound, so the full search space is walked.
    rng = random.Random(8)
    checked = 0
    while checked < 10:
        g, _, flows = random_instance(rng, max_nodes=4, v=3, strongly=True, flows=5)
        if g.edge_count > 7:
            continue
        exact = min(
            (evaluate_fitness(g, WeightVector(w, 3), flows).max_load, w)
            for w in itertools.product(range(1, 4), repeat=g.edge_count)
        )
        if exact[0] == max(d.units for d in flows):
            continue
        r = brute_force(g, flows, 3)
        assert (r.max_load, r.weights.weights) == exact
        checked += 1


def test_ga_matches_fixture_optimum(n4e5_fixture):
    name, g, flows = n4e5_fixture
    r = optimize(g, flows, GAConfig(weight_max=5, rng_seed=1))
    assert r.best_fitness == FIXTURE_OPTIMA[name][0]


def test_dspa_hop_count_when_v_is_one():
    g = generate_topology(PROFILES["n10e39"], 3)
    flows = generate_flows(g, 20, 3)
    r = dspa_route(g, flows, 1, 99)
    assert r.weights.weights == (1,) * g.edge_count
    assert r.max_load == evaluate_fitness(g, WeightVector.ones(g.edge_count), flows).max_load


def test_dspa_replays_seeded_draw():
    import numpy as np

    g = generate_topology(PROFILES["n6e15"], 1)
    flows = generate_flows(g, 15, 1)
    r = dspa_route(g, flows, 5, 1234)
    draw = np.random.Generator(np.random.PCG64(1234)).integers(1, 5, size=g.edge_count, endpoint=True)
    assert r.weights.weights == tuple(draw.tolist())
    assert r.max_load == evaluate_fitness(g, r.weights, flows).max_load
    again = dspa_route(g, flows, 5, 1234)
    assert (again.max_load, again.weights) == (r.max_load, r.weights)


def test_aco_forced_route(chain3):
    flows = FlowSet.unit([(0, 2)])
    for cfg in (ACOConfig(ant_count=1, iterations=1), ACOConfig(ant_count=7, iterations=5, rng_seed=3)):
        r = aco_optimize(chain3, flows, cfg)
        assert r.max_load == 1
        assert r.routes.rows[0].edges == ((0, 1), (1, 2))


def test_aco_single_ant_consistent():
    g = generate_topology(PROFILES["n10e39"], 4)
    flows = generate_flows(g, 20, 4)
    r = aco_optimize(g, flows, ACOConfig(ant_count=1, iterations=1, rng_seed=5))
    assert r.max_load == route_loads(g, r.routes).max()


def test_aco_routes_valid_and_deterministic():
    g = generate_topology(PROFILES["n10e39"], 6)
    flows = generate_flows(g, 20, 6)
    cfg = ACOConfig(ant_count=3, iterations=10, rng_seed=6)
    r = aco_optimize(g, flows, cfg)
    for path, demand in zip(r.routes, flows):
        assert path.flow == demand
        assert path.edges[0][0] == demand.source and path.edges[-1][1] == demand.dest
        assert all(b == c for (_, b), (c, _) in zip(path.edges, path.edges[1:]))
        assert all(g.has_edge(*e) for e in path.edges)
    assert r.max_load == route_loads(g, r.routes).max()
    again = aco_optimize(g, flows, cfg)
    assert (again.max_load, again.routes) == (r.max_load, r.routes)


def test_aco_unreachable():
    g = build_graph(3, [(0, 1), (1, 2)])
    with pytest.raises(Unreachable):
        aco_optimize(g, FlowSet.unit([(2, 0)]), ACOConfig())


def test_aco_config_validation():
    with pytest.raises(ConfigError):
        ACOConfig(ant_count=0)
    with pytest.raises(ConfigError):
        ACOConfig(evaporation_rate=1.0)


def test_bf_dominance_small():
    rng = random.Random(21)
    for k in range(10):
        g, _, flows = random_instance(rng, max_nodes=4, v=3, strongly=True, flows=4)
        if 3 ** g.edge_count > 10**5:
            continue
        bf = brute_force(g, flows, 3).max_load
        assert bf <= optimize(g, flows, GAConfig(weight_max=3, rng_seed=k)).best_fitness
        assert bf <= aco_optimize(g, flows, ACOConfig(ant_count=2, iterations=5, rng_seed=k)).max_load
        assert bf <= dspa_route(g, flows, 3, k).max_load

"""Genetic algorithm over integer link weights.

Each generation: rank by fitness, cross consecutive ranked pairs at one
random point, mutate the offspring, then put the previous best back in
place of the worst offspring (elitism of one). The run stops after
``stagnation_limit`` generations without strict improvement of the best
fitness, or after ``max_generations`` generations.

All randomness comes from one ``numpy.random.Generator`` (PCG64) seeded with
``GAConfig.rng_seed`` and is consumed in a fixed order, so a run is a pure
function of its inputs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InputError
from .network import FlowSet, NetworkGraph, WeightVector
from .routing import BatchEvaluator, RoutingTable, evaluate_fitness


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 50
    mutation_prob: float = 0.10
    max_generations: int = 500
    stagnation_limit: int = 100
    weight_max: int = 9
    rng_seed: int = 0

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ConfigError(
                f"population_size must be a positive even integer, got {self.population_size}"
            )
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError(f"mutation_prob must be in [0, 1], got {self.mutation_prob}")
        if self.max_generations < 1:
            raise ConfigError("max_generations must be >= 1")
        if not 1 <= self.stagnation_limit <= self.max_generations:
            raise ConfigError("stagnation_limit must be in [1, max_generations]")
        if self.weight_max < 1:
            raise ConfigError("weight_max must be >= 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must be an unsigned 64-bit integer")


@dataclass
class Individual:
    chromosome: WeightVector
    fitness: int | None = None


@dataclass
class OptimizationResult:
    best_weights: WeightVector
    best_fitness: int
    routing_table: RoutingTable
    generations_run: int
    stop_reason: str
    fitness_history: list[int] = field(default_factory=list)
    elapsed: float = 0.0


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def init_population(config: GAConfig, edge_count: int, rng: np.random.Generator) -> list[Individual]:
    if edge_count < 1:
        raise InputError("cannot build chromosomes for a graph without edges")
    genes = rng.integers(1, config.weight_max, size=(config.population_size, edge_count), endpoint=True)
    return [Individual(WeightVector(tuple(row.tolist()), config.weight_max)) for row in genes]


def rank(population: list[Individual]) -> list[Individual]:
    """Sort by ascending fitness; stable, so ties keep input order."""
    for ind in population:
        if ind.fitness is None:
            raise InputError("cannot rank an individual that has not been evaluated")
    return sorted(population, key=lambda ind: ind.fitness)


def crossover(parent_a: Individual, parent_b: Individual, point: int) -> tuple[Individual, Individual]:
    """One-point crossover: swap the genes from ``point`` onwards."""
    a = parent_a.chromosome
    b = parent_b.chromosome
    if len(a) != len(b):
        raise InputError("parents have different chromosome lengths")
    if not 1 <= point <= len(a) - 1:
        raise InputError(f"crossover point {point} outside [1, {len(a) - 1}]")
    wa, wb = a.weights, b.weights
    vmax = max(a.weight_max, b.weight_max)
    return (
        Individual(WeightVector(wa[:point] + wb[point:], vmax)),
        Individual(WeightVector(wb[:point] + wa[point:], vmax)),
    )


def mutate(individual: Individual, config: GAConfig, rng: np.random.Generator) -> Individual:
    """With probability ``mutation_prob`` redraw one random gene from [1, v]."""
    if rng.random() >= config.mutation_prob:
        return individual
    genes = list(individual.chromosome.weights)
    k = int(rng.integers(len(genes)))
    genes[k] = int(rng.integers(1, config.weight_max, endpoint=True))
    return Individual(WeightVector(tuple(genes), config.weight_max))


def _breed(ranked: list[Individual], config: GAConfig, rng) -> list[Individual]:
    length = len(ranked[0].chromosome)
    children = []
    for a, b in zip(ranked[0::2], ranked[1::2]):
        if length > 1:
            point = int(rng.integers(1, length))
            pair = crossover(a, b, point)
        else:
            pair = (Individual(a.chromosome), Individual(b.chromosome))
        children.extend(pair)
    return [mutate(c, config, rng) for c in children]


class _Scorer:
    """Evaluates unevaluated individuals in one batch, memoised by chromosome."""

    def __init__(self, graph, flows):
        self.batch = BatchEvaluator(graph, flows)
        self.cache: dict[tuple[int, ...], int] = {}

    def __call__(self, population):
        todo = []
        for ind in population:
            if ind.fitness is None:
                hit = self.cache.get(ind.chromosome.weights)
                if hit is None:
                    todo.append(ind)
                else:
                    ind.fitness = hit
        if todo:
            keys = list(dict.fromkeys(ind.chromosome.weights for ind in todo))
            values = self.batch.max_loads(np.array(keys, dtype=np.int64))
            self.cache.update(zip(keys, values.tolist()))
            for ind in todo:
                ind.fitness = self.cache[ind.chromosome.weights]


def optimize(graph: NetworkGraph, flows: FlowSet, config: GAConfig) -> OptimizationResult:
    """Evolve weight vectors minimising the maximum link load."""
    start = time.perf_counter()
    rng = make_rng(config.rng_seed)
    score = _Scorer(graph, flows)

    population = init_population(config, graph.edge_count, rng)
    score(population)
    ranked = rank(population)
    best = ranked[0]
    history = [best.fitness]
    stale = 0
    generation = 0
    while True:
        generation += 1
        offspring = _breed(ranked, config, rng)
        score(offspring)
        worst = max(range(len(offspring)), key=lambda i: (offspring[i].fitness, i))
        offspring[worst] = ranked[0]
        ranked = rank(offspring)
        if ranked[0].fitness < best.fitness:
            best = ranked[0]
            stale = 0
        else:
            stale += 1
        history.append(best.fitness)
        if generation >= config.max_generations:
            reason = "max_generations"
            break
        if stale >= config.stagnation_limit:
            reason = "stagnation"
            break

    final = evaluate_fitness(graph, best.chromosome, flows)
    elapsed = time.perf_counter() - start
    return OptimizationResult(
        best_weights=best.chromosome,
        best_fitness=final.max_load,
        routing_table=final.routing_table,
        generations_run=generation,
        stop_reason=reason,
        fitness_history=history,
        elapsed=elapsed,
    )

"""
hybrid_ga.py - Genetic search over critical vertices only.

A chromosome holds one bit per critical vertex (degree > 2 and on a cycle),
in ascending vertex order.  Decoding fixes those vertices and covers the
rest optimally: once every critical vertex is removed or isolated, only
trees and simple cycles remain, and both are solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from logging import getLogger
from typing import Mapping, Sequence

import numpy as np

from baselines import is_vertex_cover
from graph_core import Graph, critical_vertices
from phylocover_shared import ContractViolation, UsageError, make_rng, round_half_up
from structured_solvers import cover_special_adjacency

logger = getLogger(__name__)

SOLVER_TAG = "hybrid-ga"
MUTATION_MODES = ("one-bit", "per-bit")

Chromosome = Sequence[int]


@dataclass(frozen=True, slots=True)
class GaParams:
    """GA knobs; population size is ``max(2, round(population_multiplier * |C|))``."""

    population_multiplier: float = 1.0
    crossover_rate: float = 0.5
    mutation_rate: float = 0.5
    stall_generations: int = 10
    max_generations: int = 1000
    seed: int = 0
    mutation_mode: str = "one-bit"

    def __post_init__(self) -> None:
        if not self.population_multiplier > 0:
            raise UsageError(f"population multiplier must be positive, got {self.population_multiplier}")
        for name in ("crossover_rate", "mutation_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"{name.replace('_', ' ')} must lie in [0, 1], got {value}")
        if self.stall_generations < 1:
            raise UsageError(f"stall generations must be positive, got {self.stall_generations}")
        if self.max_generations < 1:
            raise UsageError(f"max generations must be positive, got {self.max_generations}")
        if self.mutation_mode not in MUTATION_MODES:
            raise UsageError(f"unknown mutation mode {self.mutation_mode!r}")

    def population_size(self, critical_count: int) -> int:
        return max(2, round_half_up(self.population_multiplier * critical_count))


@dataclass(frozen=True, slots=True)
class CoverSolution:
    cover: frozenset[int]
    fitness: float
    solver: str
    seed: int | None = None
    generations: int = 0
    critical_count: int = 0
    history: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "cover", frozenset(self.cover))
        object.__setattr__(self, "history", tuple(self.history))
        if not 0.0 <= self.fitness <= 1.0:
            raise ContractViolation(f"fitness {self.fitness} outside [0, 1]")

    @property
    def size(self) -> int:
        return len(self.cover)


def fitness(g: Graph, cover) -> float:
    """|cover| / n; lower is better."""
    return len(cover) / g.n if g.n else 0.0


def make_solution(g: Graph, cover, solver: str, seed: int | None = None, **extra) -> CoverSolution:
    cover = frozenset(cover)
    if not is_vertex_cover(g, cover):
        raise ContractViolation(f"{solver} returned a set that leaves an edge uncovered")
    return CoverSolution(cover, fitness(g, cover), solver, seed, **extra)


def _remove(adjacency: dict[int, set[int]], v: int) -> None:
    for w in adjacency.pop(v):
        adjacency[w].discard(v)


def decode_adjacency(adjacency: dict[int, set[int]], critical: Sequence[int], bits: Sequence[int]) -> list[int]:
    """Decode on a mutable adjacency copy; returns the cover (consumes ``adjacency``)."""
    cover: list[int] = []
    for u, bit in zip(critical, bits):
        if u not in adjacency:
            continue
        if bit:
            _remove(adjacency, u)
            cover.append(u)
        else:
            # u stays, isolated; its neighbours enter the cover.
            for w in list(adjacency[u]):
                _remove(adjacency, w)
                cover.append(w)
    cover.extend(cover_special_adjacency(adjacency))
    return cover


def _check_chromosome(chromosome: Chromosome, length: int) -> list[int]:
    bits = [int(b) for b in chromosome]
    if len(bits) != length:
        raise UsageError(f"chromosome has {len(bits)} bits, graph has {length} critical vertices")
    if any(b not in (0, 1) for b in bits):
        raise UsageError("chromosome bits must be 0 or 1")
    return bits


def decode(g: Graph, c: Chromosome, critical: Sequence[int] | None = None) -> frozenset[int]:
    if critical is None:
        critical = critical_vertices(g)
    bits = _check_chromosome(c, len(critical))
    return frozenset(decode_adjacency(g.adjacency(), critical, bits))


class _Decoder:
    """Memoised decoding for one run; evaluation draws no randomness."""

    def __init__(self, g: Graph, critical: Sequence[int]) -> None:
        self.template: Mapping[int, frozenset[int]] = {v: g.neighbors(v) for v in g.vertices}
        self.critical = list(critical)
        self.cache: dict[bytes, frozenset[int]] = {}

    def __call__(self, chromosome: np.ndarray) -> frozenset[int]:
        key = chromosome.tobytes()
        cover = self.cache.get(key)
        if cover is None:
            adjacency = {v: set(nb) for v, nb in self.template.items()}
            cover = frozenset(decode_adjacency(adjacency, self.critical, chromosome.tolist()))
            self.cache[key] = cover
        return cover


def _tournament(rng: np.random.Generator, population: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    count = population.shape[0]
    pairs = rng.integers(0, count, size=(count, 2))
    first, second = pairs[:, 0], pairs[:, 1]
    winners = np.where(sizes[first] <= sizes[second], first, second)
    return population[winners].copy()


def _crossover(rng: np.random.Generator, parents: np.ndarray, rate: float) -> np.ndarray:
    length = parents.shape[1]
    for i in range(0, parents.shape[0] - 1, 2):
        if rng.random() >= rate or length < 2:
            continue
        cut = int(rng.integers(1, length))
        tail = parents[i, cut:].copy()
        parents[i, cut:] = parents[i + 1, cut:]
        parents[i + 1, cut:] = tail
    return parents


def _mutate(rng: np.random.Generator, children: np.ndarray, params: GaParams) -> None:
    count, length = children.shape
    if params.mutation_mode == "per-bit":
        children ^= (rng.random((count, length)) < params.mutation_rate).astype(np.uint8)
        return
    for i in range(count):
        if rng.random() < params.mutation_rate:
            children[i, int(rng.integers(0, length))] ^= 1


def evolve(g: Graph, params: GaParams | None = None) -> CoverSolution:
    """Run the GA until the best cover stalls or the generation cap is hit."""
    params = params or GaParams()
    critical = critical_vertices(g)
    length = len(critical)
    if length == 0:
        cover = decode(g, (), critical)
        score = fitness(g, cover)
        return make_solution(g, cover, SOLVER_TAG, params.seed, history=(score,))

    rng = make_rng(params.seed)
    decoder = _Decoder(g, critical)
    size = params.population_size(length)
    population = rng.integers(0, 2, size=(size, length), dtype=np.uint8)
    covers = [decoder(c) for c in population]
    sizes = np.array([len(c) for c in covers])

    best_index = int(np.argmin(sizes))
    best = population[best_index].copy()
    best_cover = covers[best_index]
    history = [fitness(g, best_cover)]
    stall = 0
    generation = 0
    while generation < params.max_generations and stall < params.stall_generations:
        generation += 1
        children = _crossover(rng, _tournament(rng, population, sizes), params.crossover_rate)
        _mutate(rng, children, params)
        covers = [decoder(c) for c in children]
        sizes = np.array([len(c) for c in covers])

        index = int(np.argmin(sizes))
        if sizes[index] < len(best_cover):
            best = children[index].copy()
            best_cover = covers[index]
            stall = 0
        else:
            stall += 1
        worst = int(np.argmax(sizes))
        children[worst] = best
        sizes[worst] = len(best_cover)
        population = children
        history.append(fitness(g, best_cover))
        logger.debug("generation %d best=%d stall=%d", generation, len(best_cover), stall)

    logger.info(
        "hybrid GA finished: n=%d critical=%d population=%d generations=%d cover=%d",
        g.n, length, size, generation, len(best_cover),
    )
    return make_solution(
        g,
        best_cover,
        SOLVER_TAG,
        params.seed,
        generations=generation,
        critical_count=length,
        history=tuple(history),
    )

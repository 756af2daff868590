"""
baselines.py - Reference vertex cover solvers.

``two_approx_cover`` is the classic edge-picking 2-approximation.
``exact_cover`` is a branch-and-bound search used as the optimality oracle,
itself checked against ``brute_force_cover`` (plain subset enumeration).
"""

from __future__ import annotations

from itertools import combinations
from logging import getLogger
from typing import Iterable

from graph_core import Graph
from phylocover_shared import BudgetExceeded, UsageError, make_rng
from structured_solvers import cover_special_adjacency

logger = getLogger(__name__)

DEFAULT_BUDGET = 2_000_000
BRUTE_FORCE_LIMIT = 24
PICK_MODES = ("random", "first")


def is_vertex_cover(g: Graph, s: Iterable[int]) -> bool:
    chosen = s if isinstance(s, (set, frozenset)) else set(s)
    return all(u in chosen or v in chosen for u, v in g.edges)


def two_approx_cover(g: Graph, seed: int = 0, pick: str = "random") -> frozenset[int]:
    """Take both endpoints of a remaining edge until none is left.

    ``pick="random"`` visits edges in a seeded random order, which is the same
    as drawing uniformly among the edges still uncovered at each step;
    ``pick="first"`` uses ascending edge order.
    """
    edges = g.sorted_edges()
    if pick == "random":
        order = make_rng(seed).permutation(len(edges))
        edges = [edges[i] for i in order]
    elif pick != "first":
        raise UsageError(f"unknown pick mode {pick!r}; expected one of {', '.join(PICK_MODES)}")
    cover: set[int] = set()
    for u, v in edges:
        if u in cover or v in cover:
            continue
        cover.add(u)
        cover.add(v)
    return frozenset(cover)


def _without(adjacency: dict[int, set[int]], removed: Iterable[int]) -> dict[int, set[int]]:
    gone = set(removed)
    result: dict[int, set[int]] = {}
    for u, neighbours in adjacency.items():
        if u in gone:
            continue
        remaining = neighbours - gone
        if remaining:
            result[u] = remaining
    return result


def _take(adjacency: dict[int, set[int]], v: int) -> None:
    for w in adjacency.pop(v):
        adjacency[w].discard(v)
        if not adjacency[w]:
            del adjacency[w]


def _matching_bound(adjacency: dict[int, set[int]]) -> int:
    matched: set[int] = set()
    size = 0
    for u in sorted(adjacency):
        if u in matched:
            continue
        for w in adjacency[u]:
            if w not in matched:
                matched.add(u)
                matched.add(w)
                size += 1
                break
    return size


class _BranchAndBound:
    def __init__(self, budget: int, incumbent: Iterable[int]) -> None:
        self.budget = budget
        self.nodes = 0
        self.best = sorted(incumbent)

    def search(self, adjacency: dict[int, set[int]], chosen: list[int]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)
        chosen = list(chosen)
        # A degree-one vertex is never needed: its neighbour covers at least as much.
        while True:
            leaf = next((u for u in sorted(adjacency) if len(adjacency[u]) == 1), None)
            if leaf is None:
                break
            (w,) = adjacency[leaf]
            chosen.append(w)
            _take(adjacency, w)
        if len(chosen) + _matching_bound(adjacency) >= len(self.best):
            return
        if not adjacency:
            self.best = sorted(chosen)
            return
        if max(len(neighbours) for neighbours in adjacency.values()) <= 2:
            rest = cover_special_adjacency({u: set(nb) for u, nb in adjacency.items()})
            if len(chosen) + len(rest) < len(self.best):
                self.best = sorted(chosen + rest)
            return
        v = max(sorted(adjacency), key=lambda u: len(adjacency[u]))
        neighbours = sorted(adjacency[v])
        self.search(_without(adjacency, (v,)), chosen + [v])
        self.search(_without(adjacency, neighbours), chosen + neighbours)


def exact_cover(g: Graph, budget: int = DEFAULT_BUDGET) -> frozenset[int]:
    """Minimum vertex cover by branch-and-bound on a maximum-degree vertex.

    Raises ``BudgetExceeded`` once more than ``budget`` search nodes are
    expanded; the search never returns a non-optimal cover.
    """
    if budget < 1:
        raise UsageError(f"budget must be positive, got {budget}")
    adjacency = {u: nb for u, nb in g.adjacency().items() if nb}
    search = _BranchAndBound(budget, two_approx_cover(g, pick="first"))
    search.search(adjacency, [])
    logger.debug("exact cover of size %d after %d nodes", len(search.best), search.nodes)
    return frozenset(search.best)


def brute_force_cover(g: Graph) -> frozenset[int]:
    """Smallest cover by enumerating vertex subsets in order of size."""
    candidates = sorted(u for u in g.vertices if g.neighbors(u))
    if len(candidates) > BRUTE_FORCE_LIMIT:
        raise UsageError(f"subset enumeration is limited to {BRUTE_FORCE_LIMIT} non-isolated vertices")
    for size in range(len(candidates) + 1):
        for subset in combinations(candidates, size):
            chosen = frozenset(subset)
            if is_vertex_cover(g, chosen):
                return chosen
    return frozenset(candidates)

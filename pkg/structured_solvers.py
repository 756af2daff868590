"""
structured_solvers.py - Optimal vertex covers for trees and simple cycles.

The public functions take immutable ``Graph`` values.  The ``*_adjacency``
variants work on a mutable ``{vertex: set(neighbours)}`` mapping so the
chromosome decoder can cover its residual graph without rebuilding graphs
per component.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Iterable, MutableMapping

from graph_core import ComponentKind, Graph, adjacency_components, classify_components, component_kind
from phylocover_shared import ContractViolation, UsageError

Adjacency = MutableMapping[int, set[int]]


def tree_cover_adjacency(adjacency: Adjacency, vertices: Iterable[int]) -> list[int]:
    """Cover one tree: take the neighbour of the lowest-id leaf until no edge is left.

    Consumes the edges of ``vertices`` from ``adjacency``.
    """
    members = list(vertices)
    degrees = {v: len(adjacency[v]) for v in members}
    leaves = [v for v in members if degrees[v] == 1]
    heapify(leaves)
    cover: list[int] = []
    while leaves:
        u = heappop(leaves)
        if degrees[u] != 1:
            continue
        (v,) = adjacency[u]
        cover.append(v)
        for w in adjacency[v]:
            adjacency[w].discard(v)
            degrees[w] -= 1
            if degrees[w] == 1:
                heappush(leaves, w)
        adjacency[v].clear()
        degrees[v] = 0
    return cover


def cycle_cover_adjacency(adjacency: Adjacency, vertices: Iterable[int]) -> list[int]:
    """Walk the cycle from its lowest id towards the smaller neighbour and take every other vertex."""
    start = min(vertices)
    walk = [start]
    previous, current = start, min(adjacency[start])
    while current != start:
        walk.append(current)
        a, b = adjacency[current]
        previous, current = current, (b if a == previous else a)
    cover = walk[0::2]
    for v in walk:
        adjacency[v].clear()
    return cover


def cover_special_adjacency(adjacency: Adjacency) -> list[int]:
    cover: list[int] = []
    for component in adjacency_components(adjacency.keys(), adjacency):
        kind = component_kind(component, adjacency)
        if kind is ComponentKind.TREE:
            cover.extend(tree_cover_adjacency(adjacency, component))
        elif kind is ComponentKind.SIMPLE_CYCLE:
            cover.extend(cycle_cover_adjacency(adjacency, component))
        else:
            raise ContractViolation(
                f"component with smallest vertex {min(component)} is neither a tree nor a simple cycle"
            )
    return cover


def _single_component(g: Graph, expected: ComponentKind) -> frozenset[int]:
    """The one component with edges; isolated ids of the id space are ignored."""
    components = [(c, kind) for c, kind in classify_components(g) if len(c) > 1]
    if not components and expected is ComponentKind.TREE:
        return frozenset()
    if len(components) != 1 or components[0][1] is not expected:
        found = ", ".join(kind.value for _, kind in components) or "empty graph"
        raise UsageError(f"expected a single {expected.value} component, found: {found}")
    return components[0][0]


def tree_vertex_cover(g: Graph) -> frozenset[int]:
    vertices = _single_component(g, ComponentKind.TREE)
    return frozenset(tree_cover_adjacency(g.adjacency(), vertices))


def cycle_vertex_cover(g: Graph) -> frozenset[int]:
    vertices = _single_component(g, ComponentKind.SIMPLE_CYCLE)
    return frozenset(cycle_cover_adjacency(g.adjacency(), vertices))


def cover_special_graph(g: Graph) -> frozenset[int]:
    """Union of optimal per-component covers; every component must be a tree or a simple cycle."""
    return frozenset(cover_special_adjacency(g.adjacency()))

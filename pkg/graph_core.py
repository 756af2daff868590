"""
graph_core.py - Undirected simple graphs for the vertex cover solvers.

Vertices are integer ids in ``range(n)``.  Removing vertices keeps the id
space (``n``) and the surviving ids, so covers computed on a reduced graph
can be merged with covers of the original one.

Edge-list text format::

    # optional comment lines
    n m
    u v        (m lines, 0-indexed, either order on read, u < v on write)
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from logging import getLogger
from pathlib import Path
from typing import Iterable

import numpy as np

from phylocover_shared import InputFormatError, UsageError, make_rng, round_half_up

logger = getLogger(__name__)

Edge = tuple[int, int]

_TOKEN = re.compile(r"\S+")


class ComponentKind(str, Enum):
    TREE = "Tree"
    SIMPLE_CYCLE = "SimpleCycle"
    OTHER = "Other"


@dataclass(frozen=True, slots=True)
class Graph:
    """Immutable undirected simple graph.

    ``edges`` is normalised to canonical ``(u, v)`` pairs with ``u < v``;
    ``vertices`` defaults to every id in ``range(n)``.
    """

    n: int
    edges: frozenset[Edge] = frozenset()
    vertices: frozenset[int] = None  # type: ignore[assignment]
    _adjacency: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise UsageError(f"vertex count must be a non-negative integer, got {self.n!r}")
        if self.vertices is None:
            vertices = frozenset(range(self.n))
        else:
            vertices = frozenset(int(v) for v in self.vertices)
            for v in vertices:
                if not 0 <= v < self.n:
                    raise UsageError(f"vertex {v} outside [0, {self.n})")
        canonical: list[Edge] = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise UsageError(f"self-loop on vertex {u}")
            if u not in vertices or v not in vertices:
                raise UsageError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            canonical.append((u, v) if u < v else (v, u))
        edges = frozenset(canonical)
        if len(edges) != len(canonical):
            raise UsageError("duplicate edge")
        neighbours: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_adjacency", tuple(frozenset(s) for s in neighbours))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> frozenset[int]:
        _check_vertex(self, u)
        return self._adjacency[u]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        """Return a mutable copy of the adjacency of the present vertices."""
        return {v: set(self._adjacency[v]) for v in self.vertices}


def from_edges(n: int, pairs: Iterable[tuple[int, int]], vertices: Iterable[int] | None = None) -> Graph:
    return Graph(n, tuple(pairs), None if vertices is None else frozenset(vertices))  # type: ignore[arg-type]


def _check_vertex(g: Graph, u: int) -> None:
    if not isinstance(u, (int, np.integer)) or not 0 <= u < g.n:
        raise UsageError(f"vertex {u!r} outside [0, {g.n})")


def gen_random_graph(n: int, density: float, seed: int) -> Graph:
    """Sample G(n, m) with m = round(density * n(n-1)/2), pairs drawn without replacement."""
    if n < 1:
        raise UsageError(f"n must be at least 1, got {n}")
    if not 0.0 <= density <= 1.0:
        raise UsageError(f"density must lie in [0, 1], got {density}")
    total = n * (n - 1) // 2
    m = min(total, max(0, round_half_up(Fraction(density).limit_denominator(10**9) * total)))
    if m == 0:
        return Graph(n)
    rng = make_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    picks = rng.choice(total, size=m, replace=False)
    edges = zip(rows[picks].tolist(), cols[picks].tolist())
    logger.debug("generated graph n=%d density=%s seed=%d edges=%d", n, density, seed, m)
    return Graph(n, frozenset(edges))


def degree(g: Graph, u: int) -> int:
    _check_vertex(g, u)
    return len(g._adjacency[u])


def find_bridges(g: Graph) -> set[Edge]:
    """Tarjan's low-link bridge search, iterative so deep paths do not hit the recursion limit."""
    adjacency = g._adjacency
    disc = [-1] * g.n
    low = [0] * g.n
    timer = 0
    bridges: set[Edge] = set()
    for root in sorted(g.vertices):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(sorted(adjacency[root])))]
        while stack:
            u, parent, pending = stack[-1]
            descended = False
            for v in pending:
                if v == parent:
                    continue
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, u, iter(sorted(adjacency[v]))))
                    descended = True
                    break
                low[u] = min(low[u], disc[v])
            if descended:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[u])
                if low[u] > disc[p]:
                    bridges.add((p, u) if p < u else (u, p))
    return bridges


def _on_cycle(g: Graph, u: int, bridges: set[Edge]) -> bool:
    return any(((u, v) if u < v else (v, u)) not in bridges for v in g._adjacency[u])


def on_cycle(g: Graph, u: int) -> bool:
    _check_vertex(g, u)
    return _on_cycle(g, u, find_bridges(g))


def critical_vertices(g: Graph) -> list[int]:
    """Vertices of degree > 2 that lie on a cycle, ascending; the order fixes chromosome bits."""
    bridges = find_bridges(g)
    return [u for u in sorted(g.vertices) if len(g._adjacency[u]) > 2 and _on_cycle(g, u, bridges)]


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    kept = frozenset(keep)
    edges = [(u, v) for u in kept for v in g._adjacency[u] if u < v and v in kept]
    return Graph(g.n, frozenset(edges), kept)


def remove_vertices(g: Graph, s: Iterable[int]) -> Graph:
    removed = frozenset(s)
    if not removed:
        return g
    return induced_subgraph(g, g.vertices - removed)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Components in order of their smallest vertex id."""
    return adjacency_components(g.vertices, g._adjacency)


def adjacency_components(vertices: Iterable[int], adjacency) -> list[frozenset[int]]:
    seen: set[int] = set()
    components: list[frozenset[int]] = []
    for start in sorted(vertices):
        if start in seen:
            continue
        seen.add(start)
        component = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    component.append(v)
                    queue.append(v)
        components.append(frozenset(component))
    return components


def component_kind(vertices: frozenset[int], adjacency) -> ComponentKind:
    degrees = [len(adjacency[v]) for v in vertices]
    edge_count = sum(degrees) // 2
    if edge_count == len(vertices) - 1:
        return ComponentKind.TREE
    if all(d == 2 for d in degrees):
        return ComponentKind.SIMPLE_CYCLE
    return ComponentKind.OTHER


def classify_components(g: Graph) -> list[tuple[frozenset[int], ComponentKind]]:
    return [(c, component_kind(c, g._adjacency)) for c in connected_components(g)]


# ==== Edge-list text format ====


def parse_graph(text: str, *, path: str | Path | None = None) -> Graph:
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        last_line = lineno
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(raw)]
        if len(tokens) != 2:
            column = tokens[2][1] if len(tokens) > 2 else len(raw) + 1
            raise InputFormatError(f"expected 2 fields, found {len(tokens)}", line=lineno, column=column, path=path)
        values = []
        for token, column in tokens:
            try:
                values.append(int(token))
            except ValueError:
                raise InputFormatError(f"not an integer: {token!r}", line=lineno, column=column, path=path) from None
        if header is None:
            n, m = values
            if n < 0 or m < 0:
                raise InputFormatError("counts must be non-negative", line=lineno, column=1, path=path)
            if m > n * (n - 1) // 2:
                raise InputFormatError(f"{m} edges do not fit a simple graph on {n} vertices", line=lineno, column=tokens[1][1], path=path)
            header = (n, m)
            continue
        n, m = header
        if len(edges) == m:
            raise InputFormatError(f"more than the {m} declared edges", line=lineno, column=1, path=path)
        u, v = values
        for value, (_, column) in zip(values, tokens):
            if not 0 <= value < n:
                raise InputFormatError(f"vertex {value} outside [0, {n})", line=lineno, column=column, path=path)
        if u == v:
            raise InputFormatError(f"self-loop on vertex {u}", line=lineno, column=tokens[1][1], path=path)
        edge = (u, v) if u < v else (v, u)
        if edge in seen:
            raise InputFormatError(f"duplicate edge, first seen on line {seen[edge]}", line=lineno, column=1, path=path)
        seen[edge] = lineno
        edges.append(edge)
    if header is None:
        raise InputFormatError("missing 'n m' header", line=max(last_line, 1), path=path)
    if len(edges) != header[1]:
        raise InputFormatError(f"declared {header[1]} edges, found {len(edges)}", line=last_line, path=path)
    return Graph(header[0], frozenset(edges))


def read_graph(path: str | Path) -> Graph:
    with open(path, encoding="utf-8") as handle:
        return parse_graph(handle.read(), path=path)


def format_graph(g: Graph) -> str:
    """Canonical text; removed vertices are written as isolated ids of the same id space."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")

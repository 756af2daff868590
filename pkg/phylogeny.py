"""
phylogeny.py - Binary character matrices and perfect phylogenies.

Two characters are compatible when the sets of species exhibiting them are
disjoint or nested.  The conflict graph has one vertex per character and an
edge per incompatible pair; dropping a vertex cover of it leaves a matrix that
admits a perfect phylogeny.

Matrix text format::

    # optional comment lines
    m n
    0110       (m rows of n 0/1 digits, whitespace between digits allowed)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from logging import getLogger
from pathlib import Path
from typing import Sequence

import numpy as np

from graph_core import Graph, classify_components, critical_vertices
from hybrid_ga import CoverSolution, GaParams
from phylocover_shared import IncompatibleMatrixError, InputFormatError, UsageError, make_rng
from solvers import check_solver, solve

logger = getLogger(__name__)


@dataclass(frozen=True, slots=True, eq=False)
class BinaryCharacterMatrix:
    """m species x n characters; ``cells[i, j] == 1`` iff species i exhibits character j.

    A matrix restricted to no columns (every character dropped) has ``n == 0``;
    matrices read or generated always have ``n >= 1``.
    """

    cells: np.ndarray
    species_labels: tuple[str, ...] = ()
    character_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        cells = np.array(self.cells)
        if cells.ndim != 2 or cells.shape[0] < 1:
            raise UsageError(f"matrix must be two-dimensional with at least one species, got shape {cells.shape}")
        if cells.size and not np.isin(cells, (0, 1)).all():
            raise UsageError("matrix cells must be 0 or 1")
        cells = cells.astype(np.uint8)
        cells.flags.writeable = False
        m, n = cells.shape
        species = tuple(self.species_labels) or tuple(f"s{i}" for i in range(m))
        characters = tuple(self.character_labels) or tuple(f"c{j}" for j in range(n))
        if len(species) != m or len(characters) != n:
            raise UsageError("label counts must match the matrix shape")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "species_labels", species)
        object.__setattr__(self, "character_labels", characters)

    @property
    def m(self) -> int:
        return int(self.cells.shape[0])

    @property
    def n(self) -> int:
        return int(self.cells.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryCharacterMatrix):
            return NotImplemented
        return (
            self.cells.shape == other.cells.shape
            and bool(np.array_equal(self.cells, other.cells))
            and self.species_labels == other.species_labels
            and self.character_labels == other.character_labels
        )

    def species_characters(self, i: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.cells[i]).tolist())


@dataclass(frozen=True, slots=True)
class CharacterSpeciesSet:
    character: int
    species: frozenset[int]


@dataclass(frozen=True, slots=True)
class PhyloTree:
    """Rooted tree stored as parallel per-node tuples; node 0 is the root.

    ``edge_labels[v]`` labels the edge from ``parent[v]`` to ``v`` with
    character indices; ``leaf_species[v]`` is the species at a leaf.
    Characters no species exhibits label no edge and are listed in
    ``unplaced``.
    """

    parent: tuple[int | None, ...]
    edge_labels: tuple[tuple[int, ...], ...]
    leaf_species: tuple[int | None, ...]
    unplaced: tuple[int, ...] = ()
    _children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent", tuple(self.parent))
        object.__setattr__(self, "edge_labels", tuple(tuple(labels) for labels in self.edge_labels))
        object.__setattr__(self, "leaf_species", tuple(self.leaf_species))
        object.__setattr__(self, "unplaced", tuple(self.unplaced))
        children: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None and 0 <= p < len(children) and p != v:
                children[p].append(v)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))

    @property
    def size(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def leaves(self) -> list[int]:
        return [v for v in range(self.size) if not self._children[v]]


@dataclass(frozen=True, slots=True, eq=False)
class CompatibleSubset:
    kept: tuple[int, ...]
    dropped: tuple[int, ...]
    matrix: BinaryCharacterMatrix
    tree: PhyloTree
    solution: CoverSolution


def species_set(mtx: BinaryCharacterMatrix, j: int) -> CharacterSpeciesSet:
    if not 0 <= j < mtx.n:
        raise UsageError(f"character {j} outside [0, {mtx.n})")
    return CharacterSpeciesSet(j, frozenset(np.flatnonzero(mtx.cells[:, j]).tolist()))


def compatible(a: CharacterSpeciesSet, b: CharacterSpeciesSet) -> bool:
    return a.species.isdisjoint(b.species) or a.species <= b.species or b.species <= a.species


def conflict_graph(mtx: BinaryCharacterMatrix) -> Graph:
    """Edge (i, j) iff columns i and j properly overlap, from one product of the incidence matrix."""
    cells = mtx.cells.astype(np.int64)
    overlap = cells.T @ cells
    sizes = np.diag(overlap)
    conflict = (overlap > 0) & (overlap < sizes[:, None]) & (overlap < sizes[None, :])
    rows, cols = np.nonzero(np.triu(conflict, k=1))
    return Graph(mtx.n, frozenset(zip(rows.tolist(), cols.tolist())))


def is_perfect_phylogeny(mtx: BinaryCharacterMatrix) -> bool:
    return conflict_graph(mtx).m == 0


def build_perfect_phylogeny(mtx: BinaryCharacterMatrix) -> PhyloTree:
    """Walk each species down from the root through its characters, largest species set first.

    Identical columns share one edge; the edge carries all of their indices.
    """
    conflicts = conflict_graph(mtx)
    if conflicts.m:
        raise IncompatibleMatrixError(*min(conflicts.edges))
    cells = mtx.cells
    sizes = cells.sum(axis=0)
    groups: dict[bytes, list[int]] = {}
    unplaced: list[int] = []
    for j in range(mtx.n):
        if sizes[j] == 0:
            unplaced.append(j)
        else:
            groups.setdefault(cells[:, j].tobytes(), []).append(j)
    ordered = sorted(groups.values(), key=lambda cols: (-int(sizes[cols[0]]), cols[0]))

    parent: list[int | None] = [None]
    labels: list[tuple[int, ...]] = [()]
    species: list[int | None] = [None]
    child_by_group: dict[tuple[int, int], int] = {}
    for i in range(mtx.m):
        node = 0
        for g, cols in enumerate(ordered):
            if not cells[i, cols[0]]:
                continue
            child = child_by_group.get((node, g))
            if child is None:
                child = len(parent)
                parent.append(node)
                labels.append(tuple(cols))
                species.append(None)
                child_by_group[(node, g)] = child
            node = child
        parent.append(node)
        labels.append(())
        species.append(i)

    # A path node whose only child is an unlabeled species leaf becomes that leaf.
    children: list[list[int]] = [[] for _ in parent]
    for v in range(1, len(parent)):
        children[parent[v]].append(v)
    absorbed: set[int] = set()
    for v in range(1, len(parent)):
        if len(children[v]) == 1:
            leaf = children[v][0]
            if species[leaf] is not None and not labels[leaf]:
                species[v] = species[leaf]
                absorbed.add(leaf)
    renumber: dict[int, int] = {}
    for v in range(len(parent)):
        if v not in absorbed:
            renumber[v] = len(renumber)
    keep = [v for v in range(len(parent)) if v not in absorbed]
    return PhyloTree(
        parent=tuple(None if parent[v] is None else renumber[parent[v]] for v in keep),
        edge_labels=tuple(labels[v] for v in keep),
        leaf_species=tuple(species[v] for v in keep),
        unplaced=tuple(unplaced),
    )


def _tree_depths(t: PhyloTree) -> list[int] | None:
    count = t.size
    if count == 0 or t.parent[0] is not None:
        return None
    depths: list[int | None] = [None] * count
    depths[0] = 0
    for start in range(1, count):
        path: list[int] = []
        v: int | None = start
        while v is not None:
            if not isinstance(v, int) or not 0 <= v < count or len(path) > count:
                return None
            if depths[v] is not None:
                break
            path.append(v)
            v = t.parent[v]
        if v is None:
            return None
        base = depths[v]
        for offset, node in enumerate(reversed(path), start=1):
            depths[node] = base + offset
    return depths  # type: ignore[return-value]


def verify_phylo_tree(mtx: BinaryCharacterMatrix, t: PhyloTree) -> bool:
    """Check the four defining properties of a perfect phylogenetic tree of ``mtx``."""
    if not (len(t.parent) == len(t.edge_labels) == len(t.leaf_species)):
        return False
    if _tree_depths(t) is None or t.edge_labels[0]:
        return False
    leaves = t.leaves()
    # exactly m leaves, each labeled by a distinct species, and no species elsewhere
    if len(leaves) != mtx.m:
        return False
    if sorted(s for s in (t.leaf_species[v] for v in leaves) if s is not None) != list(range(mtx.m)):
        return False
    if any(t.leaf_species[v] is not None for v in range(t.size) if t.children(v)):
        return False
    # every exhibited character labels exactly one edge, unexhibited ones none
    counts = [0] * mtx.n
    for labels in t.edge_labels:
        for j in labels:
            if not isinstance(j, int) or not 0 <= j < mtx.n:
                return False
            counts[j] += 1
    exhibited = mtx.cells.sum(axis=0) > 0
    for j in range(mtx.n):
        if counts[j] != (1 if exhibited[j] else 0):
            return False
    if any(not 0 <= j < mtx.n or exhibited[j] for j in t.unplaced):
        return False
    # root-to-leaf labels equal the leaf's character set
    for leaf in leaves:
        seen: list[int] = []
        v: int | None = leaf
        while v is not None:
            seen.extend(t.edge_labels[v])
            v = t.parent[v]
        if len(seen) != len(set(seen)):
            return False
        if frozenset(seen) != mtx.species_characters(t.leaf_species[leaf]):  # type: ignore[arg-type]
            return False
    return True


def restrict_columns(mtx: BinaryCharacterMatrix, kept: Sequence[int]) -> BinaryCharacterMatrix:
    columns = list(kept)
    return BinaryCharacterMatrix(
        mtx.cells[:, columns],
        mtx.species_labels,
        tuple(mtx.character_labels[j] for j in columns),
    )


def largest_compatible_subset(
    mtx: BinaryCharacterMatrix,
    solver: str = "exact",
    seed: int = 0,
    params: GaParams | None = None,
) -> CompatibleSubset:
    """Drop a vertex cover of the conflict graph and build the tree of what remains."""
    check_solver(solver)
    conflicts = conflict_graph(mtx)
    solution = solve(conflicts, solver, seed=seed, params=params)
    dropped = tuple(sorted(solution.cover))
    kept = tuple(j for j in range(mtx.n) if j not in solution.cover)
    restricted = restrict_columns(mtx, kept)
    tree = build_perfect_phylogeny(restricted)
    logger.info("kept %d of %d characters with %s", len(kept), mtx.n, solver)
    return CompatibleSubset(kept, dropped, restricted, tree, solution)


@dataclass(frozen=True, slots=True)
class CompatibilityReport:
    species: int
    characters: int
    conflicts: int
    conflicting_characters: tuple[int, ...]
    critical_count: int
    components: tuple[tuple[int, str], ...]

    @property
    def compatible(self) -> bool:
        return self.conflicts == 0


def compatibility_report(mtx: BinaryCharacterMatrix) -> CompatibilityReport:
    g = conflict_graph(mtx)
    involved = sorted({v for edge in g.edges for v in edge})
    components = tuple(
        (len(vertices), kind.value) for vertices, kind in classify_components(g) if len(vertices) > 1
    )
    return CompatibilityReport(mtx.m, mtx.n, g.m, tuple(involved), len(critical_vertices(g)), components)


def format_report(report: CompatibilityReport, mtx: BinaryCharacterMatrix) -> str:
    lines = [
        f"compatible: {'yes' if report.compatible else 'no'}, conflicts: {report.conflicts}",
        f"species: {report.species}, characters: {report.characters}",
        "conflicting characters: " + " ".join(mtx.character_labels[j] for j in report.conflicting_characters),
        f"critical vertices: {report.critical_count}",
    ]
    for size, kind in report.components:
        lines.append(f"component: {kind} ({size} characters)")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def format_tree(t: PhyloTree, mtx: BinaryCharacterMatrix) -> str:
    """Indented parent-to-child rendering; each line shows the edge labels then the species."""
    lines = ["root"]
    stack = [(child, 1) for child in reversed(t.children(0))]
    while stack:
        v, depth = stack.pop()
        labels = ",".join(mtx.character_labels[j] for j in t.edge_labels[v])
        species = t.leaf_species[v]
        name = mtx.species_labels[species] if species is not None else "*"
        lines.append(f"{'  ' * depth}[{labels}] {name}")
        stack.extend((child, depth + 1) for child in reversed(t.children(v)))
    if t.unplaced:
        lines.append("unplaced: " + " ".join(mtx.character_labels[j] for j in t.unplaced))
    return "\n".join(lines) + "\n"


def format_subset(result: CompatibleSubset) -> str:
    lines = [
        "kept: " + " ".join(str(j) for j in result.kept),
        "dropped: " + " ".join(str(j) for j in result.dropped),
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n" + format_tree(result.tree, result.matrix)


# ==== Matrix text format and generators ====


def parse_matrix(text: str, *, path: str | Path | None = None) -> BinaryCharacterMatrix:
    header: tuple[int, int] | None = None
    rows: list[list[int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        last_line = lineno
        if header is None:
            fields = stripped.split()
            try:
                m, n = (int(value) for value in fields)
            except ValueError:
                raise InputFormatError("expected header 'm n'", line=lineno, column=1, path=path) from None
            if m < 1 or n < 1:
                raise InputFormatError("matrix needs at least one species and one character", line=lineno, column=1, path=path)
            header = (m, n)
            continue
        m, n = header
        if len(rows) == m:
            raise InputFormatError(f"more than the {m} declared rows", line=lineno, column=1, path=path)
        row: list[int] = []
        for column, char in enumerate(raw, start=1):
            if char in "01":
                if len(row) == n:
                    raise InputFormatError(f"more than {n} values", line=lineno, column=column, path=path)
                row.append(1 if char == "1" else 0)
            elif not char.isspace():
                raise InputFormatError(f"unexpected character {char!r}", line=lineno, column=column, path=path)
        if len(row) != n:
            raise InputFormatError(f"expected {n} values, found {len(row)}", line=lineno, column=len(raw) + 1, path=path)
        rows.append(row)
    if header is None:
        raise InputFormatError("missing 'm n' header", line=max(last_line, 1), path=path)
    if len(rows) != header[0]:
        raise InputFormatError(f"declared {header[0]} rows, found {len(rows)}", line=last_line, path=path)
    return BinaryCharacterMatrix(np.array(rows, dtype=np.uint8))


def read_matrix(path: str | Path) -> BinaryCharacterMatrix:
    with open(path, encoding="utf-8") as handle:
        return parse_matrix(handle.read(), path=path)


def format_matrix(mtx: BinaryCharacterMatrix) -> str:
    lines = [f"{mtx.m} {mtx.n}"]
    lines.extend("".join("1" if cell else "0" for cell in row) for row in mtx.cells.tolist())
    return "\n".join(lines) + "\n"


def random_matrix(m: int, n: int, density: float, seed: int) -> BinaryCharacterMatrix:
    if m < 1 or n < 1:
        raise UsageError("matrix needs at least one species and one character")
    if not 0.0 <= density <= 1.0:
        raise UsageError(f"density must lie in [0, 1], got {density}")
    rng = make_rng(seed)
    return BinaryCharacterMatrix((rng.random((m, n)) < density).astype(np.uint8))


def random_compatible_matrix(m: int, n: int, seed: int) -> BinaryCharacterMatrix:
    """Columns drawn from the clades of a random hierarchy over the species, so all pairs are compatible."""
    if m < 1 or n < 1:
        raise UsageError("matrix needs at least one species and one character")
    rng = make_rng(seed)
    clades: list[frozenset[int]] = [frozenset(range(m))]
    pending: list[list[int]] = [list(range(m))]
    while pending:
        block = pending.pop()
        if len(block) < 2:
            continue
        shuffled = rng.permutation(block).tolist()
        cut = int(rng.integers(1, len(block)))
        for part in (shuffled[:cut], shuffled[cut:]):
            clades.append(frozenset(part))
            pending.append(part)
    cells = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        pick = int(rng.integers(0, len(clades) + 1))
        if pick < len(clades):
            cells[sorted(clades[pick]), j] = 1
    return BinaryCharacterMatrix(cells)


"""Graph representation, generation, bridges, critical vertices and decomposition."""

from __future__ import annotations

import math
from fractions import Fraction

import networkx as nx
import pytest
from _graphs import (
    bowtie,
    complete,
    components_count,
    cycle,
    path,
    random_graphs,
    random_tree,
    star,
    triangle_with_pendant,
    union,
    vertex_on_cycle,
)

from graph_core import (
    ComponentKind,
    Graph,
    classify_components,
    critical_vertices,
    degree,
    find_bridges,
    format_graph,
    from_edges,
    gen_random_graph,
    on_cycle,
    parse_graph,
    read_graph,
    remove_vertices,
    write_graph,
)
from phylocover_shared import InputFormatError, UsageError

SWEEP_DENSITIES = (0.05, 0.1, 0.3, 0.6, 0.9)


def _to_networkx(g: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from(g.edges)
    return graph


# ---------- Graph invariants ------------------------------------------------


def test_edges_are_canonicalised() -> None:
    g = from_edges(3, [(2, 0), (1, 2)])
    assert g.edges == frozenset({(0, 2), (1, 2)})
    assert g.order == 3 and g.m == 2


@pytest.mark.parametrize(
    "pairs",
    [[(1, 1)], [(0, 1), (1, 0)], [(0, 3)], [(-1, 0)]],
    ids=["self-loop", "duplicate", "out-of-range", "negative"],
)
def test_invalid_edges_are_rejected(pairs) -> None:
    with pytest.raises(UsageError):
        from_edges(3, pairs)


# ---------- gen_random_graph -----------------------------------------------


def test_density_one_gives_complete_graph() -> None:
    g = gen_random_graph(4, 1.0, seed=123)
    assert g.m == 6
    assert g == complete(4)


def test_density_zero_gives_edgeless_graph() -> None:
    assert gen_random_graph(5, 0.0, seed=9).m == 0


def test_edge_count_rounds_half_up_on_exact_density() -> None:
    assert gen_random_graph(50, 0.3, seed=7).m == 368


@pytest.mark.parametrize("n", [1, 2, 7, 20, 33])
@pytest.mark.parametrize("density", [0.0, 0.05, 0.3, 0.5, 0.9, 1.0])
def test_edge_count_matches_formula(n: int, density: float) -> None:
    total = n * (n - 1) // 2
    expected = math.floor(Fraction(str(density)) * total + Fraction(1, 2))
    assert gen_random_graph(n, density, seed=n).m == expected


def test_generation_is_deterministic_in_seed() -> None:
    assert gen_random_graph(30, 0.4, seed=11) == gen_random_graph(30, 0.4, seed=11)
    assert gen_random_graph(30, 0.4, seed=11) != gen_random_graph(30, 0.4, seed=12)


def test_generation_rejects_bad_arguments() -> None:
    with pytest.raises(UsageError):
        gen_random_graph(0, 0.5, seed=1)
    with pytest.raises(UsageError):
        gen_random_graph(5, 1.5, seed=1)


# ---------- degree / bridges / cycles ---------------------------------------


def test_degree_examples() -> None:
    assert {degree(complete(4), v) for v in range(4)} == {3}
    assert degree(Graph(3), 1) == 0
    assert degree(path(3), 1) == 2


def test_degree_rejects_out_of_range_vertex() -> None:
    with pytest.raises(UsageError):
        degree(path(3), 3)


def test_bridge_examples() -> None:
    assert find_bridges(path(3)) == {(0, 1), (1, 2)}
    assert find_bridges(cycle(4)) == set()
    assert find_bridges(triangle_with_pendant()) == {(0, 3)}


def test_bridges_match_definition_on_small_graphs() -> None:
    for g in random_graphs(150, range(2, 13), (0.1, 0.2, 0.3, 0.5, 0.7), seed=3):
        base = components_count(g)
        expected = {e for e in g.edges if components_count(g, removed_edge=e) > base}
        assert find_bridges(g) == expected


def test_bridges_match_networkx() -> None:
    for g in random_graphs(60, range(20, 81, 10), (0.02, 0.05, 0.1, 0.3), seed=4):
        expected = {tuple(sorted(e)) for e in nx.bridges(_to_networkx(g))}
        assert find_bridges(g) == expected


def test_deep_path_does_not_recurse() -> None:
    g = path(5000)
    assert len(find_bridges(g)) == 4999


def test_on_cycle_examples() -> None:
    assert all(on_cycle(cycle(5), v) for v in range(5))
    assert not any(on_cycle(random_tree(12, seed=1), v) for v in range(12))
    assert not on_cycle(triangle_with_pendant(), 3)
    assert on_cycle(triangle_with_pendant(), 0)


def test_on_cycle_matches_exhaustive_search() -> None:
    for g in random_graphs(120, range(3, 11), (0.1, 0.2, 0.3, 0.45, 0.6), seed=5):
        for v in sorted(g.vertices):
            assert on_cycle(g, v) == vertex_on_cycle(g, v)


# ---------- critical vertices ----------------------------------------------


def test_critical_vertex_examples() -> None:
    assert critical_vertices(cycle(6)) == []
    assert critical_vertices(complete(4)) == [0, 1, 2, 3]
    assert critical_vertices(bowtie()) == [2]


def test_high_degree_vertex_off_cycle_is_not_critical() -> None:
    assert critical_vertices(star(5)) == []


# ---------- remove_vertices / classify_components ---------------------------


def test_remove_vertices_keeps_ids() -> None:
    g = remove_vertices(complete(4), {0})
    assert g.vertices == frozenset({1, 2, 3})
    assert g.edges == frozenset({(1, 2), (1, 3), (2, 3)})
    assert g.n == 4


def test_remove_nothing_is_identity() -> None:
    g = bowtie()
    assert remove_vertices(g, set()) == g


def test_removing_a_cycle_vertex_leaves_a_path() -> None:
    g = remove_vertices(cycle(5), {0})
    assert g.edges == frozenset({(1, 2), (2, 3), (3, 4)})
    assert classify_components(g) == [(frozenset({1, 2, 3, 4}), ComponentKind.TREE)]


def test_classify_examples() -> None:
    g = union(7, cycle(4), path(3, offset=4))
    assert classify_components(g) == [
        (frozenset({0, 1, 2, 3}), ComponentKind.SIMPLE_CYCLE),
        (frozenset({4, 5, 6}), ComponentKind.TREE),
    ]
    assert classify_components(complete(4)) == [(frozenset({0, 1, 2, 3}), ComponentKind.OTHER)]
    assert classify_components(Graph(1)) == [(frozenset({0}), ComponentKind.TREE)]


def test_components_match_networkx() -> None:
    for g in random_graphs(40, range(10, 60, 7), (0.02, 0.05, 0.08), seed=6):
        ours = {c for c, _ in classify_components(g)}
        theirs = {frozenset(c) for c in nx.connected_components(_to_networkx(g))}
        assert ours == theirs


def test_removing_critical_vertices_leaves_trees_and_cycles() -> None:
    checked = 0
    for g in random_graphs(500, range(5, 81), SWEEP_DENSITIES, seed=7):
        rest = remove_vertices(g, critical_vertices(g))
        kinds = {kind for _, kind in classify_components(rest)}
        assert ComponentKind.OTHER not in kinds
        checked += 1
    assert checked == 500


# ---------- edge-list format -------------------------------------------------


def test_format_is_canonical_and_parses_back() -> None:
    g = gen_random_graph(12, 0.4, seed=2)
    text = format_graph(g)
    assert parse_graph(text) == g
    assert format_graph(parse_graph(text)) == text
    lines = text.splitlines()
    assert lines[0] == f"12 {g.m}"
    assert all(int(u) < int(v) for u, v in (line.split() for line in lines[1:]))


def test_parse_accepts_comments_and_either_order() -> None:
    g = parse_graph("# triangle\n3 3\n1 0\n# middle\n2 1\n0 2\n")
    assert g == complete(3)


@pytest.mark.parametrize(
    ("text", "line", "column"),
    [
        ("3 1\n0 x\n", 2, 3),
        ("3 1\n0 1 2\n", 2, 5),
        ("3 1\n0 5\n", 2, 3),
        ("3 1\n1 1\n", 2, 3),
        ("3 2\n0 1\n1 0\n", 3, 1),
        ("3 2\n0 1\n", 2, None),
        ("3 1\n0 1\n1 2\n", 3, 1),
    ],
    ids=["not-int", "extra-field", "out-of-range", "self-loop", "duplicate", "too-few", "too-many"],
)
def test_parse_errors_report_location(text: str, line: int, column: int | None) -> None:
    with pytest.raises(InputFormatError) as error:
        parse_graph(text)
    assert error.value.line == line
    assert error.value.column == column


def test_file_round_trip(tmp_path) -> None:
    target = tmp_path / "g.txt"
    g = gen_random_graph(9, 0.5, seed=8)
    write_graph(g, target)
    assert read_graph(target) == g


def test_read_error_names_the_file(tmp_path) -> None:
    target = tmp_path / "bad.txt"
    target.write_text("2 1\n0 0\n", encoding="utf-8")
    with pytest.raises(InputFormatError, match="bad.txt: line 2"):
        read_graph(target)

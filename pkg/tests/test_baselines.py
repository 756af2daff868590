"""The 2-approximation baseline and the exact oracle chain."""

from __future__ import annotations

import pytest
from _graphs import complete, cycle, min_cover_size, path, petersen, random_graphs

from baselines import brute_force_cover, exact_cover, is_vertex_cover, two_approx_cover
from graph_core import Graph, gen_random_graph
from phylocover_shared import BudgetExceeded, UsageError

SMALL_DENSITIES = (0.1, 0.2, 0.3, 0.5, 0.7, 0.9)


# ---------- is_vertex_cover ---------------------------------------------------


def test_is_vertex_cover_examples() -> None:
    triangle = complete(3)
    assert is_vertex_cover(triangle, {0, 2})
    assert not is_vertex_cover(triangle, {1})
    assert is_vertex_cover(Graph(4), set())


# ---------- two_approx_cover ---------------------------------------------------


def test_path_gets_both_endpoints_of_one_edge() -> None:
    cover = two_approx_cover(path(3), seed=1)
    assert len(cover) == 2
    assert 1 in cover


def test_single_edge_and_edgeless() -> None:
    assert two_approx_cover(path(2), seed=5) == frozenset({0, 1})
    assert two_approx_cover(Graph(3), seed=5) == frozenset()


def test_first_pick_is_deterministic_edge_order() -> None:
    assert two_approx_cover(path(4), pick="first") == frozenset({0, 1, 2, 3})


def test_same_seed_same_cover() -> None:
    g = gen_random_graph(40, 0.3, seed=3)
    assert two_approx_cover(g, seed=10) == two_approx_cover(g, seed=10)


def test_unknown_pick_mode() -> None:
    with pytest.raises(UsageError):
        two_approx_cover(path(3), pick="middle")


def test_two_approx_is_within_factor_two() -> None:
    for index, g in enumerate(random_graphs(200, range(2, 15), SMALL_DENSITIES, seed=11)):
        optimum = len(exact_cover(g))
        for seed in (index, index + 1000):
            cover = two_approx_cover(g, seed=seed)
            assert is_vertex_cover(g, cover)
            assert len(cover) <= 2 * optimum


# ---------- exact_cover ----------------------------------------------------------


@pytest.mark.parametrize(("g", "size"), [(complete(3), 2), (complete(4), 3), (petersen(), 6)], ids=["K3", "K4", "petersen"])
def test_exact_examples(g: Graph, size: int) -> None:
    cover = exact_cover(g)
    assert len(cover) == size
    assert is_vertex_cover(g, cover)


def test_exact_matches_subset_enumeration() -> None:
    for g in random_graphs(100, range(2, 15), SMALL_DENSITIES, seed=12):
        cover = exact_cover(g)
        assert is_vertex_cover(g, cover)
        assert len(cover) == min_cover_size(g)
        assert len(brute_force_cover(g)) == len(cover)


def test_exact_is_deterministic() -> None:
    g = gen_random_graph(22, 0.3, seed=4)
    assert exact_cover(g) == exact_cover(g)


def test_exact_handles_cycles_and_odd_holes() -> None:
    assert len(exact_cover(cycle(9))) == 5


def test_budget_exceeded_is_explicit() -> None:
    g = gen_random_graph(40, 0.5, seed=1)
    with pytest.raises(BudgetExceeded) as error:
        exact_cover(g, budget=3)
    assert error.value.budget == 3


def test_brute_force_refuses_large_graphs() -> None:
    with pytest.raises(UsageError):
        brute_force_cover(gen_random_graph(40, 0.5, seed=1))

"""Named cover solvers shared by the phylogeny filter, the bench and the CLI."""

from __future__ import annotations

from dataclasses import replace

from baselines import DEFAULT_BUDGET, exact_cover, two_approx_cover
from graph_core import Graph
from hybrid_ga import CoverSolution, GaParams, evolve, make_solution
from phylocover_shared import UsageError

SOLVER_NAMES = ("2approx", "exact", "hybrid-ga")


def check_solver(name: str) -> str:
    if name not in SOLVER_NAMES:
        raise UsageError(f"unknown solver {name!r}; expected one of {', '.join(SOLVER_NAMES)}")
    return name


def solve(
    g: Graph,
    algo: str,
    *,
    seed: int = 0,
    params: GaParams | None = None,
    pick: str = "random",
    budget: int = DEFAULT_BUDGET,
) -> CoverSolution:
    check_solver(algo)
    if algo == "2approx":
        return make_solution(g, two_approx_cover(g, seed, pick), algo, seed)
    if algo == "exact":
        return make_solution(g, exact_cover(g, budget), algo, None)
    return evolve(g, replace(params or GaParams(), seed=seed))

#!/usr/bin/env python3
"""
bench_cli.py - Command-line entry point and paired benchmark harness.

Subcommands:
  gen     write a random graph (or, with --matrix, a random binary matrix)
  solve   read a graph (or a matrix's conflict graph) and run one solver
  check   compatibility report for a matrix
  filter  largest compatible subset of a matrix, with its perfect phylogeny
  bench   paired experiment over sizes x densities x runs, CSV on stdout/--out

Exit codes: 0 success, 1 usage error, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field, replace
from logging import getLogger
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

from baselines import DEFAULT_BUDGET, PICK_MODES
from graph_core import critical_vertices, format_graph, gen_random_graph, read_graph
from hybrid_ga import MUTATION_MODES, GaParams
from phylocover_shared import (
    BudgetExceeded,
    ContractViolation,
    IncompatibleMatrixError,
    InputFormatError,
    MissingSolverRows,
    UsageError,
    default_seed,
    density_key,
    derive_seed,
    format_ids,
    setup_logging,
)
from phylogeny import (
    compatibility_report,
    conflict_graph,
    format_matrix,
    format_report,
    format_subset,
    largest_compatible_subset,
    random_matrix,
    read_matrix,
)
from solvers import SOLVER_NAMES, check_solver, solve

logger = getLogger(__name__)

FULL_SIZES = (50, 100, 150, 200, 250)
DESK_SIZES = (20, 30, 40, 50, 60)
STUDY_DENSITIES = (0.3, 0.6, 0.9)
DEFAULT_GRID = ((0.5, 0.5),)
WIDE_GRID = ((0.3, 0.5), (0.3, 0.8), (0.5, 0.5), (0.5, 0.8))
CSV_COLUMNS = (
    "n", "density", "solver", "pop_mult", "crossover", "mutation", "run", "seed",
    "cover_size", "cover_ratio_pct", "critical_count", "generations", "elapsed_ms",
)
CSV_NOTES = (
    "graphs are regenerated for every run from (base seed, n, density, run); all solvers of a run share the graph",
    "improvement = mean 2approx cover ratio % - mean hybrid-ga cover ratio %, in percentage points",
)


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    sizes: tuple[int, ...] = FULL_SIZES
    densities: tuple[float, ...] = STUDY_DENSITIES
    runs_per_cell: int = 10
    solvers: tuple[str, ...] = ("2approx", "hybrid-ga")
    ga_grid: tuple[GaParams, ...] = (GaParams(),)
    base_seed: int = 0
    exact_max_n: int = 30
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def __post_init__(self) -> None:
        for name in ("sizes", "densities", "solvers", "ga_grid"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
            if not getattr(self, name):
                raise UsageError(f"{name} must not be empty")
        if self.runs_per_cell < 1:
            raise UsageError(f"runs per cell must be at least 1, got {self.runs_per_cell}")
        if any(n < 1 for n in self.sizes):
            raise UsageError("sizes must be positive")
        if any(not 0.0 <= d <= 1.0 for d in self.densities):
            raise UsageError("densities must lie in [0, 1]")
        for solver in self.solvers:
            check_solver(solver)
        if self.workers < 1:
            raise UsageError(f"workers must be at least 1, got {self.workers}")


@dataclass(frozen=True, slots=True)
class ExperimentRecord:
    n: int
    density: float
    solver: str
    pop_mult: float | None
    crossover: float | None
    mutation: float | None
    run: int
    seed: int
    cover_size: int
    cover_ratio_pct: float
    critical_count: int
    generations: int
    elapsed_ms: float = field(compare=False)

    @property
    def ga_key(self) -> tuple[float, float, float] | None:
        if self.pop_mult is None:
            return None
        return (self.pop_mult, self.crossover, self.mutation)  # type: ignore[return-value]

    def sort_key(self) -> tuple:
        return (self.n, self.density, self.solver, self.run, self.ga_key or ())


def run_seed(base_seed: int, n: int, density: float, run: int) -> int:
    return derive_seed(base_seed, n, density_key(density), run)


def solver_seed_for(graph_seed: int) -> int:
    """Seed for the 2approx and GA draws of a run, independent of the stream that built its graph."""
    return derive_seed(graph_seed, 1)


def _graph_task(task: tuple) -> list[tuple]:
    """Run every solver on one generated graph; plain tuples in and out so any Python pickles them."""
    n, density, run, seed, solvers, grid, exact_max_n, budget = task
    solver_seed = solver_seed_for(seed)
    g = gen_random_graph(n, density, seed)
    critical = len(critical_vertices(g))
    rows: list[tuple] = []
    for solver in solvers:
        if solver == "exact" and n > exact_max_n:
            continue
        settings = [GaParams(*fields) for fields in grid] if solver == "hybrid-ga" else [None]
        for params in settings:
            started = time.perf_counter()
            solution = solve(g, solver, seed=solver_seed, params=params, budget=budget)
            elapsed = (time.perf_counter() - started) * 1000.0
            knobs = (None, None, None) if params is None else (
                params.population_multiplier, params.crossover_rate, params.mutation_rate,
            )
            rows.append((
                n, density, solver, *knobs, run, seed, solution.size,
                100.0 * solution.size / n, critical, solution.generations, elapsed,
            ))
    return rows


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """One record per (size, density, run, solver[, GA setting]), sorted for output."""
    grid = tuple(astuple(params) for params in cfg.ga_grid)
    tasks = [
        (n, density, run, run_seed(cfg.base_seed, n, density, run), cfg.solvers, grid, cfg.exact_max_n, cfg.budget)
        for n in cfg.sizes
        for density in cfg.densities
        for run in range(cfg.runs_per_cell)
    ]
    if "exact" in cfg.solvers and any(n > cfg.exact_max_n for n in cfg.sizes):
        logger.info("exact solver skipped for sizes above %d", cfg.exact_max_n)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = list(pool.map(_graph_task, tasks))
    else:
        batches = [_graph_task(task) for task in tasks]
    records = [ExperimentRecord(*row) for batch in batches for row in batch]
    logger.info("benchmark finished: %d graphs, %d records", len(tasks), len(records))
    return sorted(records, key=ExperimentRecord.sort_key)


def improvement_summary(
    records: Iterable[ExperimentRecord], *, by_size: bool = False
) -> dict[tuple, float]:
    """Mean 2approx ratio minus mean GA ratio (percentage points), paired by run seed.

    Keys are ``(density, (pop_mult, crossover, mutation))``, or
    ``(n, density, (pop_mult, crossover, mutation))`` with ``by_size``.
    """
    baseline: dict[tuple, float] = {}
    ga_rows: dict[tuple, list[tuple[float, float]]] = defaultdict(list)
    pending: list[ExperimentRecord] = []
    for record in records:
        if record.solver == "2approx":
            baseline[(record.n, record.density, record.run, record.seed)] = record.cover_ratio_pct
        elif record.solver == "hybrid-ga":
            pending.append(record)
    if not baseline:
        raise MissingSolverRows("no 2approx rows to compare against")
    if not pending:
        raise MissingSolverRows("no hybrid-ga rows to compare")
    for record in pending:
        pair = (record.n, record.density, record.run, record.seed)
        if pair not in baseline:
            raise MissingSolverRows(
                f"no 2approx row for n={record.n} density={record.density} run={record.run}"
            )
        key = (record.n, record.density, record.ga_key) if by_size else (record.density, record.ga_key)
        ga_rows[key].append((baseline[pair], record.cover_ratio_pct))
    return {
        key: fmean(a for a, _ in pairs) - fmean(b for _, b in pairs)
        for key, pairs in sorted(ga_rows.items())
    }


def critical_count_summary(records: Iterable[ExperimentRecord]) -> dict[tuple[int, float], float]:
    per_graph: dict[tuple[int, float, int, int], int] = {}
    for record in records:
        per_graph[(record.n, record.density, record.run, record.seed)] = record.critical_count
    cells: dict[tuple[int, float], list[int]] = defaultdict(list)
    for (n, density, _, _), count in per_graph.items():
        cells[(n, density)].append(count)
    return {key: fmean(counts) for key, counts in sorted(cells.items())}


def timing_summary(records: Iterable[ExperimentRecord]) -> dict[tuple[int, float, str], float]:
    cells: dict[tuple[int, float, str], list[float]] = defaultdict(list)
    for record in records:
        cells[(record.n, record.density, record.solver)].append(record.elapsed_ms)
    return {key: fmean(values) for key, values in sorted(cells.items())}


# ==== Output ====


def _number(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:g}"


def format_csv(records: Sequence[ExperimentRecord], *, timing: bool = False) -> str:
    buffer = io.StringIO()
    for note in CSV_NOTES:
        buffer.write(f"# {note}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow((
            r.n, _number(r.density), r.solver, _number(r.pop_mult), _number(r.crossover),
            _number(r.mutation), r.run, r.seed, r.cover_size, f"{r.cover_ratio_pct:.4f}",
            r.critical_count, r.generations, f"{r.elapsed_ms:.3f}" if timing else "",
        ))
    return buffer.getvalue()


def format_summaries(records: Sequence[ExperimentRecord], *, timing: bool = False) -> str:
    lines: list[str] = []
    solvers = {r.solver for r in records}
    if {"2approx", "hybrid-ga"} <= solvers:
        lines.append("# improvement over 2approx (percentage points)")
        lines.append("# density,pop_mult,crossover,mutation,improvement")
        for (density, knobs), value in improvement_summary(records).items():
            lines.append("# " + ",".join([_number(density), *(_number(k) for k in knobs), f"{value:.4f}"]))
    lines.append("# mean critical vertices per graph")
    lines.append("# n,density,critical_mean")
    for (n, density), value in critical_count_summary(records).items():
        lines.append(f"# {n},{_number(density)},{value:.4f}")
    if timing:
        lines.append("# mean elapsed milliseconds")
        lines.append("# n,density,solver,elapsed_ms")
        for (n, density, solver), value in timing_summary(records).items():
            lines.append(f"# {n},{_number(density)},{solver},{value:.3f}")
    return "\n".join(lines) + "\n"


# ==== Command line ====


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _add_ga_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pop-mult", type=float, default=1.0, help="population = pop-mult x critical vertices")
    parser.add_argument("--crossover", type=float, default=0.5, help="single-point crossover probability per pair")
    parser.add_argument("--mutation", type=float, default=0.5, help="mutation probability")
    parser.add_argument("--mutation-mode", choices=MUTATION_MODES, default="one-bit")
    parser.add_argument("--stall", type=int, default=10, help="stop after this many generations without improvement")
    parser.add_argument("--max-gen", type=int, default=1000)


def _ga_params(args: argparse.Namespace) -> GaParams:
    return GaParams(
        population_multiplier=args.pop_mult,
        crossover_rate=args.crossover,
        mutation_rate=args.mutation,
        stall_generations=args.stall,
        max_generations=args.max_gen,
        seed=args.seed,
        mutation_mode=args.mutation_mode,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phylocover", description="Largest compatible subset and vertex cover solvers.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--log-file", default=None)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = commands.add_parser("gen", help="write a random graph or matrix")
    gen.add_argument("--matrix", action="store_true", help="generate a binary character matrix instead")
    gen.add_argument("--n", type=int, help="vertex count")
    gen.add_argument("--species", type=int)
    gen.add_argument("--characters", type=int)
    gen.add_argument("--density", type=float, default=0.3)
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", default=None)

    solve_cmd = commands.add_parser("solve", help="run one solver on a graph or a matrix's conflict graph")
    solve_cmd.add_argument("input")
    solve_cmd.add_argument("--matrix", action="store_true", help="input is a matrix; solve its conflict graph")
    solve_cmd.add_argument("--algo", choices=SOLVER_NAMES, default="hybrid-ga")
    solve_cmd.add_argument("--pick", choices=PICK_MODES, default="random")
    solve_cmd.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    solve_cmd.add_argument("--seed", type=int, default=None)
    solve_cmd.add_argument("--timing", action="store_true", help="also print elapsed milliseconds")
    _add_ga_flags(solve_cmd)

    check = commands.add_parser("check", help="matrix compatibility report")
    check.add_argument("input")

    filter_cmd = commands.add_parser("filter", help="largest compatible subset and its perfect phylogeny")
    filter_cmd.add_argument("input")
    filter_cmd.add_argument("--algo", choices=SOLVER_NAMES, default="exact")
    filter_cmd.add_argument("--seed", type=int, default=None)
    _add_ga_flags(filter_cmd)

    bench = commands.add_parser("bench", help="paired benchmark, CSV output")
    bench.add_argument("--scale", choices=("desk", "full"), default="desk")
    bench.add_argument("--sizes", type=int, nargs="+", default=None)
    bench.add_argument("--densities", type=float, nargs="+", default=None)
    bench.add_argument("--runs", type=int, default=10)
    bench.add_argument("--solvers", choices=SOLVER_NAMES, nargs="+", default=list(SOLVER_NAMES))
    bench.add_argument("--grid", choices=("default", "wide"), default="default")
    bench.add_argument("--pop-mult", type=float, default=1.0)
    bench.add_argument("--stall", type=int, default=10)
    bench.add_argument("--max-gen", type=int, default=1000)
    bench.add_argument("--mutation-mode", choices=MUTATION_MODES, default="one-bit")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--exact-max-n", type=int, default=30)
    bench.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--timing", action="store_true", help="write elapsed_ms and the timing summary")
    bench.add_argument("--out", default=None, help="CSV path (default: stdout)")
    bench.add_argument("--summary", default=None, help="summary path (default: stdout)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_gen(args: argparse.Namespace) -> None:
    if args.matrix:
        if args.species is None or args.characters is None:
            raise UsageError("gen --matrix needs --species and --characters")
        _emit(format_matrix(random_matrix(args.species, args.characters, args.density, args.seed)), args.out)
        return
    if args.n is None:
        raise UsageError("gen needs --n")
    _emit(format_graph(gen_random_graph(args.n, args.density, args.seed)), args.out)


def _cmd_solve(args: argparse.Namespace) -> None:
    g = conflict_graph(read_matrix(args.input)) if args.matrix else read_graph(args.input)
    started = time.perf_counter()
    solution = solve(g, args.algo, seed=args.seed, params=_ga_params(args), pick=args.pick, budget=args.budget)
    elapsed = (time.perf_counter() - started) * 1000.0
    lines = [
        f"cover: {format_ids(solution.cover)}".rstrip(),
        f"size: {solution.size}",
        f"fitness: {solution.fitness:.6f}",
        f"generations: {solution.generations}",
    ]
    if args.timing:
        lines.append(f"elapsed_ms: {elapsed:.3f}")
    sys.stdout.write("\n".join(lines) + "\n")


def _cmd_check(args: argparse.Namespace) -> None:
    mtx = read_matrix(args.input)
    sys.stdout.write(format_report(compatibility_report(mtx), mtx))


def _cmd_filter(args: argparse.Namespace) -> None:
    mtx = read_matrix(args.input)
    result = largest_compatible_subset(mtx, args.algo, args.seed, _ga_params(args))
    sys.stdout.write(format_subset(result))


def _cmd_bench(args: argparse.Namespace) -> None:
    base = GaParams(
        population_multiplier=args.pop_mult,
        stall_generations=args.stall,
        max_generations=args.max_gen,
        mutation_mode=args.mutation_mode,
    )
    pairs = WIDE_GRID if args.grid == "wide" else DEFAULT_GRID
    cfg = ExperimentConfig(
        sizes=tuple(args.sizes or (DESK_SIZES if args.scale == "desk" else FULL_SIZES)),
        densities=tuple(args.densities or STUDY_DENSITIES),
        runs_per_cell=args.runs,
        solvers=tuple(dict.fromkeys(args.solvers)),
        ga_grid=tuple(replace(base, crossover_rate=x, mutation_rate=y) for x, y in pairs),
        base_seed=args.seed,
        exact_max_n=args.exact_max_n,
        budget=args.budget,
        workers=args.workers,
    )
    records = run_experiment(cfg)
    table = format_csv(records, timing=args.timing)
    summary = format_summaries(records, timing=args.timing)
    if args.summary is not None:
        _emit(table, args.out)
        _emit(summary, args.summary)
    elif args.out is not None:
        _emit(table, args.out)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(table + summary)


COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "check": _cmd_check,
    "filter": _cmd_filter,
    "bench": _cmd_bench,
}


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand; returns 0 on success, 1 on usage errors, 2 on input errors."""
    try:
        args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
        setup_logging(args.verbose, args.log_file)
        if getattr(args, "seed", "absent") is None:
            args.seed = default_seed()
        COMMANDS[args.command](args)
    except (UsageError, MissingSolverRows, IncompatibleMatrixError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except InputFormatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        where = f"{exc.filename}: " if getattr(exc, "filename", None) else ""
        sys.stderr.write(f"error: {where}{exc.strerror or exc}\n")
        return 2
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ContractViolation as exc:
        logger.error("internal contract violated: %s", exc)
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()

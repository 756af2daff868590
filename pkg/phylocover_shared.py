"""Exceptions, seeding, rounding and logging setup shared by every phylocover module."""

from __future__ import annotations

import math
import os
from fractions import Fraction
from logging import DEBUG, INFO, WARNING, FileHandler, Handler, StreamHandler, basicConfig
from pathlib import Path
from typing import Iterable

import numpy as np

SEED_ENV = "PHYLOCOVER_SEED"
LOG_LEVEL_ENV = "PHYLOCOVER_LOG_LEVEL"
LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
SEED_MASK = (1 << 64) - 1


class UsageError(ValueError):
    pass


class InputFormatError(ValueError):
    """Malformed graph or matrix text, located by path, line and column."""

    def __init__(self, message: str, *, line: int, column: int | None = None, path: str | Path | None = None) -> None:
        self.detail = message
        self.line = line
        self.column = column
        self.path = str(path) if path is not None else None
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        prefix = f"{self.path}: " if self.path else ""
        super().__init__(f"{prefix}{where}: {message}")

    def with_path(self, path: str | Path) -> InputFormatError:
        return InputFormatError(self.detail, line=self.line, column=self.column, path=path)


class IncompatibleMatrixError(ValueError):
    def __init__(self, first: int, second: int) -> None:
        self.pair = (first, second)
        super().__init__(f"characters {first} and {second} are incompatible")


class ContractViolation(RuntimeError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int) -> None:
        self.budget = budget
        super().__init__(f"exact search exceeded its budget of {budget} nodes")


class MissingSolverRows(ValueError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    """Return a PCG64 generator; the same seed gives the same stream on every platform."""
    return np.random.default_rng(int(seed) & SEED_MASK)


def derive_seed(base_seed: int, *parts: int) -> int:
    entropy = [int(base_seed) & SEED_MASK, *(int(part) & SEED_MASK for part in parts)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def round_half_up(value: float | Fraction) -> int:
    """Round on the exact decimal value, so 0.3 * 1225 gives 368."""
    if not isinstance(value, Fraction):
        value = Fraction(value).limit_denominator(10**9)
    return math.floor(value + Fraction(1, 2))


def density_key(density: float) -> int:
    return round_half_up(Fraction(density).limit_denominator(10**9) * 1000)


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw, 0)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


def setup_logging(verbosity: int = 0, log_file: str | Path | None = None) -> None:
    """Configure the root logger once per process; stdout stays reserved for results."""
    env_level = os.environ.get(LOG_LEVEL_ENV, "").upper()
    if verbosity >= 2:
        level = DEBUG
    elif verbosity == 1:
        level = INFO
    elif env_level in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        level = env_level
    else:
        level = WARNING
    handlers: list[Handler] = []
    if log_file is not None:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(FileHandler(path))
    else:
        handlers.append(StreamHandler())
    basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        handlers=handlers,
        force=True,
    )


def sorted_ids(values: Iterable[int]) -> list[int]:
    return sorted(int(v) for v in values)


def format_ids(values: Iterable[int]) -> str:
    return " ".join(str(v) for v in sorted_ids(values))


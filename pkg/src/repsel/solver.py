"""Backtracking synthesizer and dataset checker."""
from __future__ import annotations

from typing import Any, Iterable

import numpy as np

from .core import Constraint, Dataset, Example, ProgramSpace, SolverStats, as_literals

DEFAULT_BUDGET = 10**7


def synthesize(space: ProgramSpace, constraints: Iterable[Constraint | Example], budget: int = DEFAULT_BUDGET,
               stats: SolverStats | None = None) -> Any | None:
    """First program (in enumeration order) consistent with ``constraints``.

    Returns None when the constraints are unsatisfiable over the whole space.
    Raises BudgetExhausted once more than ``budget`` search nodes are visited.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    stats = stats if stats is not None else SolverStats()
    stats.calls += 1
    return space.search(as_literals(constraints), budget, stats)


class Canonical:
    """Smallest violated example in the domain's canonical order (dataset order by default)."""

    name = "canonical"

    def pick(self, space: ProgramSpace, violated: list[tuple[int, Example]], n_data: int) -> Example:
        key = space.canonical_order_key(violated[0][1].input)
        if key is None:
            return violated[0][1]
        return min(violated, key=lambda t: space.canonical_order_key(t[1].input))[1]


class RandomCE:
    """Uniformly random violated example from a seeded stream."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def pick(self, space, violated, n_data):
        return violated[int(self.rng.integers(len(violated)))][1]


class FixedArbitrary:
    """Earliest violated example in a fixed seeded permutation of the dataset."""

    name = "fixed_arbitrary"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rank: dict[int, np.ndarray] = {}

    def rank(self, size: int) -> np.ndarray:
        if size not in self._rank:
            perm = np.random.default_rng(self.seed).permutation(size)
            rank = np.empty(size, dtype=np.int64)
            rank[perm] = np.arange(size)
            self._rank[size] = rank
        return self._rank[size]

    def pick(self, space, violated, n_data):
        rank = self.rank(n_data)
        return min(violated, key=lambda t: rank[t[0]])[1]


def check(space: ProgramSpace, s: Any, data: Dataset, strategy=None) -> Example | None:
    """None if ``s`` fits every example of ``data``, else one violated example."""
    strategy = strategy or Canonical()
    violated = [(i, e) for i, e in enumerate(data) if space.evaluate(s, e.input) != e.output]
    if not violated:
        return None
    return strategy.pick(space, violated, len(data))


def make_strategy(name: str, seed: int = 0):
    if name == "canonical":
        return Canonical()
    if name == "random":
        return RandomCE(seed)
    if name == "fixed_arbitrary":
        return FixedArbitrary(seed)
    raise ValueError(f"unknown counterexample strategy {name!r}")

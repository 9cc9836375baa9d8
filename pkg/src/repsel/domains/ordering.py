"""Total orderings of ``n`` elements.

A program is a permutation listing the elements from first to last. The input
``(i, j)`` asks whether element ``i`` precedes element ``j``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..core import BudgetExhausted, Example, InvalidInput, InvalidParams, ProgramSpace, SolverStats


@dataclass(frozen=True)
class OrderingSpace(ProgramSpace):
    n: int = 10
    domain_id = "ordering"

    def size(self) -> int:
        return math.factorial(self.n)

    def enumeration_cost(self) -> int:
        # linear extensions are counted by a DP over subsets
        return (1 << self.n) * self.n

    def config(self) -> dict:
        return {"domain": self.domain_id, "n": self.n}

    def enumerate(self) -> Iterator[tuple[int, ...]]:
        return itertools.permutations(range(self.n))

    def validate(self, s) -> None:
        if len(s) != self.n or sorted(s) != list(range(self.n)):
            raise InvalidParams(f"{s!r} is not a permutation of range({self.n})")

    def validate_input(self, x) -> None:
        i, j = x
        if not (0 <= i < self.n and 0 <= j < self.n) or i == j:
            raise InvalidInput(f"{x!r} is not a pair of distinct elements < {self.n}")

    def evaluate(self, s, x) -> bool:
        i, j = x
        return s.index(i) < s.index(j)

    def all_inputs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]

    def sample_program(self, rng: np.random.Generator) -> tuple[int, ...]:
        return tuple(int(v) for v in rng.permutation(self.n))

    def predecessor_masks(self, literals: Sequence[Example]) -> list[int]:
        """pred[e] = bitmask of elements that must come before ``e``."""
        pred = [0] * self.n
        for lit in literals:
            i, j = lit.input
            if lit.output:
                pred[j] |= 1 << i
            else:
                pred[i] |= 1 << j
        return pred

    def count_literals(self, literals: Sequence[Example]) -> int:
        pred = self.predecessor_masks(literals)
        n = self.n
        ways = [0] * (1 << n)
        ways[0] = 1
        for mask in range(1 << n):
            w = ways[mask]
            if not w:
                continue
            for e in range(n):
                bit = 1 << e
                if not mask & bit and pred[e] & ~mask == 0:
                    ways[mask | bit] += w
        return ways[-1]

    def search(self, literals: Sequence[Example], budget: int, stats: SolverStats):
        pred = self.predecessor_masks(literals)
        n, full = self.n, (1 << self.n) - 1
        dead: set[int] = set()
        order: list[int] = []

        def extend(mask: int) -> bool:
            if mask == full:
                return True
            if mask in dead:
                return False
            for e in range(n):
                bit = 1 << e
                if mask & bit or pred[e] & ~mask:
                    continue
                stats.nodes += 1
                if stats.nodes > budget:
                    raise BudgetExhausted(budget)
                order.append(e)
                if extend(mask | bit):
                    return True
                order.pop()
            dead.add(mask)
            return False

        return tuple(order) if extend(0) else None


def nb_ordering(subset: Sequence[Example], x=None) -> list[Example]:
    """The ordering neighborhood: the whole subset (no factorization)."""
    return list(subset)


def relation_grid(n: int, subset: Sequence[Example]) -> np.ndarray:
    """n x n x 3 one-hot grid: channel 0 'i < j', 1 'i >= j', 2 'unknown'."""
    grid = np.zeros((n, n, 3))
    grid[:, :, 2] = 1.0
    for e in subset:
        i, j = e.input
        a, b = (i, j) if e.output else (j, i)
        grid[a, b] = (1.0, 0.0, 0.0)
        grid[b, a] = (0.0, 1.0, 0.0)
    return grid

"""Checks for representativeness, prune/rem counts, and the greedy-selection claims."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core import (DEFAULT_COUNT_CAP, BudgetExhausted, Constraint, Dataset, ProgramSpace, ReprselError,
                   count)
from .solver import DEFAULT_BUDGET, synthesize


class TooLarge(ReprselError):
    pass


class DomainError(ReprselError, ValueError):
    pass


@dataclass
class ClaimReport:
    claim_id: str
    trials: int = 0
    failures: int = 0
    witnesses: list[Any] = field(default_factory=list)

    def fail(self, witness) -> None:
        self.failures += 1
        self.witnesses.append(witness)

    def to_json(self) -> dict:
        return {"claim_id": self.claim_id, "trials": self.trials, "failures": self.failures,
                "witnesses": self.witnesses}


def is_representative(space: ProgramSpace, data: Dataset, subset: Dataset,
                      budget: int = DEFAULT_BUDGET) -> bool | None:
    """True iff every program consistent with ``subset`` is consistent with ``data``.

    Probes each left-out example d with synthesize(subset + not d). Returns
    None (unknown) if a probe exhausts the solver budget and no probe found a
    witness.
    """
    base = [Constraint(e) for e in subset]
    unknown = False
    for d in data.difference(subset):
        try:
            if synthesize(space, base + [Constraint(d, negated=True)], budget) is not None:
                return False
        except BudgetExhausted:
            unknown = True
    return None if unknown else True


def prune(space: ProgramSpace, data, cap: int = DEFAULT_COUNT_CAP) -> int:
    """Number of programs invalidated by ``data``."""
    return count(space, [], cap) - count(space, list(data), cap)


def rem(space: ProgramSpace, data, subset, cap: int = DEFAULT_COUNT_CAP) -> int:
    return prune(space, data, cap) - prune(space, subset, cap)


def greedy_bound(prune_d: float, k_opt: int) -> float:
    """log(prune(D)) / (log k_opt - log(k_opt - 1)), the greedy subset-size bound."""
    if k_opt < 2:
        raise DomainError("the bound needs k_opt >= 2")
    if prune_d < 1:
        raise DomainError("the bound needs prune(D) >= 1")
    return math.log(prune_d) / (math.log(k_opt) - math.log(k_opt - 1))


def greedy_step_bound(prune_d: float, k_opt: int) -> int:
    """Smallest t with prune(D) * (1 - 1/k_opt)**t < 1, i.e. floor(greedy_bound) + 1.

    rem after t greedy steps is at most prune(D) * (1 - 1/k_opt)**t and is an
    integer, so it is 0 once that product drops below 1. This integral form
    always holds; the real-valued greedy_bound can be exceeded by one step on
    small instances (e.g. three relations on three elements added transitive
    edge first: greedy 3, k_opt 2, bound log2(5) = 2.32).
    """
    return math.floor(greedy_bound(prune_d, k_opt)) + 1


def minimal_subset(space: ProgramSpace, data: Dataset, max_size: int = 15,
                   cap: int = DEFAULT_COUNT_CAP) -> Dataset:
    """A minimum-cardinality representative subset, by increasing-size search.

    Subsets of equal size are tried in lexicographic order of dataset indices.
    A subset of ``data`` is representative exactly when it leaves the same
    number of programs as ``data`` does.
    """
    if len(data) > max_size:
        raise TooLarge(f"exhaustive search over {len(data)} examples (limit {max_size})")
    target = count(space, list(data), cap)
    for k in range(len(data) + 1):
        for combo in itertools.combinations(range(len(data)), k):
            chosen = [data[i] for i in combo]
            if count(space, chosen, cap) == target:
                return data.with_examples(chosen)
    raise AssertionError("the full dataset is always representative")


def check_submodular_monotone(space: ProgramSpace, data: Dataset, trials: int | None = None, seed: int = 0,
                              cap: int = DEFAULT_COUNT_CAP) -> tuple[ClaimReport, ClaimReport]:
    """Test monotonicity and submodularity of prune over chains A <= B <= data and examples e.

    Exhaustive over all chains when ``trials`` is None, otherwise samples ``trials`` chains.
    Returns (monotonicity report, submodularity report).
    """
    mono, sub = ClaimReport("lemma21_mono"), ClaimReport("lemma21_submod")
    n = len(data)
    cache: dict[int, int] = {}

    def pr(mask: int) -> int:
        if mask not in cache:
            cache[mask] = prune(space, [data[i] for i in range(n) if mask >> i & 1], cap)
        return cache[mask]

    def chains():
        if trials is None:
            for b_mask in range(1 << n):
                a = b_mask
                while True:
                    yield a, b_mask
                    if a == 0:
                        break
                    a = (a - 1) & b_mask
        else:
            rng = np.random.default_rng(seed)
            for _ in range(trials):
                b_mask = int(rng.integers(1 << n))
                a = b_mask & int(rng.integers(1 << n))
                yield a, b_mask

    for a, b in chains():
        mono.trials += 1
        if pr(a) > pr(b):
            mono.fail({"A": a, "B": b})
        for e in range(n):
            bit = 1 << e
            sub.trials += 1
            if pr(a | bit) - pr(a) < pr(b | bit) - pr(b):
                sub.fail({"A": a, "B": b, "e": e})
    return mono, sub

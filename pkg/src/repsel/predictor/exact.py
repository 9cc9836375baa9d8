from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..core import DEFAULT_COUNT_CAP, Example, ProgramSpace, ReprselError, count


class UnsatisfiableSubset(ReprselError):
    pass


class ExactPosterior:
    """Pr((x, y) | D') under a uniform prior on programs, by model counting.

    Equals c(D' + (x, y)) / c(D'), returned as an exact Fraction.
    """

    def __init__(self, space: ProgramSpace, cap: int = DEFAULT_COUNT_CAP):
        self.space = space
        self.cap = cap

    def _base(self, subset) -> int:
        base = count(self.space, list(subset), self.cap)
        if base == 0:
            raise UnsatisfiableSubset("no program is consistent with the subset")
        return base

    def predict(self, subset: Sequence[Example], x, y) -> Fraction:
        base = self._base(subset)
        return Fraction(count(self.space, [*subset, Example(x, y)], self.cap), base)

    def probabilities(self, subset: Sequence[Example], candidates: Sequence[Example]) -> list[Fraction]:
        subset = list(subset)
        base = self._base(subset)
        return [Fraction(count(self.space, subset + [e], self.cap), base) for e in candidates]


def exact_predict(space: ProgramSpace, subset: Sequence[Example], x, y) -> Fraction:
    return ExactPosterior(space).predict(subset, x, y)

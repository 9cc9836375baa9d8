"""Counterexample-guided synthesis, optionally seeded with a selected subset."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .core import Dataset, ProgramSpace, ReprselError, SolverStats
from .selection import SelectionResult, anticipation_select
from .solver import DEFAULT_BUDGET, Canonical, check, synthesize


class Unsat(ReprselError):
    """The dataset admits no program in the space."""


class CegisDiverged(ReprselError, RuntimeError):
    """CEGIS ran past |data| + 1 iterations; indicates a solver/checker bug."""


@dataclass
class SynthesisOutcome:
    program: Any
    iterations: int
    counterexamples_added: Dataset
    initial_subset: Dataset
    solver_nodes: int
    selection: SelectionResult | None = field(default=None, repr=False)

    def to_json(self, space: ProgramSpace) -> dict:
        return {
            "program": space.program_to_json(self.program),
            "iterations": self.iterations,
            "solver_nodes": self.solver_nodes,
            "initial_subset": [{"input": space.input_to_json(e.input), "output": e.output}
                               for e in self.initial_subset],
            "counterexamples_added": [{"input": space.input_to_json(e.input), "output": e.output}
                                      for e in self.counterexamples_added],
        }


def run_cegis(space: ProgramSpace, data: Dataset, initial: Dataset | None = None, strategy=None,
              budget: int = DEFAULT_BUDGET) -> SynthesisOutcome:
    """Alternate synthesize(D') and check(s, D) until the checker finds nothing.

    ``budget`` is the node limit per synthesize call; BudgetExhausted propagates.
    """
    initial = initial if initial is not None else data.with_examples(())
    if not initial.subset_of(data):
        raise ValueError("initial subset must be drawn from the dataset")
    strategy = strategy or Canonical()
    stats = SolverStats()
    constraints = list(initial)
    added = []
    for iteration in range(1, len(data) + 2):
        s = synthesize(space, constraints, budget, stats)
        if s is None:
            raise Unsat(f"no {space.domain_id} program fits the dataset")
        ce = check(space, s, data, strategy)
        if ce is None:
            return SynthesisOutcome(s, iteration, data.with_examples(added), initial, stats.nodes)
        constraints.append(ce)
        added.append(ce)
    raise CegisDiverged(f"no convergence after {len(data) + 1} iterations")


def run_ours(space: ProgramSpace, data: Dataset, predictor, tau: float = 0.95, strategy=None,
             budget: int = DEFAULT_BUDGET, max_steps: int | None = None) -> SynthesisOutcome:
    """Select a subset with the anticipation predictor, then let CEGIS repair it."""
    selection = anticipation_select(predictor, data, tau, max_steps)
    outcome = run_cegis(space, data, selection.subset, strategy, budget)
    outcome.selection = selection
    return outcome

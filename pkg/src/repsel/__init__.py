"""Representative-example selection for enumerative program synthesis."""
from __future__ import annotations

from .cegis import CegisDiverged, SynthesisOutcome, Unsat, run_cegis, run_ours
from .core import (BudgetExhausted, Constraint, Dataset, DuplicateInput, Example, InvalidInput, InvalidParams,
                   ProgramSpace, ReprselError, SpaceTooLarge, consistent, count, count_by_enumeration, evaluate)
from .selection import (CyclicData, SelectionResult, anticipation_select, greedy_count_select, h1_dfa_select,
                        h1_draw_select, hasse_select, random_select)
from .solver import check, synthesize
from .verify import ClaimReport, is_representative, minimal_subset, prune, rem

__version__ = "0.1.0"

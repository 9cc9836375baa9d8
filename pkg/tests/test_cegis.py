from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given

from repsel.cegis import Unsat, run_cegis, run_ours
from repsel.core import Dataset, Example
from repsel.domains import DfaSpace, OrderingSpace
from repsel.harness import gen_dataset
from repsel.predictor import ExactPosterior, NeuralPredictor, TrainConfig, init_model
from repsel.solver import FixedArbitrary, RandomCE, check

from conftest import ordering_tasks, rels


class TestRunCegis:
    def test_unique_order(self):
        out = run_cegis(OrderingSpace(3), rels("a<b", "a<c", "b<c"))
        assert out.program == (0, 1, 2)
        assert out.iterations == len(out.counterexamples_added) + 1

    def test_initial_is_data(self, diamond_d):
        out = run_cegis(OrderingSpace(4), diamond_d, initial=diamond_d)
        assert out.iterations == 1 and len(out.counterexamples_added) == 0

    def test_contradiction(self):
        d = Dataset((Example((0, 1), True), Example((1, 0), True)), "ordering")
        with pytest.raises(Unsat):
            run_cegis(OrderingSpace(2), d)

    def test_initial_must_be_subset(self, diamond_d):
        with pytest.raises(ValueError):
            run_cegis(OrderingSpace(4), diamond_d, initial=rels("d<a"))

    @pytest.mark.parametrize("strategy", [None, RandomCE(3), FixedArbitrary(3)])
    def test_strategies_all_correct(self, strategy):
        space = DfaSpace(3)
        for seed in range(5):
            data, _ = gen_dataset(space, 40, seed, min_len=1, max_len=6)
            out = run_cegis(space, data, strategy=strategy)
            assert check(space, out.program, data) is None
            added = set(out.counterexamples_added)
            assert not added & set(out.initial_subset)
            assert len(added) == out.iterations - 1

    def test_outcome_json(self, diamond_d):
        space = OrderingSpace(4)
        js = run_cegis(space, diamond_d).to_json(space)
        assert set(js) == {"program", "iterations", "solver_nodes", "initial_subset", "counterexamples_added"}


class TestRunOurs:
    @given(ordering_tasks(min_n=2, max_n=5, max_size=12))
    def test_exact_tau_one_needs_no_counterexamples(self, task):
        space, data, _ = task
        out = run_ours(space, data, ExactPosterior(space), tau=1.0)
        assert len(out.counterexamples_added) == 0 and out.iterations == 1

    def test_untrained_still_correct(self):
        space = DfaSpace(3)
        model = init_model(space, TrainConfig(min_len=1, max_len=6))
        pred = NeuralPredictor.for_space(model, space)
        data, _ = gen_dataset(space, 40, 0, min_len=1, max_len=6)
        out = run_ours(space, data, pred, tau=0.95)
        assert check(space, out.program, data) is None

    def test_tau_zero_is_plain_cegis(self, diamond_d):
        space = OrderingSpace(4)
        ours = run_ours(space, diamond_d, ExactPosterior(space), tau=0.0)
        plain = run_cegis(space, diamond_d)
        assert len(ours.initial_subset) == 0
        assert (ours.program, ours.iterations, ours.counterexamples_added) == (
            plain.program, plain.iterations, plain.counterexamples_added)

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repsel.core import BudgetExhausted, Dataset, Example, count
from repsel.domains import DfaSpace, OrderingSpace
from repsel.selection import greedy_count_select, hasse_select
from repsel.verify import (DomainError, TooLarge, check_submodular_monotone, greedy_bound, greedy_step_bound,
                           is_representative,
                           minimal_subset, prune, rem)

from conftest import ordering_tasks, rels


class TestIsRepresentative:
    def test_hasse_subset(self, diamond_d):
        assert is_representative(OrderingSpace(4), diamond_d, rels("a<b", "a<c", "b<d", "c<d")) is True

    def test_missing_relation(self, diamond_d):
        assert is_representative(OrderingSpace(4), diamond_d, rels("a<b", "a<c", "b<d")) is False

    def test_whole_data(self, diamond_d):
        assert is_representative(OrderingSpace(4), diamond_d, diamond_d) is True

    def test_unknown_on_budget(self):
        space = DfaSpace(3)
        data = Dataset((Example("0", True), Example("00", False), Example("000", True), Example("1", False)), "dfa")
        sub = data.with_examples(list(data)[1:])
        assert is_representative(space, data, sub, budget=1) is None
        assert is_representative(space, data, sub) is False

    @given(ordering_tasks(max_n=5, max_size=10), st.data())
    def test_agrees_with_brute_force(self, task, draw):
        space, data, _ = task
        keep = draw.draw(st.lists(st.booleans(), min_size=len(data), max_size=len(data)))
        sub = data.with_examples(e for e, k in zip(data, keep) if k)
        brute = all(all(space.evaluate(s, e.input) == e.output for e in data)
                    for s in space.enumerate() if all(space.evaluate(s, e.input) == e.output for e in sub))
        assert is_representative(space, data, sub) is brute


class TestPruneRem:
    def test_prune(self):
        assert prune(OrderingSpace(3), rels("a<b")) == 3

    def test_rem(self, diamond_d):
        space = OrderingSpace(4)
        assert rem(space, diamond_d, []) == prune(space, diamond_d)
        assert rem(space, diamond_d, diamond_d) == 0


class TestGreedyBound:
    def test_quoted_value(self):
        assert 269 < greedy_bound(1.0e6, 20) < 270

    @pytest.mark.parametrize("k", [2, 3, 50])
    def test_log_one(self, k):
        assert greedy_bound(1, k) == 0

    def test_k_two(self):
        assert greedy_bound(1.0e6, 2) == pytest.approx(math.log(1e6) / math.log(2))
        assert round(greedy_bound(1.0e6, 2), 2) == 19.93

    def test_three_element_chain_exceeds_real_bound(self):
        space = OrderingSpace(3)
        d = rels("a<c", "a<b", "b<c")
        g = len(greedy_count_select(space, d).subset)
        k_opt, p = len(minimal_subset(space, d)), prune(space, d)
        assert (g, k_opt, p) == (3, 2, 5)
        assert g > greedy_bound(p, k_opt)
        assert g <= greedy_step_bound(p, k_opt) == 3

    @given(ordering_tasks(max_n=5, max_size=9))
    def test_integral_bound_holds(self, task):
        space, data, _ = task
        k_opt, p = len(minimal_subset(space, data)), prune(space, data)
        if k_opt >= 2:
            assert len(greedy_count_select(space, data).subset) <= greedy_step_bound(p, k_opt)

    @pytest.mark.parametrize("args", [(10, 1), (10, 0), (0.5, 3)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            greedy_bound(*args)


class TestSubmodular:
    def test_exhaustive(self, diamond_d):
        d = diamond_d.with_examples(list(diamond_d)[:5])
        mono, sub = check_submodular_monotone(OrderingSpace(4), d)
        assert mono.failures == sub.failures == 0
        assert mono.trials == 3**5  # chains A <= B <= D
        assert sub.trials == 5 * 3**5

    def test_sampled(self, diamond_d):
        mono, sub = check_submodular_monotone(OrderingSpace(4), diamond_d, trials=40, seed=2)
        assert mono.trials == 40 and sub.failures == 0

    def test_marginals(self, diamond_d):
        space = OrderingSpace(4)
        a = list(diamond_d)[:2]
        e = a[0]
        assert prune(space, a + [e]) - prune(space, a) == 0
        b = list(diamond_d)[:4]
        assert (prune(space, a + [diamond_d[4]]) - prune(space, a)) >= (prune(space, b + [diamond_d[4]]) - prune(space, b))


class TestMinimalSubset:
    def test_diamond_dataset(self, diamond_d):
        m = minimal_subset(OrderingSpace(4), diamond_d)
        assert len(m) == 4 and m == hasse_select(diamond_d)

    def test_empty(self):
        assert len(minimal_subset(OrderingSpace(3), Dataset((), "ordering"))) == 0

    def test_single(self):
        assert minimal_subset(OrderingSpace(3), rels("b<c")) == rels("b<c")

    def test_too_large(self):
        d = Dataset(tuple(Example(f"{i:05b}", True) for i in range(16)), "dfa")
        with pytest.raises(TooLarge):
            minimal_subset(DfaSpace(2), d)

    @given(ordering_tasks(max_n=5, max_size=9))
    def test_minimal_is_representative(self, task):
        space, data, _ = task
        m = minimal_subset(space, data)
        assert is_representative(space, data, m) is True
        assert count(space, list(m)) == count(space, list(data))

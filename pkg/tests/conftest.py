from __future__ import annotations

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from repsel.core import Constraint, Dataset, Example
from repsel.domains import OrderingSpace

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

LETTERS = "abcdefghij"


def rel(text: str) -> Example:
    """'a<b' -> ((0, 1), True); 'd>a' -> ((3, 0), False)."""
    i, op, j = LETTERS.index(text[0]), text[1], LETTERS.index(text[2])
    return Example((i, j), op == "<")


def rels(*texts: str) -> Dataset:
    return Dataset(tuple(rel(t) for t in texts), "ordering")


def neg(text: str) -> Constraint:
    return Constraint(rel(text), negated=True)


@pytest.fixture
def diamond_d() -> Dataset:
    return rels("a<b", "a<c", "b<d", "c<d", "d>a", "c>a")


@st.composite
def ordering_tasks(draw, min_n: int = 2, max_n: int = 5, max_size: int | None = None):
    """(space, data, hidden permutation) with data labelled by a hidden order."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    k = draw(st.integers(0, len(pairs) if max_size is None else min(max_size, len(pairs))))
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=k, max_size=k, unique=True))
    space = OrderingSpace(n)
    data = Dataset(tuple(Example(p, space.evaluate(tuple(perm), p)) for p in chosen), "ordering")
    return space, data, tuple(perm)


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


# -- trained models shared by predictor and acceptance tests ------------------------------------

ORDERING_TRAIN = dict(samples=200_000, lr=1e-4, seed=7)
DRAW_TRAIN = dict(samples=200_000, lr=1e-3, seed=3)
DFA_TRAIN = dict(samples=20_000, lr=1e-3, seed=5, min_len=1, max_len=8)


@pytest.fixture(scope="session")
def ordering7_model():
    from repsel.predictor import TrainConfig, train_committee
    return train_committee(OrderingSpace(7), TrainConfig(**ORDERING_TRAIN))


@pytest.fixture(scope="session")
def draw_model():
    from repsel.domains import DrawingSpace
    from repsel.predictor import TrainConfig, train_committee
    return train_committee(DrawingSpace(), TrainConfig(**DRAW_TRAIN))


@pytest.fixture(scope="session")
def dfa4_model():
    from repsel.domains import DfaSpace
    from repsel.predictor import TrainConfig, train_committee
    return train_committee(DfaSpace(4), TrainConfig(**DFA_TRAIN))


# -- acceptance summary ------------------------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

"""DFAs over the binary alphabet with a single accept state.

Parameter vector: ``(t[0,'0'], t[0,'1'], t[1,'0'], ..., t[q-1,'1'], accept)``
with the start state fixed at 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..core import BudgetExhausted, Example, InvalidInput, InvalidParams, ProgramSpace, SolverStats

ALPHABET = "01"


@dataclass(frozen=True)
class DfaSpace(ProgramSpace):
    num_states: int = 6
    domain_id = "dfa"

    @property
    def num_transitions(self) -> int:
        return self.num_states * len(ALPHABET)

    def size(self) -> int:
        return self.num_states ** self.num_transitions * self.num_states

    def config(self) -> dict:
        return {"domain": self.domain_id, "num_states": self.num_states}

    def enumerate(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.num_states), repeat=self.num_transitions + 1)

    def validate(self, s) -> None:
        if len(s) != self.num_transitions + 1 or any(not 0 <= v < self.num_states for v in s):
            raise InvalidParams(f"{s!r} is not a {self.num_states}-state DFA parameter vector")

    def validate_input(self, x) -> None:
        if not isinstance(x, str) or any(ch not in ALPHABET for ch in x):
            raise InvalidInput(f"{x!r} is not a binary string")

    def evaluate(self, s, x) -> bool:
        state = 0
        for ch in x:
            state = s[2 * state + (ch == "1")]
        return state == s[-1]

    def sample_program(self, rng: np.random.Generator) -> tuple[int, ...]:
        return tuple(int(v) for v in rng.integers(0, self.num_states, self.num_transitions + 1))

    def count_literals(self, literals: Sequence[Example]) -> int:
        return _DfaSearch(self, literals).count()

    def search(self, literals: Sequence[Example], budget: int, stats: SolverStats):
        return _DfaSearch(self, literals, budget, stats).first()


class _DfaSearch:
    """Backtracking over transitions in declaration order.

    Every literal string is simulated as far as the assigned transitions allow
    and parked on the transition that blocks it. Assigning a transition wakes
    only the strings parked on it. Once no string is pending, the remaining
    transitions are free.
    """

    def __init__(self, space: DfaSpace, literals: Sequence[Example], budget: int | None = None,
                 stats: SolverStats | None = None):
        self.q = space.num_states
        self.nt = space.num_transitions
        self.strings = [tuple(ch == "1" for ch in lit.input) for lit in literals]
        self.labels = [bool(lit.output) for lit in literals]
        self.budget = budget
        self.stats = stats if stats is not None else SolverStats()
        self.trans = [-1] * self.nt
        self.pos_cnt = [0] * self.q
        self.neg_cnt = [0] * self.q
        self.blocked_pos = [0] * len(self.strings)
        self.waiting: dict[int, list[int]] = {}
        self.pending = 0
        self.conflict = False
        for li in range(len(self.strings)):
            self._place(li, 0, 0)

    def _walk(self, li: int, state: int, p: int):
        s, trans = self.strings[li], self.trans
        while p < len(s):
            key = 2 * state + s[p]
            nxt = trans[key]
            if nxt < 0:
                return state, p, key
            state, p = nxt, p + 1
        return state, p, None

    def _place(self, li: int, state: int, p: int):
        """Advance literal ``li``; returns ('wait', key) or ('end', state)."""
        state, p, key = self._walk(li, state, p)
        if key is None:
            (self.pos_cnt if self.labels[li] else self.neg_cnt)[state] += 1
            return "end", state
        self.blocked_pos[li] = p
        self.waiting.setdefault(key, []).append(li)
        self.pending += 1
        return "wait", key

    def _accepts(self) -> list[int]:
        posq = [q for q in range(self.q) if self.pos_cnt[q]]
        if len(posq) > 1:
            return []
        cands = posq if posq else range(self.q)
        return [q for q in cands if not self.neg_cnt[q]]

    def _explore(self, k: int, first: bool):
        accepts = self._accepts()
        if not accepts:
            return 0
        if self.pending == 0:
            if first:
                tail = [0] * (self.nt - k)
                return tuple(self.trans[:k]) + tuple(tail) + (accepts[0],)
            return self.q ** (self.nt - k) * len(accepts)
        waiters = self.waiting.pop(k, [])
        starts = [self.blocked_pos[li] for li in waiters]
        self.pending -= len(waiters)
        total = 0
        for v in range(self.q):
            self.stats.nodes += 1
            if self.budget is not None and self.stats.nodes > self.budget:
                raise BudgetExhausted(self.budget)
            self.trans[k] = v
            log = [self._place(li, v, p + 1) for li, p in zip(waiters, starts)]
            result = self._explore(k + 1, first)
            for (li, (kind, where)) in zip(reversed(waiters), reversed(log)):
                if kind == "end":
                    (self.pos_cnt if self.labels[li] else self.neg_cnt)[where] -= 1
                else:
                    self.waiting[where].pop()
                    self.pending -= 1
            if first:
                if result:
                    self.trans[k] = -1
                    self.waiting[k] = waiters
                    self.pending += len(waiters)
                    return result
            else:
                total += result
        self.trans[k] = -1
        self.waiting[k] = waiters
        self.pending += len(waiters)
        for li, p in zip(waiters, starts):
            self.blocked_pos[li] = p
        return None if first else total

    def count(self) -> int:
        return self._explore(0, first=False)

    def first(self):
        return self._explore(0, first=True) or None


def random_strings(rng: np.random.Generator, size: int, min_len: int = 5, max_len: int = 10) -> list[str]:
    """``size`` distinct binary strings, lengths uniform in [min_len, max_len]."""
    available = sum(2**L for L in range(min_len, max_len + 1))
    if size > available:
        raise ValueError(f"only {available} distinct strings of length {min_len}..{max_len}")
    seen: dict[str, None] = {}
    while len(seen) < size:
        length = int(rng.integers(min_len, max_len + 1))
        bits = rng.integers(0, 2, length)
        seen.setdefault("".join("1" if b else "0" for b in bits), None)
    return list(seen)


def _lcp(a: str, b: str) -> int:
    n = 0
    for ca, cb in zip(a, b):
        if ca != cb:
            break
        n += 1
    return n


def prefix_suffix_score(a: str, b: str) -> int:
    return _lcp(a, b) + _lcp(a[::-1], b[::-1])


def nb_dfa(subset: Sequence[Example], x: str, k: int = 10) -> list[Example]:
    """Top-k examples of ``subset`` by common prefix + common suffix length with ``x``."""
    scored = sorted(enumerate(subset), key=lambda t: (-prefix_suffix_score(t[1].input, x), t[0]))
    return [e for _, e in scored[:k]]

"""Example-subset selection: count-oracle greedy, anticipation greedy, and baselines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .core import DEFAULT_COUNT_CAP, Dataset, Example, ProgramSpace, ReprselError, count


class CyclicData(ReprselError, ValueError):
    pass


@dataclass
class SelectionResult:
    subset: Dataset
    trace: list[tuple[Example, Any]] = field(default_factory=list)
    terminated_by: str = "fixpoint"  # fixpoint | threshold | exhausted

    def trace_json(self, space: ProgramSpace) -> dict:
        return {
            "terminated_by": self.terminated_by,
            "trace": [{"input": space.input_to_json(e.input), "output": e.output,
                       "score": None if s is None else (s if isinstance(s, int) else float(s))}
                      for e, s in self.trace],
        }


def greedy_count_select(space: ProgramSpace, data: Dataset, cap: int = DEFAULT_COUNT_CAP) -> SelectionResult:
    """Repeatedly add the example minimizing c(D' + e); stop once the minimizer prunes nothing.

    The final, non-pruning minimizer is not added. Ties go to the earlier example.
    """
    chosen: list[Example] = []
    trace = []
    current = count(space, [], cap)
    remaining = list(data)
    while remaining:
        counts = [count(space, chosen + [e], cap) for e in remaining]
        best = int(np.argmin(counts))
        if counts[best] == current:
            break
        e = remaining.pop(best)
        chosen.append(e)
        trace.append((e, counts[best]))
        current = counts[best]
    return SelectionResult(data.with_examples(chosen), trace, "fixpoint")


def anticipation_select(predictor, data: Dataset, tau: float = 0.95, max_steps: int | None = None) -> SelectionResult:
    """Greedily add the example whose true output the predictor finds least probable.

    Stops when every remaining example has predicted probability >= ``tau``
    ("threshold"), or after ``max_steps`` additions / running out of examples
    ("exhausted").
    """
    if not 0 <= tau <= 1:
        raise ValueError("tau must lie in [0, 1]")
    max_steps = len(data) if max_steps is None else max_steps
    chosen: list[Example] = []
    trace = []
    remaining = list(data)
    while True:
        if not remaining or len(chosen) >= max_steps:
            reason = "exhausted"
            break
        probs = predictor.probabilities(chosen, remaining)
        best = min(range(len(remaining)), key=lambda i: probs[i])
        if probs[best] >= tau:
            reason = "threshold"
            break
        e = remaining.pop(best)
        chosen.append(e)
        trace.append((e, probs[best]))
    return SelectionResult(data.with_examples(chosen), trace, reason)


def random_select(data: Dataset, fraction: float, seed: int = 0) -> SelectionResult:
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    size = int(math.floor(fraction * len(data) + 0.5))
    idx = np.sort(np.random.default_rng(seed).choice(len(data), size=size, replace=False))
    chosen = [data[int(i)] for i in idx]
    return SelectionResult(data.with_examples(chosen), [(e, None) for e in chosen], "exhausted")


def hasse_select(data: Dataset) -> Dataset:
    """Transitive reduction of the precedence relations in an ordering dataset.

    Each kept relation is reported in the form of its first occurrence in ``data``.
    """
    first: dict[tuple[int, int], Example] = {}
    for e in data:
        i, j = e.input
        edge = (i, j) if e.output else (j, i)
        first.setdefault(edge, e)
    nodes = sorted({v for edge in first for v in edge})
    succ = {v: 0 for v in nodes}
    for a, b in first:
        succ[a] |= 1 << b
    reach = dict(succ)
    changed = True
    while changed:
        changed = False
        for v in nodes:
            r = reach[v]
            acc = r
            w = r
            while w:
                low = w & -w
                acc |= reach[low.bit_length() - 1]
                w ^= low
            if acc != r:
                reach[v] = acc
                changed = True
    for v in nodes:
        if reach[v] >> v & 1:
            raise CyclicData(f"relations form a cycle through element {v}")
    kept = set()
    for a, b in first:
        others = succ[a] & ~(1 << b)
        implied = False
        w = others
        while w:
            low = w & -w
            if reach[low.bit_length() - 1] >> b & 1:
                implied = True
                break
            w ^= low
        if not implied:
            kept.add((a, b))
    out = [e for edge, e in first.items() if edge in kept]
    order = {id(e): data.index_of(e) for e in out}
    return data.with_examples(sorted(out, key=lambda e: order[id(e)]))


class _TrieNode:
    __slots__ = ("children", "here", "acc", "rej")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.here: list[int] = []
        self.acc = 0
        self.rej = 0


def h1_dfa_select(data: Dataset, seed: int = 0) -> Dataset:
    """Suffix-trie heuristic: keep one random example per label-pure subtree of the reversed-string trie."""
    rng = np.random.default_rng(seed)
    root = _TrieNode()
    for idx, e in enumerate(data):
        node = root
        path = [node]
        for ch in reversed(e.input):
            node = node.children.setdefault(ch, _TrieNode())
            path.append(node)
        node.here.append(idx)
        for n in path:
            if e.output:
                n.acc += 1
            else:
                n.rej += 1

    def members(node):
        out = list(node.here)
        for ch in sorted(node.children):
            out.extend(members(node.children[ch]))
        return sorted(out)

    picked: list[int] = []

    def walk(node):
        if node.acc + node.rej == 0:
            return
        if node.acc == 0 or node.rej == 0:
            pool = members(node)
            picked.append(pool[int(rng.integers(len(pool)))])
            return
        picked.extend(node.here)
        for ch in sorted(node.children):
            walk(node.children[ch])

    walk(root)
    return data.with_examples(data[i] for i in sorted(picked))


def h1_draw_select(target: np.ndarray, radius: int = 2) -> Dataset:
    """Pixels with a differently coloured pixel inside their (2*radius+1)^2 window."""
    target = np.asarray(target, dtype=bool)
    H, W = target.shape
    differs = np.zeros_like(target)
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            r0, r1 = max(0, -dr), min(H, H - dr)
            c0, c1 = max(0, -dc), min(W, W - dc)
            a = target[r0:r1, c0:c1]
            b = target[r0 + dr:r1 + dr, c0 + dc:c1 + dc]
            differs[r0:r1, c0:c1] |= a != b
    rows, cols = np.nonzero(differs)
    return Dataset(tuple(Example((int(r), int(c)), bool(target[r, c])) for r, c in zip(rows, cols)), "drawing")


def select_by_name(method: str, space: ProgramSpace, data: Dataset, *, fraction: float = 0.35,
                   tau: float = 0.95, seed: int = 0, predictor=None, target: np.ndarray | None = None) -> SelectionResult:
    """Dispatch used by the CLI and the benchmark harness."""
    if method == "count":
        return greedy_count_select(space, data)
    if method in ("nn", "exact-nn"):
        if predictor is None:
            raise ValueError(f"method {method!r} needs a predictor")
        return anticipation_select(predictor, data, tau)
    if method == "random":
        return random_select(data, fraction, seed)
    if method == "hasse":
        sub = hasse_select(data)
        return SelectionResult(sub, [(e, None) for e in sub], "fixpoint")
    if method == "h1":
        if space.domain_id == "ordering":
            sub = hasse_select(data)
        elif space.domain_id == "dfa":
            sub = h1_dfa_select(data, seed)
        else:
            if target is None:
                target = np.zeros((space.height, space.width), dtype=bool)
                for e in data:
                    target[e.input] = e.output
            picked = {e.input for e in h1_draw_select(target)}
            sub = data.with_examples(e for e in data if e.input in picked)
        return SelectionResult(sub, [(e, None) for e in sub], "fixpoint")
    raise ValueError(f"unknown selection method {method!r}")

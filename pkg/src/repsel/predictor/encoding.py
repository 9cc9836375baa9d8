"""Per-domain input encodings and training-sample generators.

Each encoder turns a selected subset plus query inputs into ``(context, query)``
arrays, and can draw random training batches following the data-generation
recipe: sample a program, sample inputs, label them, take a random subset D'
and a held-out query (x, y), then encode the neighbors of x in D'.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..core import Example
from ..domains.dfa import DfaSpace, nb_dfa, random_strings
from ..domains.drawing import BLACK, UNSAMPLED, WHITE, DrawingSpace, _program_pixels
from ..domains.ordering import OrderingSpace


class OrderingEncoder:
    """Whole-subset relation grid (n*n*3) with two one-hot query vectors."""

    arch = "ordering_fc"
    neighborhood = "ordering_full"
    encoder_sizes: list[int] = []
    head_sizes = [256, 256]

    def __init__(self, n: int):
        self.n = n
        self.context_dim = n * n * 3
        self.query_dim = 2 * n

    def grid(self, subset: Sequence[Example]) -> np.ndarray:
        n = self.n
        known = np.zeros((n, n), dtype=bool)
        before = np.zeros((n, n), dtype=bool)
        for e in subset:
            i, j = e.input
            a, b = (i, j) if e.output else (j, i)
            known[a, b] = known[b, a] = True
            before[a, b] = True
        return _grid_channels(known, before)

    def encode(self, subset: Sequence[Example], xs: Sequence) -> tuple[np.ndarray, np.ndarray]:
        ctx = np.repeat(self.grid(subset).reshape(1, -1), len(xs), axis=0)
        q = np.zeros((len(xs), 2 * self.n))
        for r, (i, j) in enumerate(xs):
            q[r, i] = 1.0
            q[r, self.n + j] = 1.0
        return ctx, q

    def sample_batch(self, space: OrderingSpace, rng: np.random.Generator, size: int):
        n = self.n
        pos = np.argsort(rng.random((size, n)), axis=1)  # pos[b, e] = rank of element e
        before = pos[:, :, None] < pos[:, None, :]
        off_diag = ~np.eye(n, dtype=bool)
        in_data = (rng.random((size, n, n)) < rng.uniform(0.3, 1.0, (size, 1, 1))) & off_diag
        in_sub = in_data & (rng.random((size, n, n)) < rng.random((size, 1, 1)))
        known = in_sub | in_sub.transpose(0, 2, 1)
        ctx = _grid_channels(known, before & known).reshape(size, -1)
        q = np.zeros((size, 2 * n))
        y = np.zeros(size, dtype=int)
        for b in range(size):
            cand = np.argwhere(in_data[b] & ~in_sub[b])
            if not len(cand):
                cand = np.argwhere(off_diag & ~in_sub[b])
            if not len(cand):
                cand = np.argwhere(off_diag)
            i, j = cand[int(rng.integers(len(cand)))]
            q[b, i] = q[b, n + j] = 1.0
            y[b] = int(before[b, i, j])
        return ctx, q, y


def _padded(strings: Sequence[str], reverse: bool, pad: int) -> np.ndarray:
    L = max((len(x) for x in strings), default=0)
    out = np.full((len(strings), max(L, 1)), pad, dtype=np.int8)
    for i, x in enumerate(strings):
        if reverse:
            x = x[::-1]
        out[i, :len(x)] = [ch == "1" for ch in x]
    return out


def _common_run(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(len(a), len(b)) lengths of common leading runs; a and b use different pad values."""
    L = max(a.shape[1], b.shape[1])
    a = np.pad(a, ((0, 0), (0, L - a.shape[1])), constant_values=-1)
    b = np.pad(b, ((0, 0), (0, L - b.shape[1])), constant_values=-2)
    eq = a[:, None, :] == b[None, :, :]
    return np.cumprod(eq, axis=2).sum(axis=2)


def top_k_neighbors(subset: Sequence[str], xs: Sequence[str], k: int) -> np.ndarray:
    """Indices into ``subset`` of each query's top-k prefix+suffix neighbors (vectorized nb_dfa)."""
    score = (_common_run(_padded(xs, False, -1), _padded(subset, False, -2))
             + _common_run(_padded(xs, True, -1), _padded(subset, True, -2)))
    order = np.argsort(-score, axis=1, kind="stable")
    return order[:, :k]


def _grid_channels(known: np.ndarray, before: np.ndarray) -> np.ndarray:
    lt = known & before
    ge = known & ~before
    return np.stack([lt, ge, ~known], axis=-1).astype(float)


class DfaEncoder:
    """Top-k prefix/suffix neighbors, each a padded one-hot string plus label and presence bits."""

    arch = "dfa_ff"
    neighborhood = "dfa_prefix_suffix"
    encoder_sizes = [128]
    head_sizes = [128]

    def __init__(self, k: int = 10, max_len: int = 10, min_len: int = 5, data_sizes: tuple[int, int] = (20, 200)):
        self.k, self.max_len, self.min_len = k, max_len, min_len
        self.data_sizes = data_sizes
        self._codes: dict[str, np.ndarray] = {}
        self.slot = 3 * max_len + 2
        self.context_dim = k * self.slot
        self.query_dim = 3 * max_len

    def string_code(self, s: str) -> np.ndarray:
        """One-hot over (0, 1, pad) per position; strings longer than max_len keep their suffix."""
        if s in self._codes:
            return self._codes[s]
        key = s
        s = s[-self.max_len:]
        code = np.zeros((self.max_len, 3))
        code[:, 2] = 1.0
        for p, ch in enumerate(s):
            code[p] = 0.0
            code[p, ch == "1"] = 1.0
        code = code.ravel()
        code.flags.writeable = False
        self._codes[key] = code
        return code

    def neighbors_code(self, neighbors: Sequence[Example]) -> np.ndarray:
        out = np.zeros((self.k, self.slot))
        for slot in range(self.k):
            if slot < len(neighbors):
                e = neighbors[slot]
                out[slot, :-2] = self.string_code(e.input)
                out[slot, -2] = float(e.output)
                out[slot, -1] = 1.0
            else:
                out[slot, :-2] = self.string_code("")
        return out.ravel()

    def encode(self, subset: Sequence[Example], xs: Sequence[str]):
        if not len(xs):
            return np.zeros((0, self.context_dim)), np.zeros((0, self.query_dim))
        q = np.stack([self.string_code(x) for x in xs])
        if not len(subset):
            empty = self.neighbors_code([])
            return np.repeat(empty[None], len(xs), axis=0), q
        codes = np.stack([np.concatenate([self.string_code(e.input), [float(e.output), 1.0]]) for e in subset])
        top = top_k_neighbors([e.input for e in subset], list(xs), self.k)
        ctx = np.zeros((len(xs), self.k, self.slot))
        ctx[:, :, :-2] = self.string_code("")
        width = top.shape[1]
        ctx[:, :width] = codes[top]
        return ctx.reshape(len(xs), -1), q

    def sample_batch(self, space: DfaSpace, rng: np.random.Generator, size: int,
                     data_sizes: tuple[int, int] | None = None):
        lo, hi = data_sizes or self.data_sizes
        L = self.max_len
        ctx = np.zeros((size, self.k, self.slot))
        q = np.zeros((size, self.query_dim))
        y = np.zeros(size, dtype=int)
        steps = np.arange(L)
        for b in range(size):
            s = np.array(space.sample_program(rng))
            n = int(rng.integers(lo, hi + 1))
            lengths = rng.integers(self.min_len, L + 1, n)
            bits = rng.integers(0, 2, (n, L))
            live = steps[None, :] < lengths[:, None]
            state = np.zeros(n, dtype=np.int64)
            for p in range(L):
                state = np.where(live[:, p], s[2 * state + bits[:, p]], state)
            labels = state == s[-1]
            keep = rng.random(n) < rng.random()
            rest = np.flatnonzero(~keep)
            qi = int(rest[rng.integers(len(rest))]) if len(rest) else int(rng.integers(n))
            keep[qi] = False
            sub = np.flatnonzero(keep)
            fwd = np.where(live, bits, -1)
            rev = np.full((n, L), -1)
            for i in range(n):
                rev[i, :lengths[i]] = bits[i, :lengths[i]][::-1]
            if len(sub):
                score = (np.cumprod(fwd[sub] == np.where(live[qi], fwd[qi], -2), axis=1).sum(axis=1)
                         + np.cumprod(rev[sub] == np.where(rev[qi] >= 0, rev[qi], -2), axis=1).sum(axis=1))
                top = sub[np.argsort(-score, kind="stable")[:self.k]]
            else:
                top = sub
            codes = np.zeros((n, L, 3))
            codes[:, :, 2] = ~live
            codes[:, :, 0] = live & (bits == 0)
            codes[:, :, 1] = live & (bits == 1)
            ctx[b, :, :-2] = self.string_code("")
            ctx[b, :len(top), :-2] = codes[top].reshape(len(top), 3 * L)
            ctx[b, :len(top), -2] = labels[top]
            ctx[b, :len(top), -1] = 1.0
            q[b] = codes[qi].ravel()
            y[b] = int(labels[qi])
        return ctx.reshape(size, -1), q, y


class DrawEncoder:
    """One-hot 7x7 window of sampled / unsampled pixels around the query pixel.

    A dense layer over the window applied at every pixel is a single 7x7
    convolution; the hidden layer has 20 units.
    """

    arch = "draw_conv"
    neighborhood = "draw_window"
    encoder_sizes: list[int] = []
    head_sizes = [20]

    def __init__(self, height: int = 16, width: int = 16, window: int = 7):
        self.height, self.width, self.window = height, width, window
        self.context_dim = window * window * 3
        self.query_dim = 0

    def windows(self, sampled: np.ndarray) -> np.ndarray:
        """(H, W, window*window*3) one-hot windows for every pixel."""
        half = self.window // 2
        padded = np.pad(sampled, half, constant_values=UNSAMPLED)
        win = sliding_window_view(padded, (self.window, self.window))
        onehot = np.stack([win == WHITE, win == BLACK, win == UNSAMPLED], axis=-1).astype(float)
        return onehot.reshape(sampled.shape[0], sampled.shape[1], -1)

    def encode(self, subset: Sequence[Example], xs: Sequence):
        sampled = np.full((self.height, self.width), UNSAMPLED, dtype=np.int8)
        for e in subset:
            sampled[e.input] = WHITE if e.output else BLACK
        wins = self.windows(sampled)
        if not len(xs):
            return np.zeros((0, self.context_dim)), np.zeros((0, 0))
        rows, cols = np.array(xs).T
        return wins[rows, cols], np.zeros((len(xs), 0))

    def sample_batch(self, space: DrawingSpace, rng: np.random.Generator, size: int):
        ctx = np.zeros((size, self.context_dim))
        y = np.zeros(size, dtype=int)
        H, W = self.height, self.width
        for b in range(size):
            target = np.zeros((H, W), dtype=bool)
            for r, c in _program_pixels(space.sample_program(rng)):
                if 0 <= r < H and 0 <= c < W:
                    target[r, c] = True
            keep = rng.random((H, W)) < rng.uniform(0.0, 0.6)
            sampled = np.where(keep, np.where(target, WHITE, BLACK), UNSAMPLED).astype(np.int8)
            free = np.argwhere(~keep)
            if not len(free):
                free = np.argwhere(np.ones((H, W), dtype=bool))
            r, c = free[int(rng.integers(len(free)))]
            sampled[r, c] = UNSAMPLED
            half = self.window // 2
            padded = np.pad(sampled, half, constant_values=UNSAMPLED)
            win = padded[r:r + self.window, c:c + self.window]
            ctx[b] = np.stack([win == WHITE, win == BLACK, win == UNSAMPLED], axis=-1).astype(float).ravel()
            y[b] = int(target[r, c])
        return ctx, np.zeros((size, 0)), y


def encoder_for(space, **kwargs):
    if isinstance(space, OrderingSpace):
        return OrderingEncoder(space.n)
    if isinstance(space, DfaSpace):
        return DfaEncoder(**kwargs)
    if isinstance(space, DrawingSpace):
        return DrawEncoder(space.height, space.width)
    raise TypeError(f"no encoder for {type(space).__name__}")

"""A small drawing language over a pixel canvas.

A program is one loop ``for i in range(n)`` over two optional primitives::

    if i % m == r: square(x0 + i*dx, y0 + i*dy, size)          # 1-pixel outline
    if i % m == r: line(x0 + i*dx, y0 + i*dy, direction, length)

``x`` is the column and ``y`` the row. An input is a pixel ``(row, col)`` and
the output is True (white) when some drawn shape covers it.

Counting and synthesis are factored shape by shape: for each loop count the
pixel masks of every square and every line configuration are tabulated once,
black pixels rule out configurations independently, and white pixels must be
covered by the union of the chosen square and line.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from ..core import BudgetExhausted, Example, InvalidInput, InvalidParams, ProgramSpace, SolverStats

DIRECTIONS = ("h", "v", "d")
_STEP = {"h": (0, 1), "v": (1, 0), "d": (1, 1)}

WHITE, BLACK, UNSAMPLED = 1, 0, -1


class Square(NamedTuple):
    x0: int
    y0: int
    dx: int
    dy: int
    size: int
    m: int = 1
    r: int = 0


class Line(NamedTuple):
    x0: int
    y0: int
    dx: int
    dy: int
    direction: int  # index into DIRECTIONS
    length: int
    m: int = 1
    r: int = 0


class DrawProgram(NamedTuple):
    n: int
    square: Square | None
    line: Line | None


@dataclass(frozen=True)
class DrawingGrammar:
    loop_counts: tuple[int, ...] = (1, 2, 3, 4)
    offsets: tuple[int, ...] = (0, 3, 6)
    square_sizes: tuple[int, ...] = (3, 4, 5)
    line_lengths: tuple[int, ...] = (3, 5, 7)
    conditions: tuple[tuple[int, int], ...] = ((1, 0), (2, 0), (2, 1))

    @classmethod
    def wide(cls) -> "DrawingGrammar":
        return cls(offsets=(0, 2, 4, 6, 8), square_sizes=(2, 3, 4, 5, 6, 7, 8),
                   line_lengths=tuple(range(1, 9)), conditions=((1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)))


@dataclass(frozen=True)
class DrawingSpace(ProgramSpace):
    width: int = 16
    height: int = 16
    grammar: DrawingGrammar = field(default_factory=DrawingGrammar)
    domain_id = "drawing"

    # -- configuration tables ---------------------------------------------------

    @cached_property
    def squares(self) -> list[Square]:
        g = self.grammar
        return [Square(x0, y0, dx, dy, size, m, r)
                for x0, y0, dx, dy, size, (m, r) in itertools.product(
                    range(self.width), range(self.height), g.offsets, g.offsets, g.square_sizes, g.conditions)]

    @cached_property
    def lines(self) -> list[Line]:
        g = self.grammar
        return [Line(x0, y0, dx, dy, d, length, m, r)
                for x0, y0, dx, dy, d, length, (m, r) in itertools.product(
                    range(self.width), range(self.height), g.offsets, g.offsets,
                    range(len(DIRECTIONS)), g.line_lengths, g.conditions)]

    def size(self) -> int:
        return len(self.grammar.loop_counts) * (len(self.squares) + 1) * (len(self.lines) + 1)

    def enumeration_cost(self) -> int:
        return len(self.grammar.loop_counts) * (len(self.squares) + len(self.lines) + 2)

    def config(self) -> dict:
        g = self.grammar
        return {"domain": self.domain_id, "width": self.width, "height": self.height,
                "grammar": {"loop_counts": list(g.loop_counts), "offsets": list(g.offsets),
                            "square_sizes": list(g.square_sizes), "line_lengths": list(g.line_lengths),
                            "conditions": [list(c) for c in g.conditions]}}

    def enumerate(self) -> Iterator[DrawProgram]:
        for n in self.grammar.loop_counts:
            for sq in [None, *self.squares]:
                for ln in [None, *self.lines]:
                    yield DrawProgram(n, sq, ln)

    def validate(self, s) -> None:
        g = self.grammar
        try:
            n, sq, ln = s
        except (TypeError, ValueError):
            raise InvalidParams(f"{s!r} is not a drawing program") from None
        ok = n in g.loop_counts
        for shape in (sq, ln):
            if shape is None:
                continue
            ok = ok and 0 <= shape.x0 < self.width and 0 <= shape.y0 < self.height
            ok = ok and shape.dx in g.offsets and shape.dy in g.offsets and (shape.m, shape.r) in g.conditions
        if sq is not None:
            ok = ok and sq.size in g.square_sizes
        if ln is not None:
            ok = ok and 0 <= ln.direction < len(DIRECTIONS) and ln.length in g.line_lengths
        if not ok:
            raise InvalidParams(f"{s!r} is outside the grammar")

    def validate_input(self, x) -> None:
        row, col = x
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise InvalidInput(f"pixel {x!r} outside {self.height}x{self.width} canvas")

    def all_inputs(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.height) for c in range(self.width)]

    def canonical_order_key(self, x):
        return tuple(x)

    # -- semantics ----------------------------------------------------------------

    def evaluate(self, s: DrawProgram, x) -> bool:
        row, col = x
        for i in range(s.n):
            sq = s.square
            if sq is not None and i % sq.m == sq.r:
                top, left = sq.y0 + i * sq.dy, sq.x0 + i * sq.dx
                bottom, right = top + sq.size - 1, left + sq.size - 1
                if top <= row <= bottom and left <= col <= right and (
                        row in (top, bottom) or col in (left, right)):
                    return True
            ln = s.line
            if ln is not None and i % ln.m == ln.r:
                r0, c0 = ln.y0 + i * ln.dy, ln.x0 + i * ln.dx
                dr, dc = _STEP[DIRECTIONS[ln.direction]]
                t = (row - r0) if dr else (col - c0)
                if 0 <= t < ln.length and row == r0 + t * dr and col == c0 + t * dc:
                    return True
        return False

    def render(self, s: DrawProgram) -> np.ndarray:
        """Rasterize ``s`` shape by shape into a boolean (height, width) grid."""
        self.validate(s)
        grid = np.zeros((self.height, self.width), dtype=bool)
        for row, col in _program_pixels(s):
            if 0 <= row < self.height and 0 <= col < self.width:
                grid[row, col] = True
        return grid

    def sample_program(self, rng: np.random.Generator) -> DrawProgram:
        """Uniform over loop counts; each shape present with probability 0.9."""
        n = self.grammar.loop_counts[int(rng.integers(len(self.grammar.loop_counts)))]
        sq = self.squares[int(rng.integers(len(self.squares)))] if rng.random() < 0.9 else None
        ln = self.lines[int(rng.integers(len(self.lines)))] if rng.random() < 0.9 else None
        return DrawProgram(n, sq, ln)

    def program_to_json(self, s: DrawProgram):
        return {"n": s.n, "square": list(s.square) if s.square else None,
                "line": list(s.line) if s.line else None}

    def program_from_json(self, obj) -> DrawProgram:
        return DrawProgram(obj["n"], Square(*obj["square"]) if obj["square"] else None,
                           Line(*obj["line"]) if obj["line"] else None)

    # -- factored masks -------------------------------------------------------------

    def _shape_masks(self, n: int, kind: str) -> np.ndarray:
        """Boolean (pixels, configs + 1) table; column 0 is the absent shape."""
        configs = self.squares if kind == "square" else self.lines
        H, W = self.height, self.width
        P = np.array(configs, dtype=np.int64).T
        if kind == "square":
            x0, y0, dx, dy, size, m, r = P
        else:
            x0, y0, dx, dy, direction, length, m, r = P
        masks = np.zeros((H * W, len(configs) + 1), dtype=bool)
        cols = np.arange(1, len(configs) + 1)

        def paint(rows, cc, on):
            on = on & (rows >= 0) & (rows < H) & (cc >= 0) & (cc < W)
            masks[(rows * W + cc)[on], cols[on]] = True

        for i in range(n):
            active = (i % m) == r
            top, left = y0 + i * dy, x0 + i * dx
            if kind == "square":
                for t in range(max(self.grammar.square_sizes)):
                    inside = active & (t < size)
                    bottom, right = top + size - 1, left + size - 1
                    paint(top, left + t, inside)
                    paint(bottom, left + t, inside)
                    paint(top + t, left, inside)
                    paint(top + t, right, inside)
            else:
                dr = np.array([_STEP[d][0] for d in DIRECTIONS])[direction]
                dc = np.array([_STEP[d][1] for d in DIRECTIONS])[direction]
                for t in range(max(self.grammar.line_lengths)):
                    paint(top + t * dr, left + t * dc, active & (t < length))
        return masks

    @cached_property
    def _tables(self) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        return {n: (self._shape_masks(n, "square"), self._shape_masks(n, "line"))
                for n in self.grammar.loop_counts}

    def _split(self, literals: Sequence[Example]):
        white, black = [], []
        for lit in literals:
            row, col = lit.input
            (white if lit.output else black).append(row * self.width + col)
        return sorted(set(white)), sorted(set(black))

    def _factored(self, literals: Sequence[Example]):
        """Yield per loop count: (n, valid square ids, square white-coverage bits,
        valid line ids, line white-coverage bits, white pixel mask bits)."""
        white, black = self._split(literals)
        if set(white) & set(black):
            return
        for n in self.grammar.loop_counts:
            sqm, lnm = self._tables[n]
            sq_ok = ~sqm[black].any(axis=0) if black else np.ones(sqm.shape[1], dtype=bool)
            ln_ok = ~lnm[black].any(axis=0) if black else np.ones(lnm.shape[1], dtype=bool)
            sq_ids, ln_ids = np.flatnonzero(sq_ok), np.flatnonzero(ln_ok)
            sq_cov = _pack(sqm[np.ix_(white, sq_ids)]) if white else np.zeros((len(sq_ids), 1), np.uint8)
            ln_cov = _pack(lnm[np.ix_(white, ln_ids)]) if white else np.zeros((len(ln_ids), 1), np.uint8)
            full = _pack(np.ones((len(white), 1), dtype=bool))[0] if white else np.zeros(1, np.uint8)
            yield n, sq_ids, sq_cov, ln_ids, ln_cov, full

    def count_literals(self, literals: Sequence[Example]) -> int:
        total = 0
        for n, sq_ids, sq_cov, ln_ids, ln_cov, full in self._factored(literals):
            if not len(sq_ids) or not len(ln_ids):
                continue
            patterns, mult = np.unique(sq_cov, axis=0, return_counts=True)
            for pat, m in zip(patterns, mult):
                need = full & ~pat
                total += int(m) * int(np.count_nonzero(((ln_cov & need) == need).all(axis=1)))
        return total

    def search(self, literals: Sequence[Example], budget: int, stats: SolverStats):
        for n, sq_ids, sq_cov, ln_ids, ln_cov, full in self._factored(literals):
            seen: dict[bytes, int | None] = {}
            for idx in range(len(sq_ids)):
                key = sq_cov[idx].tobytes()
                if key not in seen:
                    stats.nodes += 1
                    if stats.nodes > budget:
                        raise BudgetExhausted(budget)
                    need = full & ~sq_cov[idx]
                    hits = np.flatnonzero(((ln_cov & need) == need).all(axis=1))
                    seen[key] = int(ln_ids[hits[0]]) if len(hits) else None
                ln = seen[key]
                if ln is not None:
                    sq = int(sq_ids[idx])
                    return DrawProgram(n, self.squares[sq - 1] if sq else None,
                                       self.lines[ln - 1] if ln else None)
        return None


def _pack(bits: np.ndarray) -> np.ndarray:
    """(pixels, configs) bool -> (configs, bytes) uint8 bitsets."""
    return np.packbits(bits.T, axis=1)


def _program_pixels(s: DrawProgram):
    for i in range(s.n):
        sq = s.square
        if sq is not None and i % sq.m == sq.r:
            top, left = sq.y0 + i * sq.dy, sq.x0 + i * sq.dx
            for t in range(sq.size):
                yield top, left + t
                yield top + sq.size - 1, left + t
                yield top + t, left
                yield top + t, left + sq.size - 1
        ln = s.line
        if ln is not None and i % ln.m == ln.r:
            dr, dc = _STEP[DIRECTIONS[ln.direction]]
            for t in range(ln.length):
                yield ln.y0 + i * ln.dy + t * dr, ln.x0 + i * ln.dx + t * dc


def nb_draw(sampled: np.ndarray, x, size: int = 7) -> np.ndarray:
    """``size`` x ``size`` window of ``sampled`` (values WHITE/BLACK/UNSAMPLED) centred on ``x``.

    Out-of-grid cells read as UNSAMPLED.
    """
    H, W = sampled.shape
    row, col = x
    if not (0 <= row < H and 0 <= col < W):
        raise InvalidInput(f"pixel {x!r} outside {H}x{W} canvas")
    half = size // 2
    padded = np.pad(sampled, half, constant_values=UNSAMPLED)
    return padded[row:row + size, col:col + size].copy()


def sampled_grid(shape: tuple[int, int], subset: Sequence[Example]) -> np.ndarray:
    grid = np.full(shape, UNSAMPLED, dtype=np.int8)
    for e in subset:
        grid[e.input] = WHITE if e.output else BLACK
    return grid

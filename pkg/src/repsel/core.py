"""Program spaces, examples, datasets and the exact model-counting oracle.

A program space is a finite, enumerable family ``F(.; s)`` of boolean-valued
programs. Every domain in this package (orderings, DFAs, drawings) maps an
input to ``True``/``False``, which lets a negated constraint be rewritten as
the same input with the flipped output.
"""
from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Hashable, Iterable, Iterator, Sequence

DEFAULT_COUNT_CAP = 10**8


class ReprselError(Exception):
    """Base class for errors raised by this package."""


class InvalidParams(ReprselError, ValueError):
    pass


class InvalidInput(ReprselError, ValueError):
    pass


class SpaceTooLarge(ReprselError):
    pass


class DuplicateInput(ReprselError, ValueError):
    pass


class BudgetExhausted(ReprselError):
    """The solver hit its node limit before deciding satisfiability."""

    def __init__(self, budget: int):
        super().__init__(f"solver node budget of {budget} exhausted")
        self.budget = budget


@dataclass(frozen=True)
class Example:
    input: Hashable
    output: bool

    def flipped(self) -> "Example":
        return Example(self.input, not self.output)


@dataclass(frozen=True)
class Constraint:
    example: Example
    negated: bool = False

    @property
    def literal(self) -> Example:
        """The positive example equivalent to this constraint (outputs are boolean)."""
        return self.example.flipped() if self.negated else self.example


def positives(examples: Iterable[Example]) -> list[Constraint]:
    return [Constraint(e) for e in examples]


def as_literals(constraints: Iterable[Constraint | Example]) -> list[Example]:
    out = []
    for c in constraints:
        out.append(c.literal if isinstance(c, Constraint) else c)
    return out


class ProgramSpace(ABC):
    """A finite parameterized program family.

    Subclasses provide the domain-specific pieces: evaluation, lexicographic
    enumeration, and the pruned search used by both counting and synthesis.
    """

    domain_id: str

    @abstractmethod
    def size(self) -> int:
        """|S|."""

    @abstractmethod
    def enumerate(self) -> Iterator[Any]:
        """Yield every program exactly once, lexicographically over its parameter vector."""

    @abstractmethod
    def evaluate(self, s: Any, x: Any) -> bool: ...

    @abstractmethod
    def validate(self, s: Any) -> None:
        """Raise InvalidParams if ``s`` is not a program of this space."""

    @abstractmethod
    def validate_input(self, x: Any) -> None: ...

    @abstractmethod
    def count_literals(self, literals: Sequence[Example]) -> int:
        """Exact number of programs consistent with every literal."""

    @abstractmethod
    def search(self, literals: Sequence[Example], budget: int, stats: "SolverStats") -> Any | None:
        """First consistent program in enumeration order, or None when none exists."""

    def enumeration_cost(self) -> int:
        """Work done by ``count_literals`` in the worst case (defaults to |S|)."""
        return self.size()

    def config(self) -> dict:
        return {"domain": self.domain_id}

    # input (de)serialization; inputs are hashable python values
    def input_to_json(self, x: Any) -> Any:
        return list(x) if isinstance(x, tuple) else x

    def input_from_json(self, obj: Any) -> Any:
        return tuple(obj) if isinstance(obj, list) else obj

    def program_to_json(self, s: Any) -> Any:
        return list(s)

    def program_from_json(self, obj: Any) -> Any:
        return tuple(obj)

    def canonical_order_key(self, x: Any) -> Any:
        """Sort key for the 'canonical' counterexample order; None keeps dataset order."""
        return None


@dataclass
class SolverStats:
    nodes: int = 0
    calls: int = 0


def input_key(x: Any) -> str:
    """Canonical serialized form used for input equality across domains."""
    return json.dumps(list(x) if isinstance(x, tuple) else x, separators=(",", ":"))


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of examples with unique inputs."""

    examples: tuple[Example, ...]
    domain_id: str
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        index = {}
        for i, e in enumerate(self.examples):
            k = input_key(e.input)
            if k in index:
                raise DuplicateInput(f"input {k} appears more than once")
            index[k] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[Example]:
        return iter(self.examples)

    def __getitem__(self, i):
        return self.examples[i]

    def __contains__(self, e: Example) -> bool:
        i = self._index.get(input_key(e.input))
        return i is not None and self.examples[i] == e

    def index_of(self, e: Example) -> int:
        return self._index[input_key(e.input)]

    def with_examples(self, examples: Iterable[Example]) -> "Dataset":
        return Dataset(tuple(examples), self.domain_id)

    def subset_of(self, other: "Dataset") -> bool:
        return all(e in other for e in self.examples)

    def difference(self, other: "Dataset") -> list[Example]:
        return [e for e in self.examples if e not in other]

    def to_jsonl(self, space: ProgramSpace | None = None) -> str:
        lines = []
        for e in self.examples:
            x = space.input_to_json(e.input) if space else (list(e.input) if isinstance(e.input, tuple) else e.input)
            lines.append(json.dumps({"input": x, "output": bool(e.output)}, separators=(",", ":")))
        return "".join(line + "\n" for line in lines)

    def write_jsonl(self, path: str | Path, space: ProgramSpace | None = None) -> None:
        Path(path).write_text(self.to_jsonl(space))

    @classmethod
    def from_jsonl(cls, text: str, domain_id: str, space: ProgramSpace | None = None) -> "Dataset":
        examples = []
        for line in text.splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            x = obj["input"]
            x = space.input_from_json(x) if space else (tuple(x) if isinstance(x, list) else x)
            examples.append(Example(x, bool(obj["output"])))
        return cls(tuple(examples), domain_id)

    @classmethod
    def read_jsonl(cls, path: str | Path, domain_id: str, space: ProgramSpace | None = None) -> "Dataset":
        return cls.from_jsonl(Path(path).read_text(), domain_id, space)


def evaluate(space: ProgramSpace, s: Any, x: Any) -> bool:
    space.validate(s)
    space.validate_input(x)
    return space.evaluate(s, x)


def consistent(space: ProgramSpace, s: Any, constraints: Iterable[Constraint | Example]) -> bool:
    """True iff ``s`` satisfies every positive constraint and violates every negated one."""
    for c in constraints:
        if isinstance(c, Example):
            c = Constraint(c)
        if (space.evaluate(s, c.example.input) == c.example.output) == c.negated:
            return False
    return True


def count(space: ProgramSpace, constraints: Iterable[Constraint | Example], cap: int = DEFAULT_COUNT_CAP) -> int:
    """The count oracle c(D'): number of programs consistent with ``constraints``."""
    if space.enumeration_cost() > cap:
        raise SpaceTooLarge(f"{space.domain_id} space needs {space.enumeration_cost()} steps, cap is {cap}")
    return space.count_literals(as_literals(constraints))


def count_by_enumeration(space: ProgramSpace, constraints: Iterable[Constraint | Example], cap: int = DEFAULT_COUNT_CAP) -> int:
    """Brute-force count over ``space.enumerate()``; the reference for ``count``."""
    if space.size() > cap:
        raise SpaceTooLarge(f"|S| = {space.size()} exceeds cap {cap}")
    constraints = list(constraints)
    return sum(1 for s in space.enumerate() if consistent(space, s, constraints))

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..graph import RegularGraph
from ..moves import Move, applicable


class Precondition(ValueError):
    """The operation was called outside the situation it handles."""


class InternalContradiction(RuntimeError):
    """A state that the construction rules out was reached."""


class NoWitness(InternalContradiction):
    pass


@dataclass
class StepTrace:
    """Moves emitted by one operation, each tagged with the step that made it.

    `result` is the graph after the last move (or the input graph when no
    move was needed).
    """

    moves: list[Move] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)
    result: RegularGraph | None = None

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self) -> Iterator[Move]:
        return iter(self.moves)

    def extend(self, other: "StepTrace") -> None:
        self.moves.extend(other.moves)
        self.tags.extend(other.tags)
        if other.result is not None:
            self.result = other.result


class Runner:
    """Applies moves to a working graph while recording them."""

    def __init__(self, g: RegularGraph):
        self.g = g
        self.trace = StepTrace(result=g)

    def do(self, m: Move, tag: str) -> RegularGraph:
        if not applicable(self.g, m):
            raise InternalContradiction(f"{tag}: constructed move {m} is not applicable")
        self.g = self.g.with_edge_change(m.removed(), m.added())
        self.trace.moves.append(m)
        self.trace.tags.append(tag)
        self.trace.result = self.g
        return self.g

    def absorb(self, t: StepTrace) -> RegularGraph:
        self.trace.extend(t)
        if t.result is not None:
            self.g = t.result
        return self.g

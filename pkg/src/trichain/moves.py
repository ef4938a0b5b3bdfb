"""Switches, flips and triangle switches on regular graphs.

A switch ``Switch(x, y, w, z)`` deletes xy, wz and inserts xw, yz.  A flip is
the same with the extra requirement that wy is an edge.  A triangle switch
is stored with its common neighbour ``v`` as ``(v, x, w, y, z)``:

* ``DeltaPlus`` needs the path y-x-v-w-z with xw, yz absent; it deletes
  xy, wz and inserts xw, yz, creating the triangle v, x, w.
* ``DeltaMinus`` needs the triangle v, x, w and the edge yz with xy, wz
  absent; it deletes xw, yz and inserts xy, wz.

Each kind undoes the other on the same tuple.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .graph import Edge, GraphError, GraphKey, RegularGraph, _norm, key


class MoveKind(str, enum.Enum):
    SWITCH = "Switch"
    FLIP = "Flip"
    DELTA_PLUS = "DeltaPlus"
    DELTA_MINUS = "DeltaMinus"


DELTA_KINDS = (MoveKind.DELTA_PLUS, MoveKind.DELTA_MINUS)


class NotApplicable(GraphError):
    pass


class KeyMismatch(ValueError):
    pass


class StepNotApplicable(ValueError):
    def __init__(self, index: int, move: "Move"):
        super().__init__(f"step {index} ({move}) is not applicable")
        self.index = index
        self.move = move


@dataclass(frozen=True, order=True)
class Move:
    kind: MoveKind
    vertices: tuple[int, ...]

    def __post_init__(self):
        size = 5 if self.kind in DELTA_KINDS else 4
        if len(self.vertices) != size:
            raise ValueError(f"{self.kind.value} takes {size} vertices, got {self.vertices}")

    @property
    def is_delta(self) -> bool:
        return self.kind in DELTA_KINDS

    def removed(self) -> tuple[Edge, Edge]:
        if self.kind is MoveKind.DELTA_PLUS:
            _, x, w, y, z = self.vertices
            return _norm(x, y), _norm(w, z)
        if self.kind is MoveKind.DELTA_MINUS:
            _, x, w, y, z = self.vertices
            return _norm(x, w), _norm(y, z)
        x, y, w, z = self.vertices
        return _norm(x, y), _norm(w, z)

    def added(self) -> tuple[Edge, Edge]:
        if self.kind is MoveKind.DELTA_PLUS:
            _, x, w, y, z = self.vertices
            return _norm(x, w), _norm(y, z)
        if self.kind is MoveKind.DELTA_MINUS:
            _, x, w, y, z = self.vertices
            return _norm(x, y), _norm(w, z)
        x, y, w, z = self.vertices
        return _norm(x, w), _norm(y, z)

    def edge_delta(self) -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
        return tuple(sorted(self.removed())), tuple(sorted(self.added()))

    def relabel(self, labels: list[int]) -> "Move":
        return Move(self.kind, tuple(labels[u] for u in self.vertices))

    def to_dict(self) -> dict:
        names = "vxwyz" if self.is_delta else "xywz"
        return {"kind": self.kind.value, **dict(zip(names, self.vertices))}

    @classmethod
    def from_dict(cls, obj: dict) -> "Move":
        kind = MoveKind(obj["kind"])
        names = "vxwyz" if kind in DELTA_KINDS else "xywz"
        return cls(kind, tuple(int(obj[c]) for c in names))

    def __str__(self) -> str:
        return f"{self.kind.value}{self.vertices}"


def delta_plus(v: int, x: int, w: int, y: int, z: int) -> Move:
    return Move(MoveKind.DELTA_PLUS, (v, x, w, y, z))


def delta_minus(v: int, x: int, w: int, y: int, z: int) -> Move:
    return Move(MoveKind.DELTA_MINUS, (v, x, w, y, z))


def switch(x: int, y: int, w: int, z: int) -> Move:
    return Move(MoveKind.SWITCH, (x, y, w, z))


def flip(x: int, y: int, w: int, z: int) -> Move:
    return Move(MoveKind.FLIP, (x, y, w, z))


def applicable(g: RegularGraph, m: Move) -> bool:
    vs = m.vertices
    if len(set(vs)) != len(vs) or not all(1 <= u <= g.n for u in vs):
        return False
    e = g.has_edge
    if m.kind is MoveKind.DELTA_PLUS:
        v, x, w, y, z = vs
        return e(y, x) and e(x, v) and e(v, w) and e(w, z) and not e(x, w) and not e(y, z)
    if m.kind is MoveKind.DELTA_MINUS:
        v, x, w, y, z = vs
        return e(v, x) and e(v, w) and e(x, w) and e(y, z) and not e(x, y) and not e(w, z)
    x, y, w, z = vs
    ok = e(x, y) and e(w, z) and not e(x, w) and not e(y, z)
    if m.kind is MoveKind.FLIP:
        ok = ok and e(w, y)
    return ok


def apply(g: RegularGraph, m: Move) -> RegularGraph:
    if not applicable(g, m):
        raise NotApplicable(f"{m} is not applicable")
    return g.with_edge_change(m.removed(), m.added())


def invert(m: Move) -> Move:
    if m.kind is MoveKind.DELTA_PLUS:
        return Move(MoveKind.DELTA_MINUS, m.vertices)
    if m.kind is MoveKind.DELTA_MINUS:
        return Move(MoveKind.DELTA_PLUS, m.vertices)
    x, y, w, z = m.vertices
    return Move(m.kind, (x, w, y, z))


def as_switch(m: Move) -> Move:
    """The plain switch performing the same edge change as `m`."""
    if m.kind is MoveKind.DELTA_PLUS:
        _, x, w, y, z = m.vertices
        return switch(x, y, w, z)
    if m.kind is MoveKind.DELTA_MINUS:
        _, x, w, y, z = m.vertices
        return switch(x, w, y, z)
    return Move(MoveKind.SWITCH, m.vertices)


def enumerate_delta_switches(g: RegularGraph) -> list[Move]:
    """All applicable triangle switches of `g`.

    Moves that differ only by the symmetry (x, y) <-> (w, z) are the same
    edge change at the same common neighbour; only the form with x < w is
    kept.
    """
    out = []
    adj = g.adjacency()
    for v in g.vertices():
        nv = sorted(adj[v])
        for i, x in enumerate(nv):
            nx_ = adj[x]
            for w in nv[i + 1:]:
                nw = adj[w]
                if w in nx_:
                    # triangle v, x, w: DeltaMinus against any edge yz
                    for y in g.vertices():
                        if y in (v, x, w) or y in nx_:
                            continue
                        for z in adj[y]:
                            if z in (v, x, w) or z in nw:
                                continue
                            out.append(Move(MoveKind.DELTA_MINUS, (v, x, w, y, z)))
                else:
                    for y in nx_:
                        if y == v:
                            continue
                        ny = adj[y]
                        for z in nw:
                            if z == v or z == y or z in ny:
                                continue
                            out.append(Move(MoveKind.DELTA_PLUS, (v, x, w, y, z)))
    out.sort(key=lambda m: (m.kind.value, m.vertices))
    return out


def delta_neighbours(g: RegularGraph) -> dict[GraphKey, RegularGraph]:
    """Distinct graphs one triangle switch away, keyed by graph key."""
    out: dict[GraphKey, RegularGraph] = {}
    for m in enumerate_delta_switches(g):
        h = g.with_edge_change(m.removed(), m.added())
        out.setdefault(h.key(), h)
    return out


# -- certificates ---------------------------------------------------------------


@dataclass
class MoveCertificate:
    start_key: GraphKey
    moves: list[Move]
    end_key: GraphKey
    n: int = 0
    d: int = 0
    tags: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.moves)

    def reversed(self) -> "MoveCertificate":
        """Certificate for the opposite direction (inverted moves, reversed)."""
        return MoveCertificate(
            start_key=self.end_key,
            moves=[invert(m) for m in reversed(self.moves)],
            end_key=self.start_key,
            n=self.n,
            d=self.d,
            tags=list(reversed(self.tags)),
        )

    def dump(self, fh: IO[str]) -> None:
        header = {"start": self.start_key.decode(), "end": self.end_key.decode(), "n": self.n, "d": self.d}
        fh.write(json.dumps(header) + "\n")
        for i, m in enumerate(self.moves):
            row = m.to_dict()
            if i < len(self.tags) and self.tags[i]:
                row["lemma"] = self.tags[i]
            fh.write(json.dumps(row) + "\n")

    def dumps(self) -> str:
        import io

        buf = io.StringIO()
        self.dump(buf)
        return buf.getvalue()

    @classmethod
    def load(cls, lines: Iterable[str]) -> "MoveCertificate":
        it: Iterator[str] = (line for line in lines if line.strip())
        header = json.loads(next(it))
        moves, tags = [], []
        for line in it:
            row = json.loads(line)
            moves.append(Move.from_dict(row))
            tags.append(row.get("lemma", ""))
        return cls(
            start_key=header["start"].encode(),
            moves=moves,
            end_key=header["end"].encode(),
            n=int(header.get("n", 0)),
            d=int(header.get("d", 0)),
            tags=tags if any(tags) else [],
        )


def certificate(start: RegularGraph, moves: list[Move], tags: list[str] | None = None) -> MoveCertificate:
    """Replay `moves` from `start` and package them with both keys."""
    end = replay_moves(start, moves)
    return MoveCertificate(key(start), list(moves), key(end), start.n, start.d, list(tags or []))


def replay_moves(start: RegularGraph, moves: Iterable[Move]) -> RegularGraph:
    g = start
    for i, m in enumerate(moves):
        if not applicable(g, m):
            raise StepNotApplicable(i, m)
        g = g.with_edge_change(m.removed(), m.added())
    return g


def replay(cert: MoveCertificate, start: RegularGraph) -> RegularGraph:
    if key(start) != cert.start_key:
        raise KeyMismatch("start graph does not match the certificate's start key")
    return replay_moves(start, cert.moves)

"""Labelled regular graphs on the vertex set 1..n.

`RegularGraph` is immutable; every edit produces a new graph.  `Layering`
is the breadth-first level decomposition from a root vertex that the
clique-building procedure in :mod:`trichain.reconfigure` works on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]
GraphKey = bytes


class GraphError(ValueError):
    """Base class for invalid graph input."""


class LabelError(GraphError):
    pass


class Loop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class NonRegular(GraphError):
    pass


class ParityViolation(GraphError):
    pass


class OddDegree(GraphError):
    pass


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class RegularGraph:
    """A simple undirected d-regular graph on vertices 1..n.

    Construct through :func:`from_edges` (validating) or
    :meth:`RegularGraph.with_edge_change` (used by move application).
    """

    __slots__ = ("n", "d", "_adj", "_edges")

    def __init__(self, n: int, d: int, adj: Sequence[frozenset[int]]):
        # adj[0] is a dummy so that adj[v] is the neighbourhood of v
        self.n = n
        self.d = d
        self._adj = tuple(adj)
        self._edges: tuple[Edge, ...] | None = None

    # -- queries -----------------------------------------------------------

    def neighbours(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edges(self) -> tuple[Edge, ...]:
        if self._edges is None:
            self._edges = tuple(
                (u, w) for u in self.vertices() for w in sorted(self._adj[u]) if u < w
            )
        return self._edges

    @property
    def m(self) -> int:
        return self.n * self.d // 2

    def key(self) -> GraphKey:
        return key(self)

    def adjacency(self) -> tuple[frozenset[int], ...]:
        return self._adj

    # -- edits -------------------------------------------------------------

    def with_edge_change(self, removed: Iterable[Edge], added: Iterable[Edge]) -> "RegularGraph":
        """Return a copy with `removed` deleted and `added` inserted.

        The degree of every touched vertex is revalidated afterwards.
        """
        adj = list(self._adj)
        touched: set[int] = set()
        for u, v in removed:
            if v not in adj[u]:
                raise GraphError(f"edge {u}{v} not present")
            adj[u] = adj[u] - {v}
            adj[v] = adj[v] - {u}
            touched.update((u, v))
        for u, v in added:
            if u == v:
                raise Loop(f"loop at {u}")
            if v in adj[u]:
                raise DuplicateEdge(f"edge {u}{v} already present")
            adj[u] = adj[u] | {v}
            adj[v] = adj[v] | {u}
            touched.update((u, v))
        for u in touched:
            if len(adj[u]) != self.d:
                raise NonRegular(f"vertex {u} has degree {len(adj[u])}, expected {self.d}")
        return RegularGraph(self.n, self.d, adj)

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularGraph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"RegularGraph(n={self.n}, d={self.d}, edges={list(self.edges())})"


def from_edges(n: int, edges: Iterable[Sequence[int]], d: int | None = None) -> RegularGraph:
    """Validate an edge list and build a `RegularGraph`.

    If `d` is omitted it is inferred from the degrees.
    """
    if d is not None and (n * d) % 2:
        raise ParityViolation(f"no {d}-regular graph on {n} vertices: n*d is odd")
    adj: list[set[int]] = [set() for _ in range(n + 1)]
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise LabelError(f"edge {u}{v} has a label outside 1..{n}")
        if u == v:
            raise Loop(f"loop at {u}")
        if v in adj[u]:
            raise DuplicateEdge(f"duplicate edge {min(u, v)}{max(u, v)}")
        adj[u].add(v)
        adj[v].add(u)
    degrees = Counter(len(adj[v]) for v in range(1, n + 1))
    if len(degrees) > 1:
        raise NonRegular(f"degrees are not all equal: {dict(sorted(degrees.items()))}")
    inferred = next(iter(degrees)) if degrees else 0
    if d is not None and inferred != d:
        raise NonRegular(f"graph is {inferred}-regular, expected {d}")
    return RegularGraph(n, inferred, [frozenset(s) for s in adj])


def key(g: RegularGraph) -> GraphKey:
    """Label-sensitive encoding: vertex count plus the sorted edge list."""
    body = ",".join(f"{u}-{v}" for u, v in g.edges())
    return f"{g.n}:{body}".encode("ascii")


def triangles(g: RegularGraph) -> list[tuple[int, int, int]]:
    out = []
    for a in g.vertices():
        na = g.neighbours(a)
        for b in sorted(na):
            if b <= a:
                continue
            for c in sorted(na & g.neighbours(b)):
                if c > b:
                    out.append((a, b, c))
    return out


def triangle_count(g: RegularGraph) -> int:
    return sum(
        1
        for a in g.vertices()
        for b in g.neighbours(a)
        if b > a
        for c in g.neighbours(a) & g.neighbours(b)
        if c > b
    )


def is_fragment(g: RegularGraph) -> bool:
    return g.d + 1 < g.n < 2 * (g.d + 1)


def complete_graph(n: int) -> RegularGraph:
    return from_edges(n, combinations(range(1, n + 1), 2))


def complement(g: RegularGraph) -> RegularGraph:
    return from_edges(g.n, [(u, v) for u, v in combinations(g.vertices(), 2) if not g.has_edge(u, v)])


def cycle(n: int, order: Sequence[int] | None = None) -> RegularGraph:
    order = list(order) if order is not None else list(range(1, n + 1))
    return from_edges(n, [(order[i], order[(i + 1) % len(order)]) for i in range(len(order))])


def disjoint_union(*graphs: RegularGraph) -> RegularGraph:
    """Place the graphs side by side, shifting labels of later ones."""
    edges: list[Edge] = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return from_edges(offset, edges)


def construct_T(d: int) -> RegularGraph:
    """The tripartite d-regular graph T_{d,d,1} on 2d+1 vertices.

    K_{d,d} on a_i = i, b_i = d+i, minus the matching a_i b_i for i <= d/2,
    plus an apex 2d+1 joined to those a_i and b_i.  For d >= 4 it contains
    triangles (apex, a_1, b_2).
    """
    if d % 2 or d < 2:
        raise OddDegree(f"the construction needs an even degree >= 2, got {d}")
    apex = 2 * d + 1
    half = d // 2
    edges = [(i, d + j) for i in range(1, d + 1) for j in range(1, d + 1) if not (i == j and i <= half)]
    edges += [(i, apex) for i in range(1, half + 1)] + [(d + i, apex) for i in range(1, half + 1)]
    return from_edges(apex, edges, d)


def components(g: RegularGraph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * (g.n + 1)
    out = []
    for s in g.vertices():
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in g.neighbours(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def component_of(g: RegularGraph, v: int) -> frozenset[int]:
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for w in g.neighbours(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def diameter(g: RegularGraph) -> float:
    best = 0
    for s in g.vertices():
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for w in g.neighbours(u):
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        if len(dist) < g.n:
            return float("inf")
        best = max(best, max(dist.values()))
    return best


def induced(g: RegularGraph, vertices: Iterable[int]) -> tuple[RegularGraph, list[int]]:
    """Relabel the subgraph induced by `vertices` onto 1..k.

    Returns the subgraph and `labels`, where ``labels[i]`` is the original
    label of new vertex ``i`` (``labels[0]`` is unused).  The vertex set
    must be a union of components so that the result is regular.
    """
    labels = [0] + sorted(vertices)
    index = {u: i for i, u in enumerate(labels)}
    edges = [(index[u], index[w]) for u, w in g.edges() if u in index and w in index]
    return from_edges(len(labels) - 1, edges, g.d), labels


def random_regular(n: int, d: int, seed: int) -> RegularGraph:
    """A random labelled d-regular graph (networkx pairing-model generator)."""
    import networkx as nx

    if (n * d) % 2:
        raise ParityViolation(f"no {d}-regular graph on {n} vertices: n*d is odd")
    h = nx.random_regular_graph(d, n, seed=seed)
    return from_edges(n, [(u + 1, v + 1) for u, v in h.edges()], d)


# -- edge-list text format ----------------------------------------------------


def format_edge_list(g: RegularGraph) -> str:
    lines = [f"{g.n} {len(g.edges())}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> RegularGraph:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for row in body:
        if len(row) != 2:
            raise GraphError(f"bad edge line: {' '.join(row)!r}")
        edges.append((int(row[0]), int(row[1])))
    return from_edges(n, edges)


def read_graph(path) -> RegularGraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_graph(g: RegularGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))


# -- layering -----------------------------------------------------------------


@dataclass(frozen=True)
class Layering:
    """Distance levels of the root's component.

    ``level[u]`` is -1 for vertices outside the component.  The per-vertex
    counts (`dprime`, `indeg`, `outdeg`) are indexed by vertex label.
    """

    root: int
    levels: tuple[frozenset[int], ...]
    level: tuple[int, ...]
    dprime: tuple[int, ...]
    indeg: tuple[int, ...]
    outdeg: tuple[int, ...]
    graph: RegularGraph

    @property
    def ell(self) -> int:
        return len(self.V(2))

    @property
    def component(self) -> frozenset[int]:
        return frozenset().union(*self.levels)

    def V(self, i: int) -> frozenset[int]:
        return self.levels[i] if 0 <= i < len(self.levels) else frozenset()

    def In(self, u: int) -> frozenset[int]:
        i = self.level[u]
        return frozenset(w for w in self.graph.neighbours(u) if self.level[w] == i - 1)

    def Out(self, u: int) -> frozenset[int]:
        i = self.level[u]
        return frozenset(w for w in self.graph.neighbours(u) if self.level[w] == i + 1)

    def within(self, u: int) -> frozenset[int]:
        i = self.level[u]
        return frozenset(w for w in self.graph.neighbours(u) if self.level[w] == i)

    def level_edges(self, i: int) -> frozenset[Edge]:
        g = self.graph
        return frozenset(_norm(u, w) for u in self.V(i) for w in g.neighbours(u) if u < w and self.level[w] == i)

    def level_non_edges(self, i: int) -> list[Edge]:
        g = self.graph
        return [(a, b) for a, b in combinations(sorted(self.V(i)), 2) if not g.has_edge(a, b)]

    def is_below(self, x: int, y: int, a: int, b: int) -> bool:
        """Whether x,y (level i) lie below a,b (level i+1)."""
        g = self.graph
        return x != y and g.has_edge(x, a) and g.has_edge(y, b)


def layer(g: RegularGraph, v: int) -> Layering:
    n = g.n
    level = [-1] * (n + 1)
    level[v] = 0
    levels = [[v]]
    frontier = [v]
    while frontier:
        nxt = []
        depth = len(levels)
        for u in frontier:
            for w in g.neighbours(u):
                if level[w] < 0:
                    level[w] = depth
                    nxt.append(w)
        if nxt:
            levels.append(nxt)
        frontier = nxt
    dprime = [0] * (n + 1)
    indeg = [0] * (n + 1)
    outdeg = [0] * (n + 1)
    for u in range(1, n + 1):
        lu = level[u]
        if lu < 0:
            continue
        for w in g.neighbours(u):
            lw = level[w]
            if lw == lu:
                dprime[u] += 1
            elif lw == lu - 1:
                indeg[u] += 1
            else:
                outdeg[u] += 1
    return Layering(
        root=v,
        levels=tuple(frozenset(s) for s in levels),
        level=tuple(level),
        dprime=tuple(dprime),
        indeg=tuple(indeg),
        outdeg=tuple(outdeg),
        graph=g,
    )


def iter_pairs(items: Iterable[int]) -> Iterator[Edge]:
    return combinations(sorted(items), 2)

"""Exhaustive enumeration of labelled regular graphs and their switch graph.

Graphs are handled as integer edge masks over the pairs of 1..n while
enumerating; the meta-graph has one node per labelled d-regular graph and
an edge between two graphs one triangle switch apart.  Every such edge is
found from its DeltaPlus side, since the inverse of a DeltaMinus is a
DeltaPlus.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, NamedTuple

from .graph import GraphError, ParityViolation, RegularGraph, components, cycle, disjoint_union, key
from .moves import enumerate_delta_switches

# (d, largest n) pairs that the exhaustive tools accept
WHITELIST = {3: 10, 4: 9, 2: 14, 1: 12, 0: 12}
# beyond this many vertices 2-regular graphs are checked on one labelling per cycle type
D2_LABELLED_MAX = 10


class Empty(GraphError):
    pass


class OutOfRange(ValueError):
    pass


class NotTwoRegular(GraphError):
    pass


def in_whitelist(n: int, d: int) -> bool:
    return d in WHITELIST and n <= WHITELIST[d]


def _check(n: int, d: int) -> None:
    if (n * d) % 2:
        raise ParityViolation(f"no {d}-regular graph on {n} vertices: n*d is odd")
    if n < d + 1:
        raise Empty(f"no {d}-regular graph on {n} < {d + 1} vertices")


class _Pairs:
    """Bit positions of the pairs uv, 1 <= u < v <= n."""

    def __init__(self, n: int):
        self.n = n
        self.bit = [[0] * (n + 1) for _ in range(n + 1)]
        self.pairs = []
        for i, (u, v) in enumerate(combinations(range(1, n + 1), 2)):
            self.bit[u][v] = self.bit[v][u] = 1 << i
            self.pairs.append((u, v))

    def adjacency(self, mask: int) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        i = 0
        while mask:
            if mask & 1:
                u, v = self.pairs[i]
                adj[u].append(v)
                adj[v].append(u)
            mask >>= 1
            i += 1
        return adj

    def graph(self, mask: int, d: int) -> RegularGraph:
        adj = self.adjacency(mask)
        return RegularGraph(self.n, d, [frozenset(a) for a in adj])

    def mask(self, g: RegularGraph) -> int:
        m = 0
        for u, v in g.edges():
            m |= self.bit[u][v]
        return m


def _first_choices(n: int, d: int) -> list[tuple[int, ...]]:
    return list(combinations(range(2, n + 1), d)) if n > 1 and d > 0 else [()]


def _enumerate_masks(n: int, d: int, first: tuple[int, ...] | None = None, triangle_free: bool = False) -> Iterator[int]:
    """Backtracking: vertex u picks its missing neighbours among later vertices."""
    P = _Pairs(n)
    deg = [0] * (n + 2)
    nbr = [0] * (n + 2)  # neighbour bitsets (bit u for vertex u)

    def rec(u: int, mask: int) -> Iterator[int]:
        if u > n:
            yield mask
            return
        need = d - deg[u]
        if need == 0:
            yield from rec(u + 1, mask)
            return
        cands = [w for w in range(u + 1, n + 1) if deg[w] < d]
        if len(cands) < need:
            return
        options = [first] if (u == 1 and first is not None) else combinations(cands, need)
        for choice in options:
            if triangle_free:
                s = 0
                for w in choice:
                    s |= 1 << w
                if any(nbr[w] & (nbr[u] | s) for w in choice):
                    continue
            for w in choice:
                deg[w] += 1
                nbr[w] |= 1 << u
                nbr[u] |= 1 << w
            deg[u] += need
            m = mask
            for w in choice:
                m |= P.bit[u][w]
            yield from rec(u + 1, m)
            deg[u] -= need
            for w in choice:
                deg[w] -= 1
                nbr[w] &= ~(1 << u)
                nbr[u] &= ~(1 << w)

    yield from rec(1, 0)


def enumerate_regular(n: int, d: int, triangle_free: bool = False) -> Iterator[RegularGraph]:
    """Every labelled d-regular graph on 1..n exactly once, in a fixed order."""
    _check(n, d)
    P = _Pairs(n)
    for mask in _enumerate_masks(n, d, triangle_free=triangle_free):
        yield P.graph(mask, d)


def count_regular(n: int, d: int) -> int:
    _check(n, d)
    return sum(1 for _ in _enumerate_masks(n, d))


def _delta_plus_targets(P: _Pairs, mask: int) -> Iterator[int]:
    """Masks one DeltaPlus away from `mask` (with repeats)."""
    adj = P.adjacency(mask)
    bit = P.bit
    for v in range(1, P.n + 1):
        nv = adj[v]
        for i, x in enumerate(nv):
            bx = bit[x]
            for w in nv[i + 1:]:
                if mask & bx[w]:
                    continue
                bw = bit[w]
                base = mask ^ bx[w]
                for y in adj[x]:
                    if y == v:
                        continue
                    by = bit[y]
                    b1 = base ^ bx[y]
                    for z in adj[w]:
                        if z == v or z == y or mask & by[z]:
                            continue
                        yield b1 ^ bw[z] ^ by[z]


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class MetaGraph:
    """Labelled d-regular graphs on 1..n joined by single triangle switches.

    `masks[i]` is the edge mask of node i (see :meth:`graph`); `component[i]`
    is the smallest node index in its component.  `edges` is kept only when
    requested (it is large).
    """

    n: int
    d: int
    masks: list[int]
    edge_count: int
    component: list[int]
    edges: set[tuple[int, int]] | None = field(default=None, repr=False)

    @property
    def node_count(self) -> int:
        return len(self.masks)

    @property
    def component_count(self) -> int:
        return len(set(self.component))

    def graph(self, i: int) -> RegularGraph:
        return _Pairs(self.n).graph(self.masks[i], self.d)

    def graphs(self) -> Iterator[RegularGraph]:
        P = _Pairs(self.n)
        for m in self.masks:
            yield P.graph(m, self.d)

    def keys(self) -> list[bytes]:
        return [key(g) for g in self.graphs()]

    def component_sizes(self) -> list[int]:
        sizes: dict[int, int] = {}
        for c in self.component:
            sizes[c] = sizes.get(c, 0) + 1
        return sorted(sizes.values(), reverse=True)


def _worker_masks(args):
    n, d, first = args
    return list(_enumerate_masks(n, d, first=first))


def _worker_edges(args):
    n, masks = args
    P = _Pairs(n)
    return [(m, t) for m in masks for t in set(_delta_plus_targets(P, m))]


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("TRICHAIN_THREADS", "1") or 1)
    return max(1, threads)


def _all_masks(n: int, d: int, threads: int) -> list[int]:
    if threads == 1 or d == 0:
        return list(_enumerate_masks(n, d))
    jobs = [(n, d, f) for f in _first_choices(n, d)]
    with ProcessPoolExecutor(threads) as ex:
        parts = list(ex.map(_worker_masks, jobs))
    return [m for part in parts for m in part]


def build_meta(n: int, d: int, keep_edges: bool = False, threads: int | None = None) -> MetaGraph:
    """The complete switch graph on labelled d-regular graphs of order n."""
    _check(n, d)
    threads = _threads(threads)
    P = _Pairs(n)
    masks = _all_masks(n, d, threads)
    index = {m: i for i, m in enumerate(masks)}
    uf = _UnionFind(len(masks))
    seen: set[tuple[int, int]] = set()
    if threads == 1:
        pairs = ((m, t) for m in masks for t in _delta_plus_targets(P, m))
    else:
        chunk = max(1, len(masks) // (threads * 8))
        jobs = [(n, masks[i:i + chunk]) for i in range(0, len(masks), chunk)]
        ex = ProcessPoolExecutor(threads)
        pairs = (p for part in ex.map(_worker_edges, jobs) for p in part)
    try:
        for m, t in pairs:
            i, j = index[m], index[t]
            e = (i, j) if i < j else (j, i)
            if e not in seen:
                seen.add(e)
                uf.union(i, j)
    finally:
        if threads > 1:
            ex.shutdown()
    comp = [uf.find(i) for i in range(len(masks))]
    return MetaGraph(n, d, masks, len(seen), comp, seen if keep_edges else None)


def is_connected(meta: MetaGraph) -> bool:
    return meta.component_count == 1


# -- 2-regular graphs ---------------------------------------------------------------


class CycleClass(NamedTuple):
    """Numbers of cycles with length 1 and 2 mod 3."""

    c1: int
    c2: int

    def __str__(self) -> str:
        return f"({self.c1},{self.c2})"


def cycle_class(g: RegularGraph) -> CycleClass:
    if g.d != 2:
        raise NotTwoRegular(f"cycle classes are defined for 2-regular graphs, got d = {g.d}")
    lengths = [len(c) for c in components(g)]
    return CycleClass(sum(1 for k in lengths if k % 3 == 1), sum(1 for k in lengths if k % 3 == 2))


def cycle_types(n: int, smallest: int = 3) -> Iterator[tuple[int, ...]]:
    """Partitions of n into parts >= 3, parts non-increasing."""

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for k in range(min(rest, cap), smallest - 1, -1):
            for tail in rec(rest - k, k):
                yield (k,) + tail

    yield from rec(n, n)


def cycle_type_graph(parts: tuple[int, ...]) -> RegularGraph:
    return disjoint_union(*[cycle(k) for k in parts])


def classes_from_partitions(n: int) -> set[CycleClass]:
    return {CycleClass(sum(1 for k in p if k % 3 == 1), sum(1 for k in p if k % 3 == 2)) for p in cycle_types(n)}


def _classes_preserved_on_types(n: int) -> bool:
    # moves commute with relabelling, so one labelling per cycle type covers every move
    for parts in cycle_types(n):
        g = cycle_type_graph(parts)
        c = cycle_class(g)
        for m in enumerate_delta_switches(g):
            if cycle_class(g.with_edge_change(m.removed(), m.added())) != c:
                return False
    return True


def verify_d2_classification(n: int) -> dict:
    """Connectivity of the 2-regular switch graph against the cycle-class theory.

    For n up to D2_LABELLED_MAX the meta-graph is built in full.  Above
    that the class-preservation check runs on one labelling per cycle type,
    and disconnection follows from there being two or more classes.
    """
    if n < 3:
        raise Empty("2-regular graphs need n >= 3")
    if n > WHITELIST[2]:
        raise OutOfRange(f"n = {n} is outside the 2-regular range (n <= {WHITELIST[2]})")
    theory_classes = classes_from_partitions(n)
    expected = n in (3, 6, 7)
    report = {"n": n, "d": 2}
    if n <= D2_LABELLED_MAX:
        meta = build_meta(n, 2, keep_edges=True)
        graphs = list(meta.graphs())
        cls = [cycle_class(g) for g in graphs]
        preserved = all(cls[i] == cls[j] for i, j in meta.edges)
        comp_classes: dict[int, set[CycleClass]] = {}
        for c, k in zip(meta.component, cls):
            comp_classes.setdefault(c, set()).add(k)
        connected = meta.component_count == 1
        report.update(
            mode="labelled",
            node_count=meta.node_count,
            edge_count=meta.edge_count,
            component_count=meta.component_count,
            classes_per_component_max=max(len(s) for s in comp_classes.values()),
        )
        observed = set(cls)
    else:
        preserved = _classes_preserved_on_types(n)
        observed = theory_classes
        if len(observed) >= 2 and preserved:
            connected = False
        else:
            raise OutOfRange(f"n = {n} cannot be decided from cycle types alone")
        report.update(mode="cycle-types", cycle_types=len(list(cycle_types(n))))
    report.update(
        classes=sorted([list(c) for c in observed]),
        classes_match_partitions=observed == theory_classes,
        class_preserved=preserved,
        connected=connected,
        expected_connected=expected,
    )
    ok = preserved and connected == expected and observed == theory_classes
    report["verdict"] = "PASS" if ok else "FAIL"
    return report


def verify(n: int, d: int, threads: int | None = None) -> dict:
    """Build the switch graph for (n, d) and compare its connectivity with theory.

    Theory: connected for d >= 3; for d = 2 connected iff n in {3, 6, 7};
    no edges for d = 1; a single node for d = 0.
    """
    if not in_whitelist(n, d):
        raise OutOfRange(f"(n, d) = ({n}, {d}) is outside the enumeration range")
    if d == 2:
        return verify_d2_classification(n)
    meta = build_meta(n, d, threads=threads)
    report = {
        "n": n,
        "d": d,
        "node_count": meta.node_count,
        "edge_count": meta.edge_count,
        "component_count": meta.component_count,
        "connected": meta.component_count == 1,
    }
    if d >= 3:
        ok = meta.component_count == 1
    elif d == 1:
        ok = meta.edge_count == 0
    else:
        ok = meta.node_count == 1
    report["verdict"] = "PASS" if ok else "FAIL"
    return report


# -- fragments ----------------------------------------------------------------------


def triangle_free_fragments(n: int, d: int) -> Iterator[RegularGraph]:
    if not d + 1 < n < 2 * (d + 1):
        raise ValueError(f"n = {n} is not a fragment order for d = {d}")
    yield from enumerate_regular(n, d, triangle_free=True)


def is_complete_bipartite_labelling(g: RegularGraph) -> bool:
    """g is K_{d,d} on some split of its vertices into two halves."""
    if g.n != 2 * g.d:
        return False
    side = set(g.neighbours(min(g.neighbours(1))))  # the side containing vertex 1
    other = set(g.vertices()) - side
    return len(side) == g.d and all(g.neighbours(u) == frozenset(other) for u in side)


def fragment_structure(d: int) -> dict:
    """Triangle-free fragments of degree d, grouped by order, with their shapes."""
    import networkx as nx

    from .graph import construct_T

    out = {}
    T = None
    for n in range(d + 2, 2 * d + 2):
        if (n * d) % 2:
            continue
        graphs = list(triangle_free_fragments(n, d))
        entry = {"count": len(graphs)}
        if n == 2 * d:
            entry["all_complete_bipartite"] = all(is_complete_bipartite_labelling(g) for g in graphs)
        if n == 2 * d + 1 and d % 2 == 0:
            T = T or _nx(construct_T(d))
            entry["all_T"] = all(nx.is_isomorphic(_nx(g), T) for g in graphs)
        out[n] = entry
    return out


def _nx(g: RegularGraph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


def graph_from_mask(n: int, d: int, mask: int) -> RegularGraph:
    return _Pairs(n).graph(mask, d)


def mask_of(g: RegularGraph) -> int:
    return _Pairs(g.n).mask(g)


__all__ = [
    "CycleClass",
    "Empty",
    "MetaGraph",
    "NotTwoRegular",
    "OutOfRange",
    "WHITELIST",
    "build_meta",
    "classes_from_partitions",
    "count_regular",
    "cycle_class",
    "cycle_type_graph",
    "cycle_types",
    "enumerate_regular",
    "fragment_structure",
    "graph_from_mask",
    "in_whitelist",
    "is_complete_bipartite_labelling",
    "is_connected",
    "mask_of",
    "triangle_free_fragments",
    "verify",
    "verify_d2_classification",
]

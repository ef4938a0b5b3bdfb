"""Triangle-switch paths between fragments.

A fragment is a d-regular graph with d+1 < n < 2(d+1); it is connected with
diameter two.  Paths are built from a plain switch path (best-first search
on the symmetric difference with the target).  Every switch on a fragment
either has a cross edge, in which case it is a flip and is expanded into at
most three triangle switches, or its four vertices induce two disjoint
edges, in which case a common neighbour turns it into one DeltaPlus.
"""

from __future__ import annotations

import heapq
from itertools import combinations

from ..graph import RegularGraph, is_fragment, key
from ..moves import (
    Move,
    MoveCertificate,
    MoveKind,
    applicable,
    certificate,
    delta_minus,
    delta_plus,
    flip,
    switch,
)
from .trace import InternalContradiction, Precondition, StepTrace


def _has_triangle_at(g: RegularGraph, a: int) -> bool:
    na = g.neighbours(a)
    return any(na & g.neighbours(b) for b in na)


def triangle_candidates(g: RegularGraph, a: int, b: int):
    """DeltaPlus moves creating the triangle a, b, b_j across an induced 4-cycle.

    The 4-cycle is a-b-b_j-a_i; the move runs along a_k-a-b-b_j-a_i for
    a_k another neighbour of a not adjacent to a_i.  Edges at b are kept.
    """
    A = sorted(g.neighbours(a) - {b})
    B = sorted(g.neighbours(b) - {a})
    for bj in B:
        if g.has_edge(a, bj):
            continue
        for ai in A:
            if not g.has_edge(ai, bj) or g.has_edge(ai, b):
                continue
            for ak in A:
                if ak == ai or g.has_edge(ai, ak):
                    continue
                m = delta_plus(b, a, bj, ak, ai)
                if applicable(g, m):
                    yield m


def triangle_at(g: RegularGraph, a: int, b: int) -> StepTrace:
    """At most one DeltaPlus after which some triangle contains `a`."""
    if not is_fragment(g):
        raise Precondition("graph is not a fragment")
    if not g.has_edge(a, b):
        raise Precondition(f"{a}{b} is not an edge")
    if _has_triangle_at(g, a):
        return StepTrace(result=g)
    for m in triangle_candidates(g, a, b):
        h = g.with_edge_change(m.removed(), m.added())
        return StepTrace([m], ["triangle"], h)
    raise InternalContradiction(f"no triangle-creating switch at {a} along {a}{b}")


def _flip_vertices(fl: Move) -> tuple[int, int, int, int]:
    # Flip(x, y, w, z) with cross edge wy, written as v1..v4 where the flip
    # deletes v1v2, v3v4, inserts v1v3, v2v4 and v1v4 is an edge
    x, y, w, z = fl.vertices
    return y, x, z, w


def _expansions(g: RegularGraph, v1: int, v2: int, v3: int, v4: int):
    S = {v1, v2, v3, v4}
    N = {i: g.neighbours(u) - S for i, u in ((1, v1), (2, v2), (3, v3), (4, v4))}
    for u in sorted(N[1] & N[2]):
        yield [delta_minus(u, v1, v2, v3, v4)]
    for u in sorted(N[1] & N[3]):
        yield [delta_plus(u, v1, v3, v2, v4)]
    if g.has_edge(v2, v3):
        for u in sorted(N[2] & N[3]):
            yield [delta_minus(u, v3, v2, v1, v4), delta_plus(u, v2, v3, v1, v4)]
    for u in sorted(N[2] & N[4]):
        yield [delta_plus(u, v2, v4, v1, v3)]
    for u in sorted(N[3] & N[4]):
        yield [delta_minus(u, v4, v3, v2, v1)]
    for u1 in sorted(N[2] & N[3]):
        if g.has_edge(u1, v1):
            continue
        for u2 in sorted(N[3]):
            if u2 == u1 or not g.has_edge(u1, u2) or g.has_edge(u2, v4):
                continue
            yield [
                delta_minus(v3, u1, u2, v1, v4),
                delta_minus(u1, v1, v2, v3, v4),
                delta_plus(v3, u1, u2, v1, v4),
            ]


def flip_as_delta_switches(g: RegularGraph, fl: Move) -> StepTrace:
    """Perform the flip `fl` on a fragment with one to three triangle switches."""
    if not is_fragment(g):
        raise Precondition("graph is not a fragment")
    if fl.kind is not MoveKind.FLIP or not applicable(g, fl):
        raise Precondition(f"{fl} is not an applicable flip")
    goal = g.with_edge_change(fl.removed(), fl.added())
    for seq in _expansions(g, *_flip_vertices(fl)):
        h = g
        for m in seq:
            if not applicable(h, m):
                break
            h = h.with_edge_change(m.removed(), m.added())
        else:
            if h == goal:
                return StepTrace(list(seq), ["fragment-flip"] * len(seq), h)
    raise InternalContradiction(f"no triangle-switch expansion for {fl}")


def _switches(g: RegularGraph):
    edges = g.edges()
    for (a, b), (c, e) in combinations(edges, 2):
        if len({a, b, c, e}) < 4:
            continue
        # delete ab, ce; insert ac, be  or  ae, bc
        if not g.has_edge(a, c) and not g.has_edge(b, e):
            yield switch(a, b, c, e)
        if not g.has_edge(a, e) and not g.has_edge(b, c):
            yield switch(a, b, e, c)


def switch_path(x: RegularGraph, y: RegularGraph, max_states: int = 200_000) -> list[Move]:
    """Plain switches taking `x` to `y` (greedy best-first on |E_x ^ E_y|)."""
    target = set(y.edges())

    def dist(g: RegularGraph) -> int:
        return len(target.symmetric_difference(g.edges()))

    start = x.key()
    parent: dict[bytes, tuple[bytes, Move] | None] = {start: None}
    graphs = {start: x}
    heap = [(dist(x), 0, start)]
    tick = 0
    goal = y.key()
    while heap:
        _, _, k = heapq.heappop(heap)
        if k == goal:
            path = []
            while parent[k] is not None:
                k, m = parent[k]
                path.append(m)
            return path[::-1]
        g = graphs[k]
        for m in _switches(g):
            h = g.with_edge_change(m.removed(), m.added())
            hk = h.key()
            if hk in parent:
                continue
            parent[hk] = (k, m)
            graphs[hk] = h
            tick += 1
            heapq.heappush(heap, (dist(h), tick, hk))
        if len(parent) > max_states:
            break
    raise InternalContradiction("switch search exhausted its state budget")


def switch_as_delta_switches(g: RegularGraph, sw: Move) -> StepTrace:
    """Realise a switch between fragments by triangle switches."""
    x, y, w, z = sw.vertices
    if g.has_edge(w, y):
        return flip_as_delta_switches(g, flip(x, y, w, z))
    if g.has_edge(x, z):
        return flip_as_delta_switches(g, flip(y, x, z, w))
    # xy, wz induce 2K2; x and w are at distance two
    for c in sorted(g.neighbours(x) & g.neighbours(w)):
        m = delta_plus(c, x, w, y, z)
        if applicable(g, m):
            return StepTrace([m], ["fragment-switch"], g.with_edge_change(m.removed(), m.added()))
    raise InternalContradiction(f"{sw}: endpoints {x},{w} have no common neighbour")


def connect_fragments(x: RegularGraph, y: RegularGraph) -> MoveCertificate:
    if (x.n, x.d) != (y.n, y.d):
        raise Precondition("graphs differ in n or d")
    if not (is_fragment(x) and is_fragment(y)):
        raise Precondition("both graphs must be fragments")
    if x.d < 3:
        raise Precondition("fragments are handled for d >= 3")
    trace = fragment_trace(x, y)
    cert = certificate(x, trace.moves, trace.tags)
    if cert.end_key != key(y):
        raise InternalContradiction("fragment path does not end at the target")
    return cert


def fragment_trace(x: RegularGraph, y: RegularGraph) -> StepTrace:
    out = StepTrace(result=x)
    g = x
    for sw in switch_path(x, y):
        t = switch_as_delta_switches(g, sw)
        out.extend(t)
        g = t.result
    return out

"""Grow the component of a root vertex v into a (d+1)-clique.

Every operation keeps N(v) fixed and works on the level structure
V1 = N(v), V2, V3, ... of v's component.  E1 denotes the edges inside V1;
the driver :func:`build_clique_component` never lets |E1| go down and every
round either adds an E1 edge or makes measurable progress towards adding
one (fewer in-degree surpluses in V2, or a missing edge inside V2).
"""

from __future__ import annotations

from typing import Callable

from ..graph import Layering, RegularGraph, components, layer
from ..moves import Move, applicable, delta_minus, delta_plus, enumerate_delta_switches
from .trace import InternalContradiction, NoWitness, Precondition, Runner, StepTrace

Observer = Callable[[RegularGraph, Layering, str], None]


def _after(g: RegularGraph, m: Move) -> RegularGraph:
    return g.with_edge_change(m.removed(), m.added())


def _check_root(g: RegularGraph, v: int) -> None:
    if not 1 <= v <= g.n:
        raise Precondition(f"root {v} is not a vertex")


def _V2_in_triangle(g: RegularGraph, L: Layering) -> bool:
    for a in L.V(2):
        na = g.neighbours(a)
        if any(na & g.neighbours(b) for b in na):
            return True
    return False


def _keeps_root_and_E1(L: Layering, g: RegularGraph, m: Move, grow_ok: bool = False) -> bool:
    """Whether `m` avoids v and leaves E1 alone (or, with `grow_ok`, only adds to it)."""
    v = L.root
    V1 = L.V(1)
    for u, w in m.removed():
        if v in (u, w) or (u in V1 and w in V1):
            return False
    for u, w in m.added():
        if v in (u, w) or (not grow_ok and u in V1 and w in V1):
            return False
    return True


def _triangle_moves_in_component(g: RegularGraph, L: Layering, grow_ok: bool):
    """DeltaPlus moves that put a V2 vertex in a triangle without touching v.

    Each runs along a_k-a-b-b_j-a_i around an induced 4-cycle a-b-b_j-a_i.
    """
    for a in sorted(L.V(2)):
        na = g.neighbours(a)
        for b in sorted(na):
            A = sorted(na - {b})
            for bj in sorted(g.neighbours(b) - {a}):
                if g.has_edge(a, bj):
                    continue
                for ai in A:
                    if not g.has_edge(ai, bj) or g.has_edge(ai, b):
                        continue
                    for ak in A:
                        if ak == ai or g.has_edge(ai, ak):
                            continue
                        m = delta_plus(b, a, bj, ak, ai)
                        if applicable(g, m) and _keeps_root_and_E1(L, g, m, grow_ok):
                            yield m


def _prepare_triangle(g: RegularGraph, L: Layering) -> Move | None:
    for grow_ok in (False, True):
        m = next(_triangle_moves_in_component(g, L, grow_ok), None)
        if m is not None:
            return m
    C = L.component
    for grow_ok in (False, True):
        for cand in enumerate_delta_switches(g):
            if not set(cand.vertices) <= C or not _keeps_root_and_E1(L, g, cand, grow_ok):
                continue
            h = _after(g, cand)
            if _V2_in_triangle(h, layer(h, L.root)):
                return cand
    return None


def absorb_component(g: RegularGraph, v: int) -> StepTrace:
    """Merge v's fragment component with another component.

    Needs: C = component(v) is a fragment and some other component exists.
    At most one DeltaPlus creates a triangle through a V2 vertex, then one
    DeltaMinus cuts that triangle and an edge of another component.  N(v)
    is unchanged, no E1 edge is lost, and the new component has at least
    2d+3 vertices.  The preparatory switch avoids E1 when it can; on some
    fragments (K_{3,3} rooted anywhere) every such switch adds an E1 edge.
    """
    _check_root(g, v)
    L = layer(g, v)
    C = L.component
    d = g.d
    if not (d + 1 < len(C) < 2 * (d + 1)):
        raise Precondition("the root's component is not a fragment")
    others = [c for c in components(g) if v not in c]
    if not others:
        raise Precondition("no other component to merge with")
    run = Runner(g)
    if not _V2_in_triangle(g, L):
        m = _prepare_triangle(g, L)
        if m is None:
            raise NoWitness("no triangle through V2 can be created")
        run.do(m, "biggerC")
        L = layer(run.g, v)
    g = run.g
    V1, V2 = L.V(1), L.V(2)
    other = set(others[0])
    yp, zp = next(e for e in g.edges() if e[0] in other)
    chosen = None
    for a in sorted(V2):
        na = g.neighbours(a)
        for p in sorted(na):
            for q in sorted(na & g.neighbours(p)):
                if q <= p:
                    continue
                if p in V2:
                    x, z = p, q
                elif q in V2:
                    x, z = q, p
                else:
                    x, z = p, q
                chosen = (z, x, a)
                break
            if chosen:
                break
        if chosen:
            break
    if chosen is None:
        raise InternalContradiction("no triangle through V2 after the preparatory switch")
    z, x, a = chosen
    E1 = L.level_edges(1)
    run.do(delta_minus(z, x, a, yp, zp), "biggerC")
    L2 = layer(run.g, v)
    if L2.V(1) != V1 or L2.level_edges(1) != E1:
        raise InternalContradiction("merging changed N(v) or E1")
    if len(L2.component) < 2 * d + 3:
        raise InternalContradiction("merged component is too small")
    if not L2.level_non_edges(2):
        raise InternalContradiction("merged component has a complete V2")
    return run.trace


def fix_isolated_in_V1(g: RegularGraph, v: int, u: int) -> StepTrace:
    """Give the V1 vertex u (no neighbour inside V1) one V1 neighbour.

    One or two DeltaPlus moves; E1 gains exactly one edge at u and loses none.
    """
    _check_root(g, v)
    L = layer(g, v)
    if len(L.component) < 2 * (g.d + 1):
        raise Precondition("the root's component has fewer than 2(d+1) vertices")
    if u not in L.V(1) or L.dprime[u] != 0:
        raise Precondition(f"{u} is not an isolated vertex of V1")
    run = Runner(g)
    V2 = L.V(2)
    out_u = L.Out(u)
    B = V2 - out_u
    indeg = L.indeg

    for x in sorted(out_u):
        if indeg[x] < 2:
            continue
        for z in sorted(V2 - {x}):
            if g.has_edge(x, z):
                continue
            y = min(L.In(z))
            if y == u:
                w = min(L.In(x) - {u})
                run.do(delta_plus(v, u, w, z, x), "P0")
            else:
                run.do(delta_plus(v, u, y, x, z), "P0")
            return run.trace

    if B:
        for x in sorted(B):
            if indeg[x] < 2:
                continue
            for z in sorted(out_u):
                if g.has_edge(x, z):
                    continue
                w = min(L.In(x))
                run.do(delta_plus(v, u, w, z, x), "P0")
                return run.trace
        if all(indeg[a] == 1 for a in V2):
            for x in sorted(out_u):
                for z in sorted(B):
                    if g.has_edge(x, z):
                        continue
                    (w,) = L.In(z)
                    run.do(delta_plus(v, u, w, x, z), "P0")
                    return run.trace
            # out_u and B are complete to each other; first open one pair
            xs = sorted(out_u)
            for i, x in enumerate(xs):
                for xp in xs[i + 1:]:
                    for z in sorted(B):
                        for zp in sorted(B - {z}):
                            if L.In(z) == L.In(zp):
                                continue
                            first = delta_plus(u, x, xp, z, zp)
                            if not applicable(g, first):
                                continue
                            run.do(first, "P0")
                            (w,) = L.In(z)
                            run.do(delta_plus(v, u, w, x, z), "P0")
                            return run.trace
    raise NoWitness(f"no switch adds a V1 edge at {u}")


def relocate_pair(g: RegularGraph, v: int, a: int, b: int) -> StepTrace:
    """Non-adjacent a, b in V2 share their only V1 neighbour x: move b under another vertex."""
    _check_root(g, v)
    L = layer(g, v)
    V1 = L.V(1)
    if any(L.dprime[u] == 0 for u in V1):
        raise Precondition("V1 has a vertex without V1 neighbours")
    if a not in L.V(2) or b not in L.V(2) or g.has_edge(a, b):
        raise Precondition(f"{a}, {b} must be non-adjacent V2 vertices")
    ia, ib = L.In(a), L.In(b)
    if len(ia) != 1 or ia != ib:
        raise Precondition(f"{a} and {b} do not share a single V1 neighbour")
    (x,) = ia
    for w in sorted(V1 - {x}):
        if g.has_edge(x, w):
            continue
        for y in sorted(g.neighbours(w) & V1):
            m = delta_plus(v, x, w, b, y)
            if applicable(g, m):
                run = Runner(g)
                run.do(m, "P1")
                return run.trace
    raise NoWitness(f"no way to move {b} off {x}")


def insert_V1_edge_below(g: RegularGraph, v: int, a: int, b: int, x: int, y: int) -> StepTrace:
    """x, y in V1 non-adjacent and below the V2 non-edge ab: swap xy in for ab."""
    _check_root(g, v)
    L = layer(g, v)
    V1, V2 = L.V(1), L.V(2)
    if not ({x, y} <= V1 and {a, b} <= V2):
        raise Precondition("x, y must lie in V1 and a, b in V2")
    if g.has_edge(a, b) or g.has_edge(x, y) or not L.is_below(x, y, a, b):
        raise Precondition(f"{x}{y} is not an open pair below the non-edge {a}{b}")
    run = Runner(g)
    run.do(delta_plus(v, x, y, a, b), "P2")
    return run.trace


def open_V1_nonedge(g: RegularGraph, v: int, x: int, y: int) -> StepTrace:
    """Delete the E1 edge xy with one DeltaMinus at v; |E1| stays put."""
    _check_root(g, v)
    L = layer(g, v)
    V1 = L.V(1)
    if not ({x, y} <= V1 and g.has_edge(x, y)):
        raise Precondition(f"{x}{y} is not an edge inside V1")
    if L.outdeg[y] < 1:
        raise Precondition(f"{y} has no neighbour in V2")
    for w in sorted(V1 - {x, y}):
        if g.has_edge(y, w):
            continue
        if g.has_edge(x, w):
            W = g.neighbours(w) - {v, x}
            X = g.neighbours(x) - {v, w, y}
        else:
            W = g.neighbours(w) - {v}
            X = g.neighbours(x) - {v, y}
        for z in sorted(W - X):
            m = delta_minus(v, y, x, w, z)
            if applicable(g, m):
                run = Runner(g)
                run.do(m, "P3")
                return run.trace
    raise NoWitness(f"no switch removes {x}{y} from E1")


def _G2_complete(L: Layering) -> bool:
    return not L.level_non_edges(2)


def reduce_indegree(g: RegularGraph, v: int, u: int) -> StepTrace:
    """V2 complete: lower id(u) by one, pulling a deeper vertex into V2.

    Handles u with no V3 neighbour (it trades places with a V3 vertex under
    a V2 neighbour) and u with one (it trades through that neighbour).
    """
    _check_root(g, v)
    L = layer(g, v)
    V2 = L.V(2)
    ell = len(V2)
    if u not in V2 or L.indeg[u] < 2:
        raise Precondition(f"{u} is not a V2 vertex with in-degree >= 2")
    if not _G2_complete(L):
        raise Precondition("V2 does not span a clique")
    if not 1 <= ell <= g.d - 1:
        raise Precondition(f"|V2| = {ell} is outside 1..d-1")
    deep = lambda y: L.level[y] >= 3
    run = Runner(g)
    if L.outdeg[u] == 0:
        B = {w for w in V2 if L.outdeg[w] > 0}
        for x in sorted(L.V(3)):
            for w in sorted(g.neighbours(x) & B):
                for y in sorted(y for y in g.neighbours(x) if deep(y) and y != w):
                    for z in sorted(L.In(u)):
                        m = delta_plus(w, u, x, z, y)
                        if applicable(g, m):
                            run.do(m, "L1")
                            return run.trace
    else:
        for w in sorted(L.Out(u)):
            for x in sorted(g.neighbours(w)):
                if not deep(x) or x == u or g.has_edge(u, x):
                    continue
                for y in sorted(y for y in g.neighbours(x) if deep(y) and y != w):
                    for z in sorted(L.In(u)):
                        m = delta_plus(w, u, x, z, y)
                        if applicable(g, m):
                            run.do(m, "L1")
                            return run.trace
    raise NoWitness(f"no switch lowers the in-degree of {u}")


def break_G2_via_V4(g: RegularGraph, v: int) -> StepTrace:
    """V2 complete with |V2| >= 2 and V4 non-empty: remove one V2 edge."""
    _check_root(g, v)
    L = layer(g, v)
    V2, V3, V4 = L.V(2), L.V(3), L.V(4)
    if not _G2_complete(L) or len(V2) < 2 or not V3 or not V4:
        raise Precondition("needs a complete V2 of size >= 2 and non-empty V3, V4")
    run = Runner(g)
    deep = lambda y: L.level[y] >= 4
    for w in sorted(V4):
        for x in sorted(y for y in g.neighbours(w) if deep(y)):
            for u in sorted(L.In(w)):
                for y in sorted(L.In(u)):
                    for z in sorted(V2 - {y}):
                        m = delta_plus(u, w, y, x, z)
                        if applicable(g, m):
                            run.do(m, "L2")
                            return run.trace
    for u in sorted(V4):
        S = g.neighbours(u)
        for w in sorted(S):
            for z in sorted(V2):
                if g.has_edge(w, z):
                    continue
                for x in sorted(S - {w}):
                    for y in sorted((g.neighbours(x) & V2) - {z}):
                        m = delta_plus(x, u, y, w, z)
                        if applicable(g, m):
                            run.do(m, "L2")
                            return run.trace
    raise NoWitness("no switch opens V2 through V4")


def _opens_one_V2_edge(L: Layering, h: RegularGraph) -> bool:
    Lh = layer(h, L.root)
    return (
        Lh.V(1) == L.V(1)
        and Lh.level_edges(1) == L.level_edges(1)
        and bool(Lh.level_non_edges(2))
    )


def break_G2_no_V4(g: RegularGraph, v: int) -> StepTrace:
    """V2 complete, every V2 vertex has one V1 neighbour, V4 empty: remove one V2 edge.

    The main search cuts a triangle x, y, z (x, y in V2) against a V3 edge wu
    with xw and yu absent.  When |V2| = 2 such a triangle need not exist; a
    general search over triangle switches with the same effect is used then.
    """
    _check_root(g, v)
    L = layer(g, v)
    V2, V3 = L.V(2), L.V(3)
    ell = len(V2)
    if not _G2_complete(L) or not 2 <= ell <= g.d - 1:
        raise Precondition("needs a complete V2 with 2 <= |V2| <= d-1")
    if any(L.indeg[a] != 1 for a in V2) or not V3 or L.V(4):
        raise Precondition("needs in-degree one throughout V2, V3 non-empty and V4 empty")
    run = Runner(g)
    for w in sorted(V3, key=lambda w: (L.indeg[w], w)):
        for x in sorted(V2 - g.neighbours(w)):
            for u in sorted(g.neighbours(w) & V3):
                for y in sorted(V2 - g.neighbours(u) - {x}):
                    for z in sorted((g.neighbours(x) & g.neighbours(y)) - {w, u}):
                        m = delta_minus(z, x, y, w, u)
                        if applicable(g, m):
                            run.do(m, "L3")
                            return run.trace
    for m in enumerate_delta_switches(g):
        if v in m.vertices or not _keeps_root_and_E1(L, g, m):
            continue
        if _opens_one_V2_edge(L, _after(g, m)):
            run.do(m, "L3")
            return run.trace
    raise NoWitness("no triangle switch opens V2 without V4")


def build_clique_component(
    g: RegularGraph,
    v: int,
    observer: Observer | None = None,
    max_rounds: int | None = None,
) -> tuple[RegularGraph, StepTrace]:
    """Triangle switches after which N[v] is a (d+1)-clique component.

    N(v) is left unchanged.  `observer(graph, layering, tag)` is called at
    the start of every round and once more at the end.
    """
    _check_root(g, v)
    d, n = g.d, g.n
    if d < 3:
        raise Precondition("clique building needs d >= 3")
    if n < 2 * (d + 1):
        raise Precondition(f"clique building needs n >= {2 * (d + 1)}")
    nv = g.neighbours(v)
    if max_rounds is None:
        max_rounds = 40 * d ** 3 + 8 * n * d + 100
    run = Runner(g)
    l1_streak = 0
    for _ in range(max_rounds):
        G = run.g
        L = layer(G, v)
        C = L.component
        if len(C) == d + 1:
            if observer:
                observer(G, L, "done")
            if G.neighbours(v) != nv:
                raise InternalContradiction("N(v) changed")
            return G, run.trace
        if observer:
            observer(G, L, "round")
        if is_fragment_size(len(C), d):
            run.absorb(absorb_component(G, v))
            continue
        isolated = [u for u in sorted(L.V(1)) if L.dprime[u] == 0]
        if isolated:
            run.absorb(fix_isolated_in_V1(G, v, isolated[0]))
            continue
        non_edges = L.level_non_edges(2)
        if non_edges:
            l1_streak = 0
            a, b = non_edges[0]
            _step_three(run, v, a, b)
            continue
        ell = L.ell
        if L.V(4) and ell >= 2:
            run.absorb(break_G2_via_V4(G, v))
            l1_streak = 0
        elif not L.V(4) and all(L.indeg[a] == 1 for a in L.V(2)):
            run.absorb(break_G2_no_V4(G, v))
            l1_streak = 0
        else:
            u = min(a for a in L.V(2) if L.indeg[a] >= 2)
            run.absorb(reduce_indegree(G, v, u))
            l1_streak += 1
            if l1_streak > d * n:
                raise InternalContradiction("in-degree reduction does not terminate")
    raise InternalContradiction("clique building exceeded its round budget")


def is_fragment_size(size: int, d: int) -> bool:
    return d + 1 < size < 2 * (d + 1)


def _step_three(run: Runner, v: int, a: int, b: int) -> None:
    """Turn the V2 non-edge ab into a new E1 edge (one to three moves)."""
    L = layer(run.g, v)

    def pairs(L: Layering):
        return [(x, y) for x in sorted(L.In(a)) for y in sorted(L.In(b)) if x != y]

    P = pairs(L)
    if not P:
        run.absorb(relocate_pair(run.g, v, a, b))
        L = layer(run.g, v)
        P = pairs(L)
        if not P:
            raise InternalContradiction("relocation left no pair below the non-edge")
    open_pairs = [(x, y) for x, y in P if not run.g.has_edge(x, y)]
    if open_pairs:
        x, y = open_pairs[0]
    else:
        x, y = P[0]
        run.absorb(open_V1_nonedge(run.g, v, x, y))
    run.absorb(insert_V1_edge_below(run.g, v, a, b, x, y))

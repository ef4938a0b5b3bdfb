"""Triangle-switch paths between any two graphs with the same n and d >= 3.

Both graphs are first turned into graphs where N[1] is a (d+1)-clique
component.  Then the clique of the start graph is swapped, one vertex at a
time, until its vertex set matches the clique of the target, and the rest
of the graph is handled recursively.  The target half is reversed at the
end.  Cycles (d = 2) are rearranged by adjacent transpositions.
"""

from __future__ import annotations

from ..graph import RegularGraph, components, induced, is_fragment, key
from ..moves import MoveCertificate, certificate, delta_minus, delta_plus, invert
from .clique import build_clique_component
from .fragments import fragment_trace
from .trace import InternalContradiction, Precondition, Runner, StepTrace


def swap_into_neighbourhood(g: RegularGraph, v: int, x: int, y: int) -> StepTrace:
    """With N[v] a clique component, replace x in N(v) by y from outside.

    One DeltaMinus against the smallest edge yz at y; afterwards v is
    adjacent to y and not to x.
    """
    nv = g.neighbours(v)
    if x not in nv:
        raise Precondition(f"{x} is not a neighbour of {v}")
    if y == v or y in nv:
        raise Precondition(f"{y} already lies in N[{v}]")
    closed = nv | {v}
    if any(not (g.neighbours(u) | {u}) == closed for u in closed):
        raise Precondition(f"N[{v}] is not a clique component")
    z = min(g.neighbours(y))
    w = min(nv - {x})
    run = Runner(g)
    run.do(delta_minus(w, v, x, y, z), "swap")
    return run.trace


def _inversions(seq: list[int]) -> int:
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def permute_cycle(g: RegularGraph, cycle_vertices, target_order) -> StepTrace:
    """Rearrange an induced cycle of length >= 6 into `target_order`.

    Each adjacent transposition of the cyclic sequence is one DeltaPlus and
    one DeltaMinus.  The rotation and direction of the target needing the
    fewest transpositions is used.  Other edges of the graph are untouched.
    """
    cyc = list(cycle_vertices)
    k = len(cyc)
    if k < 6:
        raise Precondition("the cycle must have at least 6 vertices")
    if sorted(target_order) != sorted(cyc) or len(set(cyc)) != k:
        raise Precondition("target order is not a permutation of the cycle")
    S = set(cyc)
    for i, u in enumerate(cyc):
        if not g.has_edge(u, cyc[(i + 1) % k]) or len(g.neighbours(u) & S) != 2:
            raise Precondition("vertices do not form an induced cycle in this order")
    target = list(target_order)
    best = None
    for seq in (target, target[::-1]):
        for r in range(k):
            rot = seq[r:] + seq[:r]
            rank = {u: i for i, u in enumerate(rot)}
            inv = _inversions([rank[u] for u in cyc])
            if best is None or inv < best[0]:
                best = (inv, rank)
    rank = best[1]
    run = Runner(g)
    L = cyc
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            if rank[L[i]] > rank[L[i + 1]]:
                v1, v2 = L[i], L[i + 1]
                v3, v4, vn = L[(i + 2) % k], L[(i + 3) % k], L[i - 1]
                run.do(delta_plus(v2, v1, v3, vn, v4), "permcycle")
                run.do(delta_minus(v1, v3, v2, v4, vn), "permcycle")
                L[i], L[i + 1] = v2, v1
                changed = True
    return run.trace


def _cycle_order(g: RegularGraph) -> list[int]:
    order = [1]
    prev, cur = 1, min(g.neighbours(1))
    while cur != 1:
        order.append(cur)
        (nxt,) = g.neighbours(cur) - {prev}
        prev, cur = cur, nxt
    return order


def _to_single_cycle(g: RegularGraph) -> StepTrace:
    """Merge triangle components of a 2-regular graph into the other cycle."""
    run = Runner(g)
    while True:
        comps = components(run.g)
        if len(comps) == 1:
            return run.trace
        tri = next((c for c in comps if len(c) == 3), None)
        if tri is None:
            raise Precondition("2-regular graph has no triangle to merge")
        other = next(c for c in comps if c is not tri)
        a, b, c = tri
        y = other[0]
        z = min(run.g.neighbours(y))
        run.do(delta_minus(c, a, b, y, z), "permcycle")


def connect_two_regular(x: RegularGraph, y: RegularGraph) -> MoveCertificate:
    """Path between 2-regular graphs with n in {3, 6, 7}.

    Triangle components are first merged into the other cycle, so the two
    graphs may have different cycle types.
    """
    if (x.n, x.d) != (y.n, y.d) or x.d != 2:
        raise Precondition("both graphs must be 2-regular on the same vertex set")
    trace = _two_regular_trace(x, y)
    cert = certificate(x, trace.moves, trace.tags)
    if cert.end_key != key(y):
        raise InternalContradiction("cycle path does not end at the target")
    return cert


def _two_regular_trace(x: RegularGraph, y: RegularGraph) -> StepTrace:
    if x == y:
        return StepTrace(result=x)
    if x.n not in (6, 7):
        raise Precondition(f"2-regular paths are handled for n in {{3, 6, 7}}, got n = {x.n}")
    tx = _to_single_cycle(x)
    ty = _to_single_cycle(y)
    cx, cy = tx.result, ty.result
    tp = permute_cycle(cx, _cycle_order(cx), _cycle_order(cy))
    out = StepTrace(result=x)
    out.extend(tx)
    out.extend(tp)
    out.extend(_reversed(ty, y))
    return out


def _reversed(t: StepTrace, start_of_t: RegularGraph) -> StepTrace:
    return StepTrace([invert(m) for m in reversed(t.moves)], list(reversed(t.tags)), start_of_t)


def connect(x: RegularGraph, y: RegularGraph) -> MoveCertificate:
    """A certificate of triangle switches taking x to y (same n, d >= 3)."""
    if (x.n, x.d) != (y.n, y.d):
        raise Precondition("graphs differ in n or d")
    if x.d < 3:
        raise Precondition("use connect_two_regular for d <= 2")
    trace = connect_trace(x, y)
    cert = certificate(x, trace.moves, trace.tags)
    if cert.end_key != key(y):
        raise InternalContradiction("path does not end at the target")
    return cert


def connect_trace(x: RegularGraph, y: RegularGraph) -> StepTrace:
    if x == y:
        return StepTrace(result=x)
    n, d = x.n, x.d
    if is_fragment(x):
        return fragment_trace(x, y)
    if n < d + 1:
        raise Precondition("no regular graph with n <= d")
    v = 1
    gx, tx = build_clique_component(x, v)
    gy, ty = build_clique_component(y, v)
    run = Runner(x)
    run.absorb(tx)
    target = gy.neighbours(v)
    while run.g.neighbours(v) != target:
        cur = run.g.neighbours(v)
        a = min(cur - target)
        b = min(target - cur)
        run.absorb(swap_into_neighbourhood(run.g, v, a, b))
        _, tc = build_clique_component(run.g, v)
        run.absorb(tc)
    rest = [u for u in run.g.vertices() if u != v and u not in target]
    if rest:
        sx, labels = induced(run.g, rest)
        sy, labels_y = induced(gy, rest)
        assert labels == labels_y
        sub = connect_trace(sx, sy) if sx != sy else StepTrace()
        for m, tag in zip(sub.moves, sub.tags):
            run.do(m.relabel(labels), tag)
    if run.g != gy:
        raise InternalContradiction("clique halves do not meet")
    run.absorb(_reversed(ty, y))
    return run.trace

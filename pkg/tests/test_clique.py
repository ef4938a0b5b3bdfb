import random

import pytest

from trichain.graph import (
    complement,
    complete_graph,
    components,
    cycle,
    disjoint_union,
    from_edges,
    layer,
    random_regular,
)
from trichain.moves import MoveKind, applicable, certificate, replay
from trichain.reconfigure import (
    Precondition,
    absorb_component,
    break_G2_no_V4,
    break_G2_via_V4,
    build_clique_component,
    fix_isolated_in_V1,
    insert_V1_edge_below,
    open_V1_nonedge,
    reduce_indegree,
    relocate_pair,
)

from .conftest import relabelled

K33 = from_edges(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)])


def replay_trace(g, trace):
    h = g
    for m in trace.moves:
        assert m.is_delta and applicable(h, m)
        h = h.with_edge_change(m.removed(), m.added())
    assert h == trace.result
    return h


def edges_within(g, S):
    return {(a, b) for a, b in g.edges() if a in S and b in S}


def is_clique_component(g, v):
    S = g.neighbours(v) | {v}
    return all(g.neighbours(u) | {u} == S for u in S)


def collect_states():
    """Every intermediate (graph, root) visited while building cliques on random inputs."""
    states = []
    for n, d, count in ((10, 3, 25), (12, 4, 25), (14, 5, 40), (16, 6, 40), (18, 7, 20), (20, 4, 10)):
        for s in range(count):
            g = random_regular(n, d, 500 + s)
            v = 1 + s % n
            build_clique_component(g, v, observer=lambda G, L, tag: states.append((G, v)) if tag == "round" else None)
    return states


@pytest.fixture(scope="module")
def states():
    return collect_states()


# -- merging a fragment component -------------------------------------------------


@pytest.mark.parametrize("frag", [K33, complement(cycle(6))], ids=["K33", "coC6"])
def test_absorb_fragment_into_K4(frag):
    for root in frag.vertices():
        g = disjoint_union(frag, complete_graph(4))
        L = layer(g, root)
        t = absorb_component(g, root)
        h = replay_trace(g, t)
        assert 1 <= len(t) <= 2 and set(t.tags) == {"biggerC"}
        L2 = layer(h, root)
        assert len(L2.component) == 10
        assert L2.V(1) == L.V(1)
        assert L.level_edges(1) <= L2.level_edges(1)
        assert L2.level_non_edges(2)


def test_absorb_keeps_E1_exactly_on_coC6():
    g = disjoint_union(complement(cycle(6)), complete_graph(4))
    for root in range(1, 7):
        t = absorb_component(g, root)
        h = replay_trace(g, t)
        assert layer(h, root).level_edges(1) == layer(g, root).level_edges(1)


def test_absorb_relabelled_fragments():
    for s in range(60):
        d = 3 + s % 3
        frag = random_regular(2 * d + 1 if d % 2 == 0 else 2 * d, d, s)
        g = relabelled(disjoint_union(frag, random_regular(2 * d + 2, d, s)), s)
        v = 1 + s % g.n
        C = next(c for c in components(g) if v in c)
        if not d + 1 < len(C) < 2 * (d + 1):
            continue
        h = replay_trace(g, absorb_component(g, v))
        assert len(layer(h, v).component) >= 2 * d + 3
        assert h.neighbours(v) == g.neighbours(v)


def test_absorb_preconditions():
    g = random_regular(12, 3, 1)
    with pytest.raises(Precondition):
        absorb_component(g, 1)
    with pytest.raises(Precondition):
        absorb_component(K33, 1)


# -- operations that lift the level structure -------------------------------------


def test_fix_isolated_in_V1(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        if len(L.component) < 2 * (g.d + 1):
            continue
        for u in sorted(L.V(1)):
            if L.dprime[u]:
                continue
            t = fix_isolated_in_V1(g, v, u)
            h = replay_trace(g, t)
            assert 1 <= len(t) <= 2
            L2 = layer(h, v)
            assert L2.V(1) == L.V(1)
            new = L2.level_edges(1) - L.level_edges(1)
            assert L.level_edges(1) <= L2.level_edges(1)
            assert len(new) == 1 and u in next(iter(new))
            hits += 1
    assert hits > 20


def test_fix_isolated_preconditions():
    g = random_regular(12, 3, 3)
    L = layer(g, 1)
    busy = [u for u in L.V(1) if L.dprime[u]]
    if busy:
        with pytest.raises(Precondition):
            fix_isolated_in_V1(g, 1, busy[0])
    with pytest.raises(Precondition):
        fix_isolated_in_V1(g, 1, 1)


def test_relocate_pair(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        if any(L.dprime[u] == 0 for u in L.V(1)):
            continue
        for a, b in L.level_non_edges(2):
            if len(L.In(a)) != 1 or L.In(a) != L.In(b):
                continue
            (x,) = L.In(a)
            t = relocate_pair(g, v, a, b)
            h = replay_trace(g, t)
            assert len(t) == 1 and t.tags == ["P1"]
            L2 = layer(h, v)
            assert edges_within(h, L.V(2)) == edges_within(g, L.V(2))
            assert L2.In(a) == {x}
            assert L2.In(b) and x not in L2.In(b)
            hits += 1
    assert hits > 5


def test_insert_V1_edge_below(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        for a, b in L.level_non_edges(2):
            for x in sorted(L.In(a)):
                for y in sorted(L.In(b)):
                    if x == y or g.has_edge(x, y):
                        continue
                    t = insert_V1_edge_below(g, v, a, b, x, y)
                    h = replay_trace(g, t)
                    assert len(t) == 1 and t.moves[0].kind is MoveKind.DELTA_PLUS
                    assert h.has_edge(x, y) and h.has_edge(a, b)
                    # v, x, y is a new triangle (the deleted edges may break others)
                    assert h.has_edge(v, x) and h.has_edge(v, y)
                    assert layer(h, v).level_edges(1) == L.level_edges(1) | {(min(x, y), max(x, y))}
                    hits += 1
    assert hits > 50


def test_insert_V1_edge_below_preconditions():
    g = random_regular(14, 3, 2)
    L = layer(g, 1)
    x, y = sorted(L.V(1))[:2]
    with pytest.raises(Precondition):
        insert_V1_edge_below(g, 1, x, y, x, y)


def test_open_V1_nonedge(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        for x, y in sorted(L.level_edges(1)):
            for p, q in ((x, y), (y, x)):
                if L.outdeg[q] < 1:
                    continue
                t = open_V1_nonedge(g, v, p, q)
                h = replay_trace(g, t)
                assert len(t) == 1 and t.tags == ["P3"]
                assert not h.has_edge(p, q)
                L2 = layer(h, v)
                assert L2.V(1) == L.V(1)
                assert len(L2.level_edges(1)) >= len(L.level_edges(1))
                assert edges_within(h, L.V(2)) == edges_within(g, L.V(2))
                hits += 1
    assert hits > 50


def test_open_V1_nonedge_preconditions():
    g = random_regular(12, 3, 5)
    L = layer(g, 1)
    a, b = sorted(L.V(1))[:2]
    if not g.has_edge(a, b):
        with pytest.raises(Precondition):
            open_V1_nonedge(g, 1, a, b)


def _complete_V2(L):
    return not L.level_non_edges(2)


def test_reduce_indegree(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        if not _complete_V2(L) or not 1 <= L.ell <= g.d - 1 or L.V(4) or len(L.V(3)) < 2:
            continue
        if len(L.component) <= 2 * (g.d + 1):
            continue
        for u in sorted(L.V(2)):
            if L.indeg[u] < 2:
                continue
            t = reduce_indegree(g, v, u)
            h = replay_trace(g, t)
            assert len(t) == 1 and t.moves[0].kind is MoveKind.DELTA_PLUS
            L2 = layer(h, v)
            assert L2.indeg[u] == L.indeg[u] - 1
            assert L2.level_edges(1) == L.level_edges(1)
            assert any(L.level[w] == 3 and L2.level[w] == 2 for w in L2.V(2))
            hits += 1
    assert hits > 5


def test_break_G2_via_V4(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        if not _complete_V2(L) or L.ell < 2 or not L.V(3) or not L.V(4):
            continue
        t = break_G2_via_V4(g, v)
        h = replay_trace(g, t)
        assert len(t) == 1 and t.moves[0].kind is MoveKind.DELTA_PLUS
        L2 = layer(h, v)
        assert L2.level_edges(1) == L.level_edges(1)
        assert L2.level_non_edges(2)
        hits += 1
    assert hits > 3


def test_break_G2_no_V4(states):
    hits = 0
    for g, v in states:
        L = layer(g, v)
        if not _complete_V2(L) or not 2 <= L.ell <= g.d - 1 or not L.V(3) or L.V(4):
            continue
        if any(L.indeg[a] != 1 for a in L.V(2)):
            continue
        t = break_G2_no_V4(g, v)
        h = replay_trace(g, t)
        assert len(t) == 1
        L2 = layer(h, v)
        assert L2.V(1) == L.V(1)
        assert L2.level_edges(1) == L.level_edges(1)
        assert L2.level_non_edges(2)
        hits += 1
    assert hits > 3


def test_level_operations_reject_bad_inputs():
    g = random_regular(14, 4, 9)
    L = layer(g, 1)
    a = min(L.V(2))
    if L.indeg[a] < 2:
        with pytest.raises(Precondition):
            reduce_indegree(g, 1, a)
    if L.level_non_edges(2):
        with pytest.raises(Precondition):
            break_G2_via_V4(g, 1)
        with pytest.raises(Precondition):
            break_G2_no_V4(g, 1)


# -- the driver ---------------------------------------------------------------------


def test_clique_already_present_gives_empty_trace():
    g = disjoint_union(complete_graph(4), K33)
    h, t = build_clique_component(g, 2)
    assert len(t) == 0 and h == g


@pytest.mark.parametrize("n,d", [(8, 3), (10, 3), (12, 4), (14, 5), (20, 4)])
def test_build_clique_component_random(n, d):
    r = random.Random(n * 100 + d)
    for _ in range(15):
        g = random_regular(n, d, r.randrange(10**6))
        v = r.randint(1, n)
        rounds = []

        def watch(G, L, tag):
            rounds.append(len(L.level_edges(1)))

        h, t = build_clique_component(g, v, observer=watch)
        assert replay(certificate(g, t.moves), g) == h
        assert is_clique_component(h, v)
        assert h.neighbours(v) == g.neighbours(v)
        assert rounds == sorted(rounds)  # |E1| never drops between rounds
        assert set(t.tags) <= {"biggerC", "P0", "P1", "P2", "P3", "L1", "L2", "L3"}


def test_build_clique_on_fragment_unions():
    for frag in (K33, complement(cycle(6))):
        for extra in (complete_graph(4), random_regular(8, 3, 4)):
            g = disjoint_union(frag, extra)
            for v in g.vertices():
                h, t = build_clique_component(g, v)
                assert is_clique_component(h, v)
                assert h.neighbours(v) == g.neighbours(v)


def test_build_clique_preconditions():
    with pytest.raises(Precondition):
        build_clique_component(cycle(8), 1)
    with pytest.raises(Precondition):
        build_clique_component(K33, 1)
    with pytest.raises(Precondition):
        build_clique_component(random_regular(8, 3, 0), 9)

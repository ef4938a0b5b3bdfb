import json
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings

from trichain.graph import complete_graph, components, cycle, disjoint_union, key, random_regular, triangle_count, triangles
from trichain.moves import (
    KeyMismatch,
    Move,
    MoveCertificate,
    MoveKind,
    NotApplicable,
    StepNotApplicable,
    applicable,
    apply,
    as_switch,
    certificate,
    delta_minus,
    delta_neighbours,
    delta_plus,
    enumerate_delta_switches,
    flip,
    invert,
    replay,
    switch,
)
from trichain.statespace import enumerate_regular

from .conftest import regular_graphs


def brute_force_moves(g):
    """Every (kind, tuple) matching the triangle-switch patterns, straight from the definition."""
    e = g.has_edge
    out = set()
    for v, x, w, y, z in permutations(g.vertices(), 5):
        if x > w:
            continue
        if e(y, x) and e(x, v) and e(v, w) and e(w, z) and not e(x, w) and not e(y, z):
            out.add((MoveKind.DELTA_PLUS, (v, x, w, y, z)))
        if e(v, x) and e(v, w) and e(x, w) and e(y, z) and not e(x, y) and not e(w, z):
            out.add((MoveKind.DELTA_MINUS, (v, x, w, y, z)))
    return out


def test_fig1_pattern():
    # path z-w-v-x-y on 1..5 padded to a 2-regular graph by closing the cycle
    g = cycle(7, [3, 2, 1, 4, 5, 6, 7])  # y=3, x=2, v=1, w=4, z=5
    m = delta_plus(1, 2, 4, 3, 5)
    assert applicable(g, m)
    assert not applicable(g, delta_minus(1, 2, 4, 3, 5))
    h = apply(g, m)
    assert h.has_edge(2, 4) and h.has_edge(3, 5) and not h.has_edge(2, 3) and not h.has_edge(4, 5)
    assert apply(h, invert(m)) == g


def test_complete_graph_has_no_moves():
    assert enumerate_delta_switches(complete_graph(4)) == []
    assert not applicable(complete_graph(4), delta_plus(1, 2, 3, 4, 2))


def test_six_cycle_split():
    c6 = cycle(6)
    h = apply(c6, delta_plus(1, 2, 6, 3, 5))
    assert components(h) == [[1, 2, 6], [3, 4, 5]]
    moves = enumerate_delta_switches(c6)
    assert {(m.kind, m.vertices) for m in moves} == brute_force_moves(c6)
    assert all(m.kind is MoveKind.DELTA_PLUS for m in moves)
    assert len(moves) == 6
    assert len(delta_neighbours(c6)) == 3


def test_two_cliques_only_merge():
    g = disjoint_union(complete_graph(4), complete_graph(4))
    moves = enumerate_delta_switches(g)
    assert moves and all(m.kind is MoveKind.DELTA_MINUS for m in moves)
    for m in moves:
        v, x, w, y, z = m.vertices
        assert (v <= 4) == (x <= 4) == (w <= 4) != (y <= 4) == (z <= 4)


def test_enumeration_matches_brute_force_on_all_small_graphs():
    for n, d in [(6, 3), (7, 4), (6, 2), (7, 2)]:
        for g in enumerate_regular(n, d):
            got = [(m.kind, m.vertices) for m in enumerate_delta_switches(g)]
            assert len(got) == len(set(got))
            assert set(got) == brute_force_moves(g)


def test_symmetry_exhaustive_on_8_3():
    for i, g in enumerate(enumerate_regular(8, 3)):
        if i % 20:
            continue
        for m in enumerate_delta_switches(g):
            h = apply(g, m)
            assert applicable(h, invert(m))
            assert invert(m) in enumerate_delta_switches(h)


@settings(max_examples=40, deadline=None)
@given(regular_graphs(sizes=((10, 3), (12, 4), (16, 5), (20, 5), (9, 4))))
def test_moves_preserve_regularity_and_build_or_break_triangle(g):
    for m in enumerate_delta_switches(g)[::7]:
        h = apply(g, m)
        assert all(len(h.neighbours(u)) == g.d for u in h.vertices())
        v, x, w = m.vertices[:3]
        tri = h.has_edge(v, x) and h.has_edge(v, w) and h.has_edge(x, w)
        assert tri == (m.kind is MoveKind.DELTA_PLUS)
        assert apply(h, invert(m)) == g
        assert apply(g, as_switch(m)) == h


def test_invert_switch_and_flip():
    m = switch(1, 2, 3, 4)
    assert invert(m) == switch(1, 3, 2, 4)
    assert invert(invert(m)) == m
    assert invert(invert(delta_plus(1, 2, 3, 4, 5))) == delta_plus(1, 2, 3, 4, 5)
    # 6-cycle: Flip(1, 2, 6, 5) deletes 12, 65, inserts 16 (present) -> no
    g = cycle(6)
    assert not applicable(g, flip(1, 2, 6, 5))
    # delete 12, 45; insert 14, 25; cross edge 42 is absent so only a switch
    assert applicable(g, switch(1, 2, 4, 5)) and not applicable(g, flip(1, 2, 4, 5))
    assert invert(flip(1, 2, 4, 5)) == flip(1, 4, 2, 5)
    assert not applicable(complete_graph(4), switch(1, 2, 3, 4))


def test_flip_is_switch():
    g = random_regular(10, 3, 1)
    for (a, b) in g.edges():
        for (c, e) in g.edges():
            m = flip(a, b, c, e)
            if applicable(g, m):
                assert applicable(g, Move(MoveKind.SWITCH, m.vertices))


def test_not_applicable_raises():
    with pytest.raises(NotApplicable):
        apply(complete_graph(4), delta_minus(1, 2, 3, 4, 1))
    with pytest.raises(ValueError):
        Move(MoveKind.DELTA_PLUS, (1, 2, 3))


def test_certificate_round_trip_and_replay_errors():
    g = cycle(6)
    moves = [delta_plus(1, 2, 6, 3, 5), delta_minus(1, 2, 6, 3, 5)]
    cert = certificate(g, moves, ["a", "b"])
    assert cert.end_key == key(g)
    loaded = MoveCertificate.load(cert.dumps().splitlines())
    assert loaded.moves == moves and loaded.start_key == cert.start_key and loaded.tags == ["a", "b"]
    assert replay(loaded, g) == g
    empty = certificate(g, [])
    assert replay(empty, g) == g
    with pytest.raises(KeyMismatch):
        replay(cert, cycle(6, [1, 3, 2, 4, 5, 6]))
    bad = MoveCertificate(cert.start_key, [moves[1]], cert.end_key, 6, 2)
    with pytest.raises(StepNotApplicable) as exc:
        replay(bad, g)
    assert exc.value.index == 0
    rev = cert.reversed()
    assert rev.moves == [invert(m) for m in reversed(moves)]


def test_certificate_json_fields():
    cert = certificate(cycle(6), [delta_plus(1, 2, 6, 3, 5)])
    header, row = cert.dumps().splitlines()
    assert set(json.loads(header)) == {"start", "end", "n", "d"}
    assert json.loads(row) == {"kind": "DeltaPlus", "v": 1, "x": 2, "w": 6, "y": 3, "z": 5}


def test_triangle_count_changes_match_recount():
    g = random_regular(14, 4, 3)
    for m in enumerate_delta_switches(g)[:50]:
        h = apply(g, m)
        assert triangle_count(h) == len(triangles(h))


def test_triangles_match_brute_force_triples():
    for g in list(enumerate_regular(7, 4))[::31] + [random_regular(10, 3, 2), random_regular(10, 5, 2)]:
        brute = [t for t in combinations(g.vertices(), 3) if g.has_edge(t[0], t[1]) and g.has_edge(t[1], t[2]) and g.has_edge(t[0], t[2])]
        assert triangles(g) == brute

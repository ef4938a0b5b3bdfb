import json
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trichain.graph import complete_graph, disjoint_union, from_edges, key, random_regular, triangle_count
from trichain.moves import applicable, delta_minus, delta_plus, enumerate_delta_switches, replay
from trichain.sampler import (
    Chain,
    Policy,
    make_rng,
    plus_probability,
    rng_from_state,
    rng_state,
    run,
    step,
    tuple_probability,
)
from trichain.statespace import enumerate_regular

from .conftest import regular_graphs

K33 = from_edges(6, [(a, b) for a in (1, 2, 3) for b in (4, 5, 6)])


def exact_transitions(g):
    """P(g -> h) for h != g: each move is drawn as two ordered tuples of equal probability."""
    out = Counter()
    for m in enumerate_delta_switches(g):
        h = g.with_edge_change(m.removed(), m.added())
        out[key(h)] += 2 * tuple_probability(m, g.n, g.d)
    return out


def test_proposal_is_symmetric_on_cubic_six():
    gs = list(enumerate_regular(6, 3))
    P = {key(g): exact_transitions(g) for g in gs}
    for a, row in P.items():
        assert sum(row.values()) < 1
        for b, p in row.items():
            assert math.isclose(p, P[b][a], rel_tol=1e-12)


def test_symmetry_on_sampled_larger_graphs():
    for s in range(5):
        g = random_regular(10, 4, s)
        for h_key, p in exact_transitions(g).items():
            h = next(
                g.with_edge_change(m.removed(), m.added())
                for m in enumerate_delta_switches(g)
                if key(g.with_edge_change(m.removed(), m.added())) == h_key
            )
            assert math.isclose(p, exact_transitions(h)[key(g)], rel_tol=1e-12)


def test_empirical_proposals_match_exact_probabilities():
    g = random_regular(6, 3, 1)
    exact = exact_transitions(g)
    ch = Chain(g, Policy.uniform(), make_rng(11))
    N = 200_000
    seen = Counter()
    for _ in range(N):
        m = ch.propose()
        if m is not None:
            assert applicable(g, m)
            seen[key(g.with_edge_change(m.removed(), m.added()))] += 1
    assert set(seen) <= set(exact)
    for h, p in exact.items():
        sd = math.sqrt(N * p * (1 - p))
        assert abs(seen[h] - N * p) < 5 * sd + 1


def test_plus_probability_balances_tuple_weights():
    for n, d in ((6, 3), (20, 4), (60, 3), (12, 5)):
        assert math.isclose(
            tuple_probability(delta_plus(1, 2, 3, 4, 5), n, d),
            tuple_probability(delta_minus(1, 2, 3, 4, 5), n, d),
        )
        assert 0 < plus_probability(n, d) < 1


@settings(max_examples=25, deadline=None)
@given(regular_graphs(), st.integers(0, 2**31 - 1))
def test_run_is_consistent(g, seed):
    res = run(g, Policy.uniform(), 300, seed, sample_every=50, record=True)
    st_ = res.stats
    assert st_.step == 300
    assert st_.delta_plus + st_.delta_minus + st_.rejected + st_.declined == 300
    assert st_.triangle_count == triangle_count(res.graph)
    assert replay(res.certificate, g) == res.graph
    assert [t for t, _ in st_.trajectory] == [50, 100, 150, 200, 250, 300]


def test_fixed_seed_is_deterministic():
    g = random_regular(20, 4, 3)
    a = run(g, Policy.uniform(), 2000, 42)
    b = run(g, Policy.uniform(), 2000, 42)
    c = run(g, Policy.uniform(), 2000, 43)
    assert a.graph == b.graph and a.stats.to_dict() == b.stats.to_dict()
    assert a.graph != c.graph


def test_zero_steps():
    g = random_regular(10, 3, 0)
    res = run(g, Policy.uniform(), 0, 1)
    assert res.graph == g and res.stats.step == 0
    with pytest.raises(ValueError):
        run(g, Policy.uniform(), -1, 1)


def test_two_cliques_only_merge_or_stay():
    g = disjoint_union(complete_graph(4), complete_graph(4))
    res = run(g, Policy.uniform(), 500, 7, record=True)
    assert replay(res.certificate, g) == res.graph
    assert res.stats.delta_minus >= 1


def test_strong_boost_never_loses_triangles():
    g = random_regular(30, 3, 5)
    res = run(g, Policy.triangle_boost(60.0), 3000, 9, sample_every=1)
    counts = [c for _, c in res.stats.trajectory]
    assert counts == sorted(counts)


def test_triangle_free_start_moves_up_first():
    ch = Chain(K33, Policy.triangle_boost(100.0), make_rng(0))
    while (m := ch.step()) is None:
        pass
    assert m.kind.value == "DeltaPlus"


def test_custom_weight_matches_triangle_boost():
    g = random_regular(16, 3, 2)
    beta = 1.5
    a = run(g, Policy.triangle_boost(beta), 3000, 5)
    b = run(g, Policy.custom(lambda h: beta * triangle_count(h)), 3000, 5)
    assert a.graph == b.graph and a.stats.to_dict() == b.stats.to_dict()


def test_step_function():
    g = random_regular(12, 3, 1)
    rng = make_rng(3)
    moved = 0
    for _ in range(50):
        h, m, rng = step(g, Policy.uniform(), rng)
        if m is None:
            assert h == g
        else:
            assert h == g.with_edge_change(m.removed(), m.added())
            moved += 1
        g = h
    assert moved > 0


def test_rng_state_round_trip():
    rng = make_rng(123)
    rng.random(17)
    state = json.loads(json.dumps(rng_state(rng)))
    other = rng_from_state(state)
    assert list(rng.random(5)) == list(other.random(5))


def test_policy_validation():
    with pytest.raises(ValueError):
        Policy.triangle_boost(-1)
    with pytest.raises(ValueError):
        Policy("nonsense")
    with pytest.raises(ValueError):
        Policy("custom")


def test_low_degree_chains_stay_put():
    g = from_edges(4, [(1, 2), (3, 4)])
    res = run(g, Policy.uniform(), 100, 0)
    assert res.graph == g and res.stats.rejected == 100

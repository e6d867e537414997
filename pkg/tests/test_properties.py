"""Structural invariants of the core lattice, as property tests."""
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mlcores import (
    decompose,
    decompose_bfs,
    decompose_dfs,
    maximal_vector,
    peel_core,
    random_multilayer,
)

CASES = settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_n=16, max_layers=3):
    n = draw(st.integers(1, max_n))
    L = draw(st.integers(1, max_layers))
    p = draw(st.sampled_from([0.1, 0.2, 0.3, 0.5, 0.7]))
    return random_multilayer(n, L, p, seed=draw(st.integers(0, 2**32)))


@st.composite
def graph_and_vectors(draw):
    g = draw(graphs())
    vec = st.tuples(*[st.integers(0, 5)] * g.layer_count)
    return g, draw(vec), draw(vec)


@CASES
@given(graph_and_vectors())
def test_nesting(case):
    g, low, step = case
    high = tuple(x + y for x, y in zip(low, step))
    # high dominates low, so its core sits inside the core of low
    assert peel_core(g, g.vertices(), high) <= peel_core(g, g.vertices(), low)


@CASES
@given(graph_and_vectors())
def test_meet_contains_join(case):
    g, a, b = case
    join = tuple(max(x, y) for x, y in zip(a, b))
    V = g.vertices()
    assert peel_core(g, V, join) <= peel_core(g, V, a) & peel_core(g, V, b)


@CASES
@given(graphs())
def test_bfs_father_counts(g):
    V = g.vertices()

    def check(k, fathers, core):
        nonzero = [i for i, x in enumerate(k) if x]
        assert len(fathers) == len(nonzero)
        expected = []
        for i in nonzero:
            f = list(k)
            f[i] -= 1
            expected.append(peel_core(g, V, f))
        assert sorted(map(sorted, fathers)) == sorted(map(sorted, expected))
        assert all(core <= f for f in fathers)

    decompose_bfs(g, on_node=check)


@CASES
@given(graph_and_vectors())
def test_fixpoint(case):
    g, k, _ = case
    C = peel_core(g, g.vertices(), k)
    if C:
        m = maximal_vector(g, C)
        assert all(x >= y for x, y in zip(m, k))
        assert peel_core(g, g.vertices(), m) == C


@CASES
@given(graphs(), st.sampled_from(["naive", "bfs", "dfs", "hybrid"]))
def test_unique_vertex_sets(g, engine):
    d = decompose(g, engine)
    sets = [c.vertices for c in d]
    assert len(sets) == len(set(sets))
    for k, c in d.cores.items():
        assert maximal_vector(g, c.vertices) == k


@CASES
@given(graphs(max_n=14), st.integers(0, 1000), st.integers(0, 1000))
def test_dfs_order_independent(g, s1, s2):
    assert decompose_dfs(g, seed=s1).as_map() == decompose_dfs(g, seed=s2).as_map()

import random

import pytest

from conftest import ids, names
from mlcores import (
    CapExceededError,
    CommunityQuery,
    EmptyGraphError,
    MultilayerGraph,
    community_bruteforce,
    community_search,
    decompose,
    phi,
    random_multilayer,
    sigma,
    theta,
)


def test_phi(toy):
    g = toy
    assert phi(g, ids(g, "BEF"), [0, 1]) == 2
    assert phi(g, g.vertices(), [0]) == 1
    assert phi(g, ids(g, "A"), [0, 1]) == 0
    with pytest.raises(ValueError):
        phi(g, ids(g, "BEF"), [])
    with pytest.raises(ValueError):
        phi(g, frozenset(), [0])


def test_theta(toy):
    g = toy
    assert theta(g, ids(g, "BEF"), 1.0) == (4.0, (0, 1))
    assert theta(g, ids(g, "BCEF"), 1.0) == (3.0, (1,))
    assert theta(g, ids(g, "C"), 1.0)[0] == 0


def test_sigma():
    assert sigma((2, 2), 1.0) == 4
    assert sigma((3, 1), 1.0) == 3
    assert sigma((0, 0, 0), 1.0) == 0


@pytest.mark.parametrize("strategy", ["bfs", "dfs", "hybrid"])
def test_toy_queries(toy, strategy):
    g = toy
    r = community_search(g, CommunityQuery(ids(g, "F"), 1.0, strategy))
    assert (names(g, r.vertices), r.score, r.vector) == ("BEF", 4.0, (2, 2))
    r = community_search(g, CommunityQuery(ids(g, "C"), 1.0, strategy))
    assert (names(g, r.vertices), r.score, r.vector) == ("BCEF", 3.0, (1, 3))
    r = community_search(g, CommunityQuery(g.vertices(), 1.0, strategy))
    assert r.vertices == g.vertices() and r.score == sigma((1, 1), 1.0)


def test_toy_bruteforce(toy):
    g = toy
    assert community_bruteforce(g, CommunityQuery(ids(g, "F"))).score == 4
    assert community_bruteforce(g, CommunityQuery(ids(g, "C"))).score == 3
    r = community_bruteforce(g, CommunityQuery(g.vertices()))
    assert r.score == theta(g, g.vertices(), 1.0)[0]


def test_query_validation(toy):
    with pytest.raises(ValueError):
        CommunityQuery(frozenset())
    with pytest.raises(ValueError):
        CommunityQuery({0}, beta=0)
    with pytest.raises(ValueError):
        CommunityQuery({0}, strategy="naive")
    with pytest.raises(ValueError):
        community_search(toy, CommunityQuery({99}))
    with pytest.raises(EmptyGraphError):
        community_search(MultilayerGraph(0, [[]]), CommunityQuery({0}))
    with pytest.raises(CapExceededError):
        community_bruteforce(random_multilayer(17, 1, 0.1, seed=0), CommunityQuery({0}))


def test_isolated_query_gets_root():
    g = MultilayerGraph.from_edges(4, [(0, 1, 0), (1, 2, 0), (0, 2, 0)], layer_count=2)
    r = community_search(g, CommunityQuery({3}))
    assert r.vertices == g.vertices() and r.score == 0


@pytest.mark.parametrize("seed", range(10))
def test_strategies_agree_and_contain_query(seed):
    rng = random.Random(seed)
    g = random_multilayer(14, 3, 0.35, seed=seed)
    q = frozenset(rng.sample(range(14), rng.randint(1, 3)))
    results = [community_search(g, CommunityQuery(q, 2.0, s)) for s in ("bfs", "dfs", "hybrid")]
    assert len({(r.vertices, r.score, r.vector) for r in results}) == 1
    assert q <= results[0].vertices


def test_sigma_matches_theta_on_cores():
    g = random_multilayer(20, 3, 0.3, seed=2)
    for c in decompose(g):
        for beta in (0.25, 1.0, 2.0, 4.0):
            assert sigma(c.vector, beta) == pytest.approx(theta(g, c.vertices, beta)[0])

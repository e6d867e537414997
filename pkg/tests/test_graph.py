import io

import pytest

from conftest import TOY, ids
from mlcores import (
    EdgeListError,
    MultilayerGraph,
    degree,
    layer_density,
    load_edge_list,
    min_degree,
    random_multilayer,
    read_edge_list,
    write_edge_list,
)
from mlcores.graph import induced_edge_count, mask_of, members, set_of


def test_toy_counts():
    g, report = read_edge_list(TOY)
    assert g.vertex_count == 6
    assert g.layer_count == 2
    assert [g.edge_count(0), g.edge_count(1)] == [9, 8]
    assert report.edges_loaded == 17
    assert report.layers_seen == 2


def test_empty_stream():
    g, report = load_edge_list(io.BytesIO(b""))
    assert g.vertex_count == 0 and g.layer_count == 0
    assert report.lines_read == 0
    assert report.edges_loaded == report.duplicates_ignored == report.self_loops_ignored == 0


def test_duplicates_and_self_loops():
    g, report = load_edge_list("A B 0\nA B 0\nB A 0\nA A 0\n")
    assert report.edges_loaded == 1
    assert report.duplicates_ignored == 2
    assert report.self_loops_ignored == 1
    assert g.edge_count(0) == 1


def test_comments_and_blank_lines():
    g, report = load_edge_list("# header\n\nA B 0\n   \nB C 1\n")
    assert report.lines_read == 5
    assert g.layer_count == 2
    assert g.labels == ("A", "B", "C")


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("A B 0\nA B\n", 2),
        ("A B 0\nA B C D\n", 2),
        ("A B x\n", 1),
        ("A B 0\n\nA B -1\n", 3),
    ],
)
def test_malformed_lines(text, lineno):
    with pytest.raises(EdgeListError) as e:
        load_edge_list(text)
    assert e.value.lineno == lineno
    assert f"line {lineno}" in str(e.value)


def test_round_trip(tmp_path):
    g = random_multilayer(15, 3, 0.3, seed=5)
    buf = io.StringIO()
    write_edge_list(g, buf)
    h, _ = load_edge_list(buf.getvalue())
    # labels are re-assigned by first appearance, so compare edges by label
    def edges(x):
        return {(frozenset((x.label(u), x.label(v))), layer) for layer in x.layers() for u, v in x.edges(layer)}
    assert edges(g) == edges(h)


def test_degree(toy):
    g = toy
    A, B = g.index_of("A"), g.index_of("B")
    assert degree(g, g.vertices(), A, 1) == 1
    assert degree(g, ids(g, "BEF"), B, 0) == 2
    for layer in g.layers():
        assert degree(g, frozenset({A}), A, layer) == 0
    with pytest.raises(ValueError):
        degree(g, ids(g, "BEF"), A, 0)
    with pytest.raises(ValueError):
        degree(g, g.vertices(), A, 2)


def test_min_degree(toy):
    g = toy
    assert min_degree(g, ids(g, "ABDE"), 0) == 3
    assert min_degree(g, ids(g, "ABDE"), 1) == 1
    assert min_degree(g, g.vertices(), 0) == 1
    assert min_degree(g, ids(g, "C"), 0) == 0
    with pytest.raises(ValueError):
        min_degree(g, frozenset(), 0)


def test_layer_density(toy):
    assert layer_density(toy, 0) == 1.5
    assert float(layer_density(toy, 1)) == pytest.approx(8 / 6)
    g = MultilayerGraph.from_edges(3, [(0, 1, 0)], layer_count=2)
    assert layer_density(g, 1) == 0
    with pytest.raises(ValueError):
        layer_density(MultilayerGraph(0, []), 0)


def test_induced_edges(toy):
    assert induced_edge_count(toy, ids(toy, "BEF"), 0) == 3
    assert induced_edge_count(toy, toy.vertices(), 1) == 8


def test_masks():
    assert mask_of([0, 3, 5]) == 0b101001
    assert list(members(0b101001)) == [0, 3, 5]
    assert set_of(0) == frozenset()


def test_constructor_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        MultilayerGraph(2, [[[1], []]])
    with pytest.raises(ValueError):
        MultilayerGraph(2, [[[0], []]])
    with pytest.raises(ValueError):
        MultilayerGraph(2, [[[1], [0]]], labels=["a", "a"])


def test_random_multilayer_is_seeded():
    assert random_multilayer(20, 3, 0.2, seed=1) == random_multilayer(20, 3, 0.2, seed=1)
    g = random_multilayer(10, 2, [0.0, 1.0], seed=3)
    assert g.edge_count(0) == 0 and g.edge_count(1) == 45

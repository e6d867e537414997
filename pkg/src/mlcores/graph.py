"""Multilayer graph model, edge-list ingestion, and degree primitives.

A multilayer graph shares one vertex set across ``layer_count`` edge layers.
Vertices are dense integers ``0..n-1``; external labels are kept in a side
table so that outputs can be reported with the names found in the input.
"""
from __future__ import annotations

import io
import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence, Union

from .errors import EdgeListError

VertexSet = frozenset  # frozenset[int]; canonical order is ``sorted(s)``


@dataclass(frozen=True)
class IngestReport:
    lines_read: int = 0
    edges_loaded: int = 0
    duplicates_ignored: int = 0
    self_loops_ignored: int = 0
    layers_seen: int = 0


class MultilayerGraph:
    """Immutable undirected multilayer graph.

    Adjacency is kept per layer as sorted neighbor tuples, so membership is a
    binary search and neighbor scans touch contiguous memory.
    """

    __slots__ = ("_n", "_adj", "_masks", "_labels", "_index", "_edge_counts")

    def __init__(
        self,
        vertex_count: int,
        adjacency: Sequence[Sequence[Iterable[int]]],
        labels: Sequence[str] | None = None,
    ):
        if vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        adj = []
        for layer, rows in enumerate(adjacency):
            if len(rows) != vertex_count:
                raise ValueError(f"layer {layer}: expected {vertex_count} adjacency rows")
            adj.append(tuple(tuple(sorted(set(r))) for r in rows))
        for layer, rows in enumerate(adj):
            for u, nbrs in enumerate(rows):
                for v in nbrs:
                    if v == u:
                        raise ValueError(f"self-loop at vertex {u} in layer {layer}")
                    if not 0 <= v < vertex_count or not _contains(rows[v], u):
                        raise ValueError(f"asymmetric or invalid edge ({u},{v}) in layer {layer}")
        self._n = vertex_count
        self._adj = tuple(adj)
        self._masks = tuple(tuple(mask_of(r) for r in rows) for rows in self._adj)
        if labels is None:
            labels = [str(i) for i in range(vertex_count)]
        if len(labels) != vertex_count:
            raise ValueError("labels must have one entry per vertex")
        self._labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self._labels)}
        if len(self._index) != vertex_count:
            raise ValueError("vertex labels must be unique")
        self._edge_counts = tuple(sum(len(r) for r in rows) // 2 for rows in self._adj)

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, int]],
        layer_count: int | None = None,
        labels: Sequence[str] | None = None,
    ) -> "MultilayerGraph":
        """Build from ``(u, v, layer)`` triples; duplicates and self-loops are dropped."""
        edges = list(edges)
        if layer_count is None:
            layer_count = 1 + max((e[2] for e in edges), default=-1)
        rows = [[set() for _ in range(vertex_count)] for _ in range(layer_count)]
        for u, v, layer in edges:
            if u == v:
                continue
            rows[layer][u].add(v)
            rows[layer][v].add(u)
        return cls(vertex_count, rows, labels)

    # --- basic accessors -------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def layer_count(self) -> int:
        return len(self._adj)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def label(self, u: int) -> str:
        return self._labels[u]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown vertex label {label!r}") from None

    def vertices(self) -> VertexSet:
        return frozenset(range(self._n))

    def layers(self) -> range:
        return range(len(self._adj))

    def neighbors(self, u: int, layer: int) -> tuple[int, ...]:
        return self._adj[layer][u]

    def adjacency(self, layer: int) -> tuple[tuple[int, ...], ...]:
        return self._adj[layer]

    def neighbor_masks(self, layer: int) -> tuple[int, ...]:
        """Per-vertex neighbor bitmasks of ``layer`` (bit ``v`` set iff ``v`` is adjacent)."""
        return self._masks[layer]

    def has_edge(self, u: int, v: int, layer: int) -> bool:
        return _contains(self._adj[layer][u], v)

    def edge_count(self, layer: int) -> int:
        return self._edge_counts[layer]

    def edges(self, layer: int) -> Iterable[tuple[int, int]]:
        for u, nbrs in enumerate(self._adj[layer]):
            for v in nbrs:
                if u < v:
                    yield u, v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultilayerGraph):
            return NotImplemented
        return self._n == other._n and self._adj == other._adj and self._labels == other._labels

    def __hash__(self) -> int:
        return hash((self._n, self._adj))

    def __repr__(self) -> str:
        return f"MultilayerGraph(|V|={self._n}, |L|={self.layer_count}, |E_l|={list(self._edge_counts)})"

    def check_layer(self, layer: int) -> None:
        if not 0 <= layer < len(self._adj):
            raise ValueError(f"layer {layer} out of range [0, {len(self._adj)})")


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> Iterable[int]:
    """Set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> VertexSet:
    return frozenset(members(mask))


def _contains(sorted_seq: Sequence[int], x: int) -> bool:
    i = bisect_left(sorted_seq, x)
    return i < len(sorted_seq) and sorted_seq[i] == x


# --- degree primitives ----------------------------------------------------

def degree(g: MultilayerGraph, S: VertexSet, u: int, layer: int) -> int:
    """Number of neighbors of ``u`` in ``layer`` that lie in ``S``."""
    if u not in S:
        raise ValueError(f"vertex {u} is not in S")
    g.check_layer(layer)
    return sum(1 for v in g.neighbors(u, layer) if v in S)


def min_degree(g: MultilayerGraph, S: VertexSet, layer: int) -> int:
    if not S:
        raise ValueError("minimum degree of an empty vertex set is undefined")
    g.check_layer(layer)
    adj = g.adjacency(layer)
    return min(sum(1 for v in adj[u] if v in S) for u in S)


def induced_edge_count(g: MultilayerGraph, S: VertexSet, layer: int) -> int:
    adj = g.adjacency(layer)
    return sum(1 for u in S for v in adj[u] if v in S) // 2


def layer_density(g: MultilayerGraph, layer: int) -> Fraction:
    """Average-degree density ``|E_l| / |V|`` of a whole layer."""
    if g.vertex_count == 0:
        raise ValueError("density is undefined on a graph with no vertices")
    g.check_layer(layer)
    return Fraction(g.edge_count(layer), g.vertex_count)


# --- edge-list I/O -----------------------------------------------------------

Source = Union[IO[bytes], IO[str], bytes, str]


def load_edge_list(source: Source) -> tuple[MultilayerGraph, IngestReport]:
    """Parse ``<source> <target> <layer>`` lines into a graph.

    ``source`` may be a binary or text stream, or the raw content itself.
    Labels are assigned dense indices in order of first appearance; the layer
    token is used as the layer index, so ``layer_count`` is ``max + 1``.
    """
    if not isinstance(source, (bytes, str)):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    text = io.StringIO(source)

    index: dict[str, int] = {}
    seen: set[tuple[int, int, int]] = set()
    edges: list[tuple[int, int, int]] = []
    layers: set[int] = set()
    lines = dups = loops = 0

    for lineno, raw in enumerate(text, start=1):
        lines += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise EdgeListError(lineno, f"expected 3 tokens, got {len(tokens)}")
        a, b, tok = tokens
        try:
            layer = int(tok)
        except ValueError:
            raise EdgeListError(lineno, f"layer {tok!r} is not an integer") from None
        if layer < 0:
            raise EdgeListError(lineno, f"layer {layer} is negative")
        u = index.setdefault(a, len(index))
        v = index.setdefault(b, len(index))
        layers.add(layer)
        if u == v:
            loops += 1
            continue
        key = (min(u, v), max(u, v), layer)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        edges.append(key)

    labels = sorted(index, key=index.__getitem__)
    layer_count = 1 + max(layers, default=-1)
    g = MultilayerGraph.from_edges(len(labels), edges, layer_count, labels)
    report = IngestReport(lines, len(edges), dups, loops, len(layers))
    return g, report


def read_edge_list(path) -> tuple[MultilayerGraph, IngestReport]:
    with open(path, "rb") as fh:
        return load_edge_list(fh)


def write_edge_list(g: MultilayerGraph, stream: IO[str]) -> None:
    """Serialize every edge once, as ``label label layer``.

    Isolated vertices have no edge to carry them and are lost on reload.
    """
    for layer in g.layers():
        for u, v in g.edges(layer):
            stream.write(f"{g.label(u)} {g.label(v)} {layer}\n")


def random_multilayer(n: int, layer_count: int, p: float | Sequence[float], seed=None) -> MultilayerGraph:
    """Independent G(n, p) per layer; ``p`` may be given per layer."""
    rng = random.Random(seed)
    probs = [p] * layer_count if isinstance(p, (int, float)) else list(p)
    edges = [
        (u, v, layer)
        for layer in range(layer_count)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < probs[layer]
    ]
    return MultilayerGraph.from_edges(n, edges, layer_count)

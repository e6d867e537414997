"""Multilayer community search.

Given query vertices ``V_Q``, find ``S`` containing them that maximizes::

    theta(S) = max over non-empty L' of  phi(S, L') * |L'|^beta,
    phi(S, L') = min over l in L', u in S of deg_S(u, l)

Some core containing ``V_Q`` is always optimal, and for a core the inner
quantity only depends on its maximal vector (``sigma``). The search therefore
runs a decomposition engine that never expands past a core missing ``V_Q``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .decomposition import _dmu, _masks, decompose
from .densest import DEFAULT_CAP, _check_cap, _exhaustive, best_prefix
from .errors import EmptyGraphError
from .graph import MultilayerGraph, VertexSet, mask_of, set_of

STRATEGIES = ("bfs", "dfs", "hybrid")


@dataclass(frozen=True)
class CommunityQuery:
    query_vertices: VertexSet
    beta: float = 1.0
    strategy: str = "hybrid"

    def __post_init__(self):
        object.__setattr__(self, "query_vertices", frozenset(self.query_vertices))
        if not self.query_vertices:
            raise ValueError("query vertex set must be non-empty")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")


@dataclass(frozen=True)
class CommunityResult:
    vertices: VertexSet
    score: float
    best_layers: tuple
    vector: tuple


def _min_degrees(g: MultilayerGraph, S: Iterable[int]) -> list[int]:
    m = mask_of(S)
    if not m:
        raise ValueError("minimum degree of an empty vertex set is undefined")
    return list(_dmu(_masks(g), m))


def phi(g: MultilayerGraph, S: Iterable[int], layers: Iterable[int]) -> int:
    layers = list(layers)
    if not layers:
        raise ValueError("layer subset must be non-empty")
    for layer in layers:
        g.check_layer(layer)
    mins = _min_degrees(g, S)
    return min(mins[layer] for layer in layers)


def theta(g: MultilayerGraph, S: Iterable[int], beta: float) -> tuple[float, tuple[int, ...]]:
    """Best ``phi(S, L') * |L'|^beta`` and an attaining ``L'``."""
    return best_prefix([float(x) for x in _min_degrees(g, S)], beta)


def sigma(k: Iterable[int], beta: float) -> float:
    return best_prefix([float(x) for x in k], beta)[0]


def _check_query(g: MultilayerGraph, q: CommunityQuery) -> None:
    if g.vertex_count == 0:
        raise EmptyGraphError("no non-empty core")
    bad = [u for u in q.query_vertices if not 0 <= u < g.vertex_count]
    if bad:
        raise ValueError(f"query vertices out of range: {sorted(bad)}")


def community_search(g: MultilayerGraph, q: CommunityQuery, seed: int = 0) -> CommunityResult:
    """Core containing ``V_Q`` of highest sigma.

    Ties go to fewer vertices, then to the lexicographically smaller vector.
    The reported score is theta recomputed on the vertex set.
    """
    _check_query(g, q)
    d = decompose(g, q.strategy, seed=seed, require=q.query_vertices)
    best = None
    for c in d:
        key = (-sigma(c.vector, q.beta), len(c), c.vector)
        if best is None or key < best[0]:
            best = (key, c)
    if best is None:
        raise EmptyGraphError("no non-empty core")
    c = best[1]
    score, layers = theta(g, c.vertices, q.beta)
    return CommunityResult(c.vertices, score, layers, c.vector)


def subset_min_degrees(g: MultilayerGraph) -> np.ndarray:
    """``out[l, m]`` = minimum degree in layer ``l`` of the subgraph induced by mask ``m``.

    Empty masks get 0.
    """
    n = g.vertex_count
    masks = np.arange(1 << n, dtype=np.uint64)
    out = np.zeros((g.layer_count, 1 << n), dtype=np.int64)
    big = np.int64(n + 1)
    for layer, nbrs in enumerate(_masks(g)):
        row = np.full(1 << n, big)
        for v in range(n):
            member = (masks >> np.uint64(v)) & np.uint64(1) == 1
            deg = np.bitwise_count(masks & np.uint64(nbrs[v])).astype(np.int64)
            np.minimum(row, np.where(member, deg, big), out=row)
        row[0] = 0
        out[layer] = row
    return out


def community_bruteforce(g: MultilayerGraph, q: CommunityQuery, cap: int = DEFAULT_CAP) -> CommunityResult:
    """Exact optimum of theta over every ``S`` with ``V_Q`` inside ``S``."""
    _check_query(g, q)
    _check_cap(g, cap)
    mins = subset_min_degrees(g).astype(np.float64)
    masks = np.arange(1 << g.vertex_count, dtype=np.uint64)
    need = np.uint64(mask_of(q.query_vertices))
    sizes = np.where((masks & need) == need, np.bitwise_count(masks), 0).astype(np.int64)
    _, mask, _ = _exhaustive(lambda ls: mins[list(ls)].min(axis=0), sizes, q.beta, g.layer_count)
    S = set_of(mask)
    score, layers = theta(g, S, q.beta)
    return CommunityResult(S, score, layers, _dmu(_masks(g), mask))

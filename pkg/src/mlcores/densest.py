"""Multilayer density and the core-based densest-subgraph approximation.

The density of ``S`` trades the number of layers against how dense ``S`` is
in the weakest of them::

    delta(S) = max over non-empty L' of  min_{l in L'} |E_l[S]| / |S|  *  |L'|^beta

Returning the densest core of the decomposition is within ``2 |L|^beta`` of
the optimum, and the inner-most cores alone already contain that core.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .decomposition import _dmu, _masks, decompose
from .errors import CapExceededError, EmptyGraphError
from .graph import MultilayerGraph, VertexSet, mask_of, members, set_of
from .innermost import innermost_cores

DEFAULT_CAP = 16


def _scales(count: int, beta: float) -> list[float] | None:
    """``j**beta`` for ``j = 1..count``; None when it overflows a double."""
    try:
        return [float(j) ** beta for j in range(1, count + 1)]
    except OverflowError:
        return None


def best_prefix(values: Sequence[float], beta: float) -> tuple[float, tuple[int, ...]]:
    """``max over non-empty subsets I of min(values[I]) * |I|**beta``, with a maximizing ``I``.

    For a fixed size ``j`` the best subset is the ``j`` largest values, so one
    sorted scan suffices. Ties go to the smallest ``j``; equal values are taken
    in index order. When ``j**beta`` overflows, candidates are ranked by
    logarithm and the reported value is ``inf``.
    """
    if not values:
        raise ValueError("need at least one layer")
    if beta <= 0:
        raise ValueError("beta must be positive")
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    scales = _scales(len(values), beta)
    best_j, best = 1, None
    for j in range(1, len(values) + 1):
        v = values[order[j - 1]]
        if scales is not None:
            key = v * scales[j - 1]
        else:
            key = math.log(v) + beta * math.log(j) if v > 0 else -math.inf
        if best is None or key > best:
            best_j, best = j, key
    if scales is None:
        best = math.inf if best > -math.inf else 0.0
    return best, tuple(sorted(order[:best_j]))


def layer_densities(g: MultilayerGraph, S: Iterable[int]) -> list[float]:
    """``|E_l[S]| / |S|`` for every layer."""
    m = mask_of(S)
    size = m.bit_count()
    if not size:
        raise ValueError("density of an empty vertex set is undefined")
    out = []
    for nbrs in _masks(g):
        twice = sum((nbrs[u] & m).bit_count() for u in members(m))
        out.append(twice / 2 / size)
    return out


def delta(g: MultilayerGraph, S: Iterable[int], beta: float) -> tuple[float, tuple[int, ...]]:
    """Multilayer density of ``S`` and a layer subset attaining it."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return best_prefix(layer_densities(g, S), beta)


@dataclass(frozen=True)
class DensestResult:
    vertices: VertexSet
    delta_value: float
    best_layers: tuple
    beta: float
    vector: tuple | None = None  # maximal vector, when the result is a core

    def layer_densities(self, g: MultilayerGraph) -> list[float]:
        return layer_densities(g, self.vertices)


def densest_subgraph(
    g: MultilayerGraph,
    beta: float,
    mode: str = "full",
    engine: str = "hybrid",
    seed: int = 0,
) -> DensestResult:
    """Densest core of the decomposition (``mode="full"``) or of the inner-most set.

    Ties go to fewer vertices, then to the lexicographically smaller vector.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if mode == "full":
        cores = list(decompose(g, engine, seed))
    elif mode == "innermost":
        cores = list(innermost_cores(g))
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'full' or 'innermost'")
    if not cores:
        raise EmptyGraphError("no non-empty core")
    best = None
    for c in cores:
        value, layers = delta(g, c.vertices, beta)
        key = (-value, len(c), c.vector)
        if best is None or key < best[0]:
            best = (key, c, value, layers)
    _, c, value, layers = best
    return DensestResult(c.vertices, value, layers, beta, c.vector)


def subset_edge_counts(g: MultilayerGraph) -> tuple[np.ndarray, np.ndarray]:
    """Induced edge counts of every vertex subset, per layer, indexed by bitmask.

    Returns ``(counts, sizes)`` with ``counts[l, m] = |E_l[m]|``. Built by adding
    vertex ``v`` to all subsets of ``0..v-1``.
    """
    n = g.vertex_count
    full = np.arange(1 << n, dtype=np.uint64)
    counts = np.zeros((g.layer_count, 1 << n), dtype=np.int64)
    for layer, nbrs in enumerate(_masks(g)):
        row = counts[layer]
        for v in range(n):
            lo = 1 << v
            row[lo:2 * lo] = row[:lo] + np.bitwise_count(full[:lo] & np.uint64(nbrs[v]))
    return counts, np.bitwise_count(full).astype(np.int64)


def _check_cap(g: MultilayerGraph, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapExceededError(f"exhaustive search refused: |V|={g.vertex_count} exceeds cap {cap}")
    if g.vertex_count == 0:
        raise EmptyGraphError("no non-empty vertex subset")


def _exhaustive(scores_by_subset, sizes: np.ndarray, beta: float, L: int):
    """Best ``(mask, layer count)`` over all vertex subsets and all layer subsets.

    ``scores_by_subset(layers)`` gives, per vertex mask, the min over ``layers``.
    Layer subsets are enumerated one by one, without the sorted-prefix shortcut.
    Ties: larger value, then fewer layers, then fewer vertices, then smaller mask.
    """
    scales = _scales(L, beta)
    best = None
    valid = sizes > 0
    for j in range(1, L + 1):
        top = None
        for layers in itertools.combinations(range(L), j):
            s = scores_by_subset(layers)
            top = s if top is None else np.maximum(top, s)
        if scales is not None:
            vals = top * scales[j - 1]
        else:
            with np.errstate(divide="ignore"):
                vals = np.log(top) + beta * math.log(j)
        vals = np.where(valid, vals, -np.inf)
        peak = vals.max()
        if best is not None and peak <= best[0]:
            continue
        hits = np.flatnonzero(vals == peak)
        pick = hits[np.lexsort((hits, sizes[hits]))[0]]
        best = (peak, int(pick), j)
    return best


def densest_bruteforce(g: MultilayerGraph, beta: float, cap: int = DEFAULT_CAP) -> DensestResult:
    """Exact optimum of the multilayer density over all non-empty vertex subsets."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    _check_cap(g, cap)
    counts, sizes = subset_edge_counts(g)
    dens = counts / np.maximum(sizes, 1)
    _, mask, _ = _exhaustive(lambda ls: dens[list(ls)].min(axis=0), sizes, beta, g.layer_count)
    S = set_of(mask)
    value, layers = delta(g, S, beta)
    return DensestResult(S, value, layers, beta, _dmu(_masks(g), mask))

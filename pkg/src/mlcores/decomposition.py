"""Multilayer core lattice and the complete-decomposition engines.

Four engines produce the same set of distinct cores:

* ``naive``  peels every vector of the box ``[0..K_1] x ... x [0..K_L]`` from V,
             in vectorized batches.
* ``bfs``    visits the lattice level by level and peels a node only from the
             intersection of its fathers, once all of them are known non-empty.
* ``dfs``    runs one single-layer decomposition per lattice path, removing
             layers from the "still expandable" set one at a time.
* ``hybrid`` seeds with one path per layer, then runs the BFS with a
             look-ahead: once C_k is known, every vector between k and the
             min-degree vector of C_k denotes the same core and is not peeled.

``K_l`` is the largest single-layer core order of layer ``l``; no vector with a
larger component can have a non-empty core, so BFS and HYBRID never enqueue
past it.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy import sparse

from .graph import MultilayerGraph, VertexSet, layer_density, mask_of, members, set_of

Vector = tuple  # tuple[int, ...], one component per layer
NodeHook = Callable[[Vector, list, VertexSet], None]

ENGINES = ("naive", "bfs", "dfs", "hybrid")


@dataclass(frozen=True)
class Core:
    vertices: VertexSet
    vector: Vector  # maximal coreness vector, i.e. the per-layer minimum degrees

    @property
    def level(self) -> int:
        return sum(self.vector)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass
class TraversalStats:
    cores_computed: int = 0  # cores materialized by peeling (path snapshots included)
    cores_visited: int = 0   # lattice nodes examined
    output_cores: int = 0
    lookahead_skips: int = 0  # HYBRID only: vectors settled without peeling


@dataclass
class CoreDecomposition:
    layer_count: int
    cores: dict = field(default_factory=dict)  # maximal vector -> Core
    stats: TraversalStats = field(default_factory=TraversalStats)
    bounds: Vector = ()  # K_l per layer

    def __len__(self) -> int:
        return len(self.cores)

    def __iter__(self) -> Iterator[Core]:
        return iter(self.cores.values())

    def __contains__(self, vector) -> bool:
        return tuple(vector) in self.cores

    def __getitem__(self, vector) -> Core:
        return self.cores[tuple(vector)]

    def as_map(self) -> dict:
        """``{maximal vector: vertex set}``, the form engines are compared on."""
        return {k: c.vertices for k, c in self.cores.items()}


# --- peeling primitives ---------------------------------------------------
#
# Engines work on int bitmasks (bit u set iff vertex u is in the set): father
# intersections become a single ``&`` and in-set degrees a popcount.

def _check_vector(g: MultilayerGraph, k: Sequence[int]) -> Vector:
    k = tuple(int(x) for x in k)
    if len(k) != g.layer_count:
        raise ValueError(f"vector has {len(k)} components, graph has {g.layer_count} layers")
    if any(x < 0 for x in k):
        raise ValueError("coreness components must be non-negative")
    return k


def _masks(g: MultilayerGraph) -> list:
    return [g.neighbor_masks(layer) for layer in g.layers()]


def _peel(am: list, mask: int, k: Vector, check: int | None = None) -> int:
    """Mask form of :func:`peel_core`; only neighbors of removed vertices are re-checked.

    ``check`` narrows the first round when the caller knows every other vertex
    of ``mask`` already meets ``k``.
    """
    act = [(am[layer], t) for layer, t in enumerate(k) if t > 0]
    if not act:
        return mask
    check = mask if check is None else check & mask
    while check:
        bad = 0
        for u in members(check):
            for nbrs, t in act:
                if (nbrs[u] & mask).bit_count() < t:
                    bad |= 1 << u
                    break
        if not bad:
            break
        mask &= ~bad
        touched = 0
        for u in members(bad):
            for nbrs, _ in act:
                touched |= nbrs[u]
        check = touched & mask
    return mask


def _dmu(am: list, mask: int) -> Vector:
    return tuple(min((nbrs[u] & mask).bit_count() for u in members(mask)) for nbrs in am)


def _path(am: list, mask: int, k: Vector, layer: int, require: int = 0, peeled: bool = False) -> list:
    """Mask form of :func:`cores_path`.

    Degrees along ``layer`` are kept exactly, in buckets. The other layers are
    re-checked in waves: the neighbors of everything just removed are tested
    by popcount against their component of ``k``. ``peeled`` says ``mask`` is
    already the core of ``k``.
    """
    alive = mask if peeled else _peel(am, mask, k)
    out: list = []
    if not alive or alive & require != require:
        return out
    adj = am[layer]
    deg = [0] * len(adj)
    buckets = [0] * (len(adj) + 1)  # buckets[d]: mask of live vertices of degree d
    for u in members(alive):
        d = deg[u] = (adj[u] & alive).bit_count()
        buckets[d] |= 1 << u
    others = [(am[o], k[o]) for o in range(len(k)) if o != layer and k[o] > 0]

    t = k[layer]
    prefix, suffix = k[:layer], k[layer + 1:]
    while alive:
        t += 1
        wave = buckets[t - 1]
        buckets[t - 1] = 0
        while wave:
            alive &= ~wave
            nxt = 0
            m = wave
            while m:
                low = m & -m
                m ^= low
                x = adj[low.bit_length() - 1] & alive & ~nxt
                while x:
                    bit = x & -x
                    x ^= bit
                    v = bit.bit_length() - 1
                    d = deg[v]
                    buckets[d] ^= bit
                    if d - 1 < t:
                        nxt |= bit
                    else:
                        deg[v] = d - 1
                        buckets[d - 1] |= bit
            for nbrs, ot in others:
                touched = 0
                m = wave
                while m:
                    low = m & -m
                    m ^= low
                    touched |= nbrs[low.bit_length() - 1]
                x = touched & alive & ~nxt
                while x:
                    bit = x & -x
                    x ^= bit
                    v = bit.bit_length() - 1
                    if (nbrs[v] & alive).bit_count() < ot:
                        nxt |= bit
                        buckets[deg[v]] ^= bit
            wave = nxt
        if not alive or alive & require != require:
            break
        out.append((prefix + (t,) + suffix, alive))
    return out


def peel_core(g: MultilayerGraph, S: Iterable[int], k: Sequence[int]) -> VertexSet:
    """Largest subset of ``S`` whose minimum degree in every layer ``l`` is ``>= k[l]``."""
    k = _check_vector(g, k)
    return set_of(_peel(_masks(g), mask_of(S), k))


def cores_path(
    g: MultilayerGraph,
    S: Iterable[int],
    k: Sequence[int],
    layer: int,
    require: Iterable[int] = (),
) -> list[tuple[Vector, VertexSet]]:
    """Cores of ``k`` with component ``layer`` raised to ``k[layer]+1, k[layer]+2, ...``.

    One bucket-peeling pass over ``layer``; a vertex that drops below ``k`` in
    any other layer is discarded as it goes. ``S`` is peeled to ``k`` first.
    Stops at the first empty core, or at the first one missing a vertex of
    ``require``.
    """
    k = _check_vector(g, k)
    g.check_layer(layer)
    path = _path(_masks(g), mask_of(S), k, layer, mask_of(require))
    return [(vec, set_of(m)) for vec, m in path]


def maximal_vector(g: MultilayerGraph, C: VertexSet) -> Vector:
    """Per-layer minimum degree of ``C``; this is the maximal coreness vector of a core."""
    if not C:
        raise ValueError("maximal vector of an empty set is undefined")
    return _dmu(_masks(g), mask_of(C))


def layer_bounds(g: MultilayerGraph) -> Vector:
    """``K_l``: order of the inner-most single-layer core in each layer."""
    am = _masks(g)
    full = (1 << g.vertex_count) - 1
    zero = (0,) * g.layer_count
    return tuple(len(_path(am, full, zero, layer)) for layer in g.layers())


def _box(bounds: Vector) -> np.ndarray:
    grids = np.indices(tuple(b + 1 for b in bounds)).reshape(len(bounds), -1)
    return np.ascontiguousarray(grids.T)


def batch_peel(g: MultilayerGraph, vectors: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """Peel many vectors from V at once; row ``i`` of the result is the core of ``vectors[i]``.

    Synchronous rounds of matrix products: every round drops, for all vectors
    together, the vertices below some component. This shares nothing with the
    queue-based peeling, which makes it a useful independent oracle.
    """
    n = g.vertex_count
    vectors = np.asarray(vectors, dtype=np.int64).reshape(-1, g.layer_count)
    out = np.zeros((len(vectors), n), dtype=bool)
    if n == 0:
        return out
    mats = []
    for layer in g.layers():
        rows = np.repeat(np.arange(n), [len(g.neighbors(u, layer)) for u in range(n)])
        cols = np.fromiter((v for u in range(n) for v in g.neighbors(u, layer)), dtype=np.int64)
        a = sparse.csr_matrix((np.ones(len(cols), dtype=np.float32), (rows, cols)), shape=(n, n))
        mats.append(a.toarray() if n <= 1024 else a)
    step = max(1, chunk // n)
    for lo in range(0, len(vectors), step):
        ks = vectors[lo:lo + step]
        alive = np.ones((len(ks), n), dtype=bool)
        idx = np.arange(len(ks))  # rows still changing
        while len(idx):
            cur = alive[idx]
            x = cur.astype(np.float32)  # degrees stay exact far beyond any n used here
            bad = np.zeros_like(cur)
            for layer, a in enumerate(mats):
                t = ks[idx, layer]
                if t.any():
                    bad |= np.asarray(x @ a) < t[:, None]
            bad &= cur
            changed = bad.any(axis=1)
            alive[idx[changed]] &= ~bad[changed]
            idx = idx[changed]
        out[lo:lo + step] = alive
    return out


def lattice_nodes(g: MultilayerGraph) -> Iterator[tuple[Vector, VertexSet]]:
    """Every non-empty ``(vector, core)`` node of the lattice, distinct or not.

    Walks the box bounded by ``K_l``, peeling each vector from V.
    """
    if g.vertex_count == 0:
        return
    box = _box(layer_bounds(g))
    for k, row in zip(box, batch_peel(g, box)):
        if row.any():
            yield tuple(int(x) for x in k), frozenset(np.flatnonzero(row).tolist())


# --- result assembly ------------------------------------------------------

class _Collector:
    """Deduplicates cores by vertex set; the stored vector is recomputed as d_mu."""

    def __init__(self, g: MultilayerGraph, am: list):
        self.g = g
        self.am = am
        self.by_mask: dict[int, Vector] = {}

    def add(self, mask: int) -> Vector:
        vec = self.by_mask.get(mask)
        if vec is None:
            vec = self.by_mask[mask] = _dmu(self.am, mask)
        return vec

    def build(self, stats: TraversalStats, bounds: Vector) -> CoreDecomposition:
        cores = {vec: Core(set_of(m), vec) for m, vec in self.by_mask.items()}
        stats.output_cores = len(cores)
        return CoreDecomposition(self.g.layer_count, dict(sorted(cores.items())), stats, bounds)


def _nnz(k: Vector) -> int:
    return sum(1 for x in k if x)


def _peel_from_fathers(am: list, fathers: list, k: Vector, full: int) -> int:
    """Peel ``k`` from the intersection of its fathers.

    With two or more fathers, every layer's component of ``k`` is met by some
    father containing the intersection, so only vertices that lost a neighbor
    to the intersection can fall short.
    """
    if not fathers:
        return _peel(am, full, k)
    meet = union = fathers[0]
    for f in fathers[1:]:
        meet &= f
        union |= f
    if len(fathers) == 1:
        return _peel(am, meet, k)
    touched = 0
    for u in members(union & ~meet):
        for layer, t in enumerate(k):
            if t:
                touched |= am[layer][u]
    return _peel(am, meet, k, touched)


def _empty(g: MultilayerGraph) -> CoreDecomposition:
    return CoreDecomposition(g.layer_count, {}, TraversalStats(), (0,) * g.layer_count)


def _children(k: Vector, bounds: Vector) -> Iterator[Vector]:
    for layer, b in enumerate(bounds):
        if k[layer] < b:
            yield k[:layer] + (k[layer] + 1,) + k[layer + 1:]


# --- engines --------------------------------------------------------------

def decompose_naive(g: MultilayerGraph, require: Iterable[int] = ()) -> CoreDecomposition:
    if g.vertex_count == 0:
        return _empty(g)
    bounds = layer_bounds(g)
    box = _box(bounds)
    rows = batch_peel(g, box)
    keep = rows.any(axis=1)
    need = sorted(set(require))
    if need:
        keep &= rows[:, need].all(axis=1)
    rows = rows[keep]
    firsts = {}
    for i, key in enumerate(np.packbits(rows, axis=1)):
        firsts.setdefault(key.tobytes(), i)
    out = _Collector(g, _masks(g))
    for i in firsts.values():
        out.add(mask_of(np.flatnonzero(rows[i]).tolist()))
    stats = TraversalStats(cores_computed=len(box), cores_visited=len(box))
    return out.build(stats, bounds)


def decompose_bfs(
    g: MultilayerGraph,
    require: Iterable[int] = (),
    on_node: NodeHook | None = None,
) -> CoreDecomposition:
    """Level-order lattice visit peeling each node from the intersection of its fathers.

    ``on_node(k, fathers, core)`` is called after every peeling, with vertex sets.
    """
    if g.vertex_count == 0:
        return _empty(g)
    am = _masks(g)
    full = (1 << g.vertex_count) - 1
    need = mask_of(require)
    bounds = layer_bounds(g)
    out = _Collector(g, am)
    stats = TraversalStats()
    root = (0,) * g.layer_count
    fathers: dict[Vector, list] = {root: []}
    queue = deque([root])
    while queue:
        k = queue.popleft()
        stats.cores_visited += 1
        fs = fathers.pop(k)
        # a node with an empty (hence never registered) father is empty itself
        if len(fs) != _nnz(k):
            continue
        C = _peel_from_fathers(am, fs, k, full)
        stats.cores_computed += 1
        if on_node is not None:
            on_node(k, [set_of(f) for f in fs], set_of(C))
        if not C or C & need != need:
            continue
        out.add(C)
        for child in _children(k, bounds):
            if child not in fathers:
                fathers[child] = []
                queue.append(child)
            fathers[child].append(C)
    return out.build(stats, bounds)


def dfs_layer_order(g: MultilayerGraph, order="random", seed=0) -> list[int]:
    if order == "random":
        layers = list(g.layers())
        random.Random(seed).shuffle(layers)
        return layers
    if order == "density":
        return sorted(g.layers(), key=lambda layer: (layer_density(g, layer), layer))
    layers = [int(x) for x in order]
    if sorted(layers) != list(g.layers()):
        raise ValueError("layer order must be a permutation of the layers")
    return layers


def decompose_dfs(
    g: MultilayerGraph,
    seed: int = 0,
    order="random",
    require: Iterable[int] = (),
) -> CoreDecomposition:
    """Path-wise lattice visit.

    Layers leave the expandable set ``R`` one per round. From every queued
    vector, paths along layers still in ``R`` feed the next round's queue,
    while paths along layers already out of ``R`` only produce output.
    """
    if g.vertex_count == 0:
        return _empty(g)
    am = _masks(g)
    full = (1 << g.vertex_count) - 1
    need = mask_of(require)
    L = g.layer_count
    out = _Collector(g, am)
    stats = TraversalStats(cores_computed=1, cores_visited=1)
    if full & need != need:
        return out.build(stats, layer_bounds(g))
    out.add(full)

    remaining = dfs_layer_order(g, order, seed)
    queue: dict[Vector, int] = {(0,) * L: full}
    while remaining:
        remaining.pop(0)
        expandable = set(remaining)
        nxt: dict[Vector, int] = {}
        for k, C in queue.items():
            for layer in range(L):
                if k[layer] != 0:
                    continue
                path = _path(am, C, k, layer, need, peeled=True)
                stats.cores_computed += len(path)
                stats.cores_visited += len(path)
                for kk, CC in path:
                    out.add(CC)
                    if layer in expandable:
                        nxt.setdefault(kk, CC)
        queue = nxt
    return out.build(stats, layer_bounds(g))


def decompose_hybrid(
    g: MultilayerGraph,
    require: Iterable[int] = (),
    on_node: NodeHook | None = None,
) -> CoreDecomposition:
    """BFS with look-ahead, seeded by one single-layer decomposition per layer.

    Look-ahead is applied to every materialized core, path cores included.
    ``on_node`` sees only actual peelings.
    """
    if g.vertex_count == 0:
        return _empty(g)
    am = _masks(g)
    full = (1 << g.vertex_count) - 1
    need = mask_of(require)
    L = g.layer_count
    bounds = layer_bounds(g)
    out = _Collector(g, am)
    stats = TraversalStats()
    root = (0,) * L
    settled: dict[Vector, int] = {}

    def look_ahead(k: Vector, C: int) -> None:
        top = out.add(C)
        for v in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(k, top))):
            if v != k and v not in settled:
                settled[v] = C
                stats.lookahead_skips += 1

    for layer in range(L):
        path = _path(am, full, root, layer, need)
        stats.cores_computed += len(path)
        for k, C in path:
            settled.setdefault(k, C)
            look_ahead(k, C)

    fathers: dict[Vector, list] = {root: []}
    queue = deque([root])
    while queue:
        k = queue.popleft()
        stats.cores_visited += 1
        fs = fathers.pop(k)
        C = settled.pop(k, None)
        if C is None:
            if len(fs) != _nnz(k):
                continue
            C = _peel_from_fathers(am, fs, k, full)
            stats.cores_computed += 1
            if on_node is not None:
                on_node(k, [set_of(f) for f in fs], set_of(C))
            if not C or C & need != need:
                continue
            look_ahead(k, C)
        for child in _children(k, bounds):
            if child not in fathers:
                fathers[child] = []
                queue.append(child)
            fathers[child].append(C)
    return out.build(stats, bounds)


def decompose(
    g: MultilayerGraph,
    engine: str = "hybrid",
    seed: int = 0,
    require: Iterable[int] = (),
) -> CoreDecomposition:
    """Run one engine. With ``require``, only cores containing those vertices are
    kept, and the traversal does not expand past a core that misses one."""
    if engine == "naive":
        return decompose_naive(g, require)
    if engine == "bfs":
        return decompose_bfs(g, require)
    if engine == "dfs":
        return decompose_dfs(g, seed=seed, require=require)
    if engine == "hybrid":
        return decompose_hybrid(g, require)
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def lookup(d: CoreDecomposition, k: Sequence[int]) -> Core | None:
    """Resolve any vector, maximal or not, to its distinct core.

    Every stored core whose vector dominates ``k`` is nested in ``C_k``, and
    ``C_k`` is itself stored, so the answer is the largest such entry.
    """
    k = tuple(k)
    if len(k) != d.layer_count:
        raise ValueError(f"vector has {len(k)} components, decomposition has {d.layer_count} layers")
    best = None
    for vec, core in d.cores.items():
        if all(a >= b for a, b in zip(vec, k)) and (best is None or len(core) > len(best)):
            best = core
    return best

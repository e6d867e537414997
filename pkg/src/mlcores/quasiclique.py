"""Frequent cross-graph quasi-cliques and core-based search-space pruning.

``S`` is a gamma-quasi-clique in layer ``l`` when every member has at least
``gamma * (|S| - 1)`` neighbors inside ``S`` in that layer. A frequent
cross-graph quasi-clique is a maximal ``S`` of size ``>= min_size`` that is a
``Gamma(l)``-quasi-clique in at least ``ceil(min_sup * |L|)`` layers.

Every such ``S`` sits inside a core whose maximal vector reaches
``ceil(Gamma(l) * (min_size - 1))`` on enough layers, so mining can be
restricted to the union of those cores.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .decomposition import CoreDecomposition, _masks, decompose
from .errors import CapExceededError
from .graph import MultilayerGraph, VertexSet, mask_of, members, set_of

DEFAULT_ENUM_CAP = 30


def _exact(x: float) -> Fraction:
    # read floats as the decimal the user wrote, so 0.8 * 5 is exactly 4
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def ceil_mul(a: float, b: int) -> int:
    return math.ceil(_exact(a) * b)


@dataclass(frozen=True)
class MiningParams:
    gamma: float | tuple = 1.0  # one value for all layers, or one per layer
    min_sup: float = 1.0
    min_size: int = 2

    def __post_init__(self):
        if isinstance(self.gamma, (list, tuple)):
            object.__setattr__(self, "gamma", tuple(self.gamma))
        gammas = self.gamma if isinstance(self.gamma, tuple) else (self.gamma,)
        if not gammas or any(not 0 < x <= 1 for x in gammas):
            raise ValueError("gamma values must lie in (0, 1]")
        if not 0 < self.min_sup <= 1:
            raise ValueError("min_sup must lie in (0, 1]")
        if int(self.min_size) != self.min_size or self.min_size < 2:
            raise ValueError("min_size must be an integer >= 2")

    def gammas(self, layer_count: int) -> tuple:
        if isinstance(self.gamma, tuple):
            if len(self.gamma) != layer_count:
                raise ValueError(f"gamma has {len(self.gamma)} values, graph has {layer_count} layers")
            return self.gamma
        return (self.gamma,) * layer_count

    def required_support(self, layer_count: int) -> int:
        return ceil_mul(self.min_sup, layer_count)

    def thresholds(self, layer_count: int, size: int) -> tuple:
        """Per-layer in-set degree a member of a size-``size`` quasi-clique needs."""
        return tuple(ceil_mul(g, size - 1) for g in self.gammas(layer_count))


@dataclass
class QuasiCliqueSet:
    subgraphs: list = field(default_factory=list)  # (VertexSet, supporting layers), canonical order
    search_space: VertexSet = frozenset()  # vertex set the miner was restricted to

    def __len__(self) -> int:
        return len(self.subgraphs)

    def __iter__(self):
        return iter(self.subgraphs)

    def sets(self) -> frozenset:
        return frozenset(s for s, _ in self.subgraphs)


def is_quasi_clique(g: MultilayerGraph, S: Iterable[int], layer: int, gamma: float) -> bool:
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    g.check_layer(layer)
    m = mask_of(S)
    if not m:
        raise ValueError("quasi-clique test on an empty vertex set")
    need = ceil_mul(gamma, m.bit_count() - 1)
    nbrs = g.neighbor_masks(layer)
    return all((nbrs[u] & m).bit_count() >= need for u in members(m))


def support(g: MultilayerGraph, S: Iterable[int], p: MiningParams) -> tuple[int, ...]:
    """Layers in which ``S`` is a quasi-clique under ``p``."""
    m = mask_of(S)
    am = _masks(g)
    th = p.thresholds(g.layer_count, m.bit_count())
    return tuple(
        layer for layer, nbrs in enumerate(am)
        if all((nbrs[u] & m).bit_count() >= th[layer] for u in members(m))
    )


def prune_graph(g: MultilayerGraph, d: CoreDecomposition, p: MiningParams) -> VertexSet:
    """Union of the cores whose maximal vector meets the size-``min_size`` thresholds on enough layers."""
    L = g.layer_count
    th = p.thresholds(L, p.min_size)
    need = p.required_support(L)
    out: set = set()
    for vec, core in d.cores.items():
        if sum(1 for a, t in zip(vec, th) if a >= t) >= need:
            out |= core.vertices
    return frozenset(out)


class _Miner:
    """Set-enumeration search for sets that are quasi-cliques in every layer of ``layers``.

    A qualifying set is a quasi-clique in all layers of some subset of
    ``required_support`` layers, so the caller runs one search per such subset.
    Fixing the layers lets every member be held to every layer's bound at once.
    """

    def __init__(self, g: MultilayerGraph, p: MiningParams, layers: Sequence[int], bound: bool):
        L = g.layer_count
        n = g.vertex_count
        am = _masks(g)
        gammas = p.gammas(L)
        self.am = [am[layer] for layer in layers]
        self.min_size = p.min_size
        self.bound = bound
        self.th = [tuple(ceil_mul(gammas[layer], s - 1) if s else 0 for layer in layers) for s in range(n + 2)]
        # largest quasi-clique a vertex of in-set degree d can belong to, per layer
        self.cap = []
        for layer in layers:
            q = _exact(gammas[layer])
            self.cap.append([math.floor(d / q) + 1 for d in range(n + 1)])
        # for gamma >= 1/2 any two members are adjacent or share a neighbor inside the set
        self.short = [nbrs for nbrs, layer in zip(self.am, layers) if 2 * _exact(gammas[layer]) >= 1]
        self.found: set = set()

    def qualifies(self, X: int) -> bool:
        s = X.bit_count()
        if s < self.min_size:
            return False
        th = self.th[s]
        return all(
            (nbrs[u] & X).bit_count() >= t
            for nbrs, t in zip(self.am, th)
            for u in members(X)
        )

    def narrow(self, X: int, P: int) -> int:
        """Drop candidates that no qualifying extension can hold; -1 if none exists.

        An extension ``Y`` has at least ``smin`` vertices, so each member needs
        ``thresholds(smin)`` neighbors inside ``Y``, hence inside ``X | P``, in
        every layer. Degrees inside ``X | P`` also cap how large ``Y`` can get.
        """
        smin = max(X.bit_count() + 1, self.min_size)
        th = self.th[smin]
        while True:
            U = X | P
            if U.bit_count() < smin:
                return -1
            for u in members(X):
                for nbrs, t, cap in zip(self.am, th, self.cap):
                    d = (nbrs[u] & U).bit_count()
                    if d < t or cap[d] < smin:
                        return -1
            for nbrs in self.short:
                for u in members(X):
                    reach = nbrs[u]
                    for w in members(nbrs[u] & U):
                        reach |= nbrs[w]
                    if X & ~reach & ~(1 << u):
                        return -1
                    P &= reach
            drop = 0
            for v in members(P):
                for nbrs, t in zip(self.am, th):
                    if (nbrs[v] & U).bit_count() < t:
                        drop |= 1 << v
                        break
            if not drop:
                return P
            P &= ~drop

    def expand(self, X: int, P: int) -> None:
        if self.bound:
            P = self.narrow(X, P)
            if P < 0:
                return
            # look-ahead: if the union of the subtree qualifies, nothing below it is maximal
            if P & (P - 1) and self.qualifies(X | P):
                self.found.add(X | P)
                return
        elif (X | P).bit_count() < self.min_size:
            return
        while P:
            low = P & -P
            P ^= low
            Y = X | low
            if self.qualifies(Y):
                self.found.add(Y)
            self.expand(Y, P)


def _maximal(found: Iterable[int]) -> list:
    kept: list = []
    for m in sorted(found, key=lambda m: -m.bit_count()):
        if not any(m & k == m for k in kept):
            kept.append(m)
    return kept


def mine_fcgqc(
    g: MultilayerGraph,
    restrict: Iterable[int] | None,
    p: MiningParams,
    bound: bool = True,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> QuasiCliqueSet:
    """Maximal frequent cross-graph quasi-cliques inside ``restrict`` (all of V when None).

    Set-enumeration tree in vertex order. With ``bound`` the candidate set is
    narrowed at every node by the degree bound of :meth:`_Miner.narrow`;
    without it every subset is visited and ``restrict`` may not exceed
    ``enum_cap`` vertices.
    """
    p.gammas(g.layer_count)  # validates a per-layer gamma against the graph
    R = (1 << g.vertex_count) - 1 if restrict is None else mask_of(restrict)
    if R >> g.vertex_count:
        raise ValueError("restrict contains vertices outside the graph")
    if not bound and R.bit_count() > enum_cap:
        raise CapExceededError(
            f"unbounded enumeration refused: {R.bit_count()} vertices exceed cap {enum_cap}"
        )
    L = g.layer_count
    found: set = set()
    for layers in itertools.combinations(range(L), p.required_support(L)) if L else ():
        miner = _Miner(g, p, layers, bound)
        miner.expand(0, R)
        found |= miner.found
    out = [(set_of(m), support(g, members(m), p)) for m in _maximal(found)]
    out.sort(key=lambda f: sorted(f[0]))
    return QuasiCliqueSet(out, set_of(R))


def mine_fcgqc_pruned(
    g: MultilayerGraph,
    p: MiningParams,
    engine: str = "hybrid",
    bound: bool = True,
    enum_cap: int = DEFAULT_ENUM_CAP,
    d: CoreDecomposition | None = None,
) -> QuasiCliqueSet:
    """Mine on the pruned vertex set; ``search_space`` of the result is that set."""
    if d is None:
        d = decompose(g, engine)
    return mine_fcgqc(g, prune_graph(g, d, p), p, bound, enum_cap)

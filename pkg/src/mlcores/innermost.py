"""Inner-most cores: the cores whose maximal vector no other core dominates.

:func:`innermost_cores` extracts them directly by recursing over layers in
order of increasing density. Along the first ``|L|-1`` layers it follows core
paths, largest component first; at the last layer it asks for the single core
of highest order, using a floor learned from the cores already found. The
floors live in nested maps keyed by the prefix of the vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .decomposition import (
    Core,
    CoreDecomposition,
    Vector,
    _check_vector,
    _dmu,
    _masks,
    _path,
    _peel,
)
from .graph import MultilayerGraph, layer_density, mask_of, set_of


class RightInnermostContext:
    """Nested maps from vector prefixes to the floor of the last component.

    One map level per layer but the last; lookups of missing keys give 0.
    """

    def __init__(self, depth: int):
        self.depth = depth
        self.root: dict = {}

    def get(self, prefix: Sequence[int]) -> int:
        node = self.root
        for key in prefix[: self.depth]:
            node = node.get(key)
            if node is None:
                return 0
        return node if isinstance(node, int) else 0

    def set(self, prefix: Sequence[int], value: int) -> None:
        prefix = tuple(prefix[: self.depth])
        node = self.root
        for key in prefix[:-1]:
            node = node.setdefault(key, {})
        node[prefix[-1]] = value

    def open(self, prefix: Sequence[int]) -> None:
        """Add an empty map under ``prefix`` (the recursion is about to fill it)."""
        node = self.root
        for key in prefix:
            node = node.setdefault(key, {})

    def floor(self, prefix: Sequence[int]) -> int:
        """Max of the stored values over the prefixes with one component bumped by 1."""
        prefix = tuple(prefix[: self.depth])
        best = 0
        for i in range(len(prefix)):
            bumped = prefix[:i] + (prefix[i] + 1,) + prefix[i + 1:]
            best = max(best, self.get(bumped))
        return best

    def leaves(self) -> Iterator[tuple[Vector, int]]:
        def walk(node, prefix):
            for key, child in node.items():
                if isinstance(child, dict):
                    yield from walk(child, prefix + (key,))
                else:
                    yield prefix + (key,), child

        return walk(self.root, ())

    @classmethod
    def from_nested(cls, depth: int, nested: dict) -> "RightInnermostContext":
        ctx = cls(depth)
        ctx.root = nested
        return ctx


@dataclass
class InnermostSet:
    cores: dict = field(default_factory=dict)  # maximal vector -> Core

    def __len__(self) -> int:
        return len(self.cores)

    def __iter__(self) -> Iterator[Core]:
        return iter(self.cores.values())

    def as_map(self) -> dict:
        return {k: c.vertices for k, c in self.cores.items()}


def _dominated(a: Vector, b: Vector) -> bool:
    """True when ``b`` dominates ``a``: componentwise ``>=`` and not equal."""
    return a != b and all(x <= y for x, y in zip(a, b))


def filter_innermost(d: CoreDecomposition) -> InnermostSet:
    keys = list(d.cores)
    keep = {k: d.cores[k] for k in keys if not any(_dominated(k, o) for o in keys)}
    return InnermostSet(dict(sorted(keep.items())))


def density_order(g: MultilayerGraph) -> list[int]:
    """Layers by non-decreasing density, ties by index."""
    if g.vertex_count == 0:
        return list(g.layers())
    return sorted(g.layers(), key=lambda layer: (layer_density(g, layer), layer))


class _Run:
    """One extraction over a fixed layer order. Vectors are in sorted order inside."""

    def __init__(self, g: MultilayerGraph, order: Sequence[int], ctx: RightInnermostContext):
        self.g = g
        self.order = list(order)
        am = _masks(g)
        self.am = [am[layer] for layer in self.order]
        self.ctx = ctx
        self.found: dict[Vector, int] = {}

    def to_sorted(self, k: Vector) -> Vector:
        return tuple(k[layer] for layer in self.order)

    def highest(self, S: int, k: Vector, pos: int) -> tuple[Vector, int] | None:
        C = _peel(self.am, S, k)
        if not C:
            return None
        path = _path(self.am, C, k, pos, peeled=True)
        return path[-1] if path else (k, C)

    def rim(self, S: int, k: Vector, r: int) -> None:
        last = len(k) - 1
        if r < last:
            path = _path(self.am, S, k, r, peeled=True)
            for kk, C in reversed([(k, S)] + path):
                self.ctx.open(kk[: r + 1])
                self.rim(C, kk, r + 1)
            return
        floor = self.ctx.floor(k[:last])
        probe = k[:last] + (floor,)
        hit = self.highest(S, probe, last)
        if hit is None:
            if last:
                self.ctx.set(probe, floor)
            return
        vec, C = hit
        if last:
            self.ctx.set(vec, vec[last] + 1)
        self.found[vec] = C


def _cores(run: _Run) -> dict:
    out = {}
    for C in run.found.values():
        vec = _dmu(_masks(run.g), C)
        out[vec] = Core(set_of(C), vec)
    return dict(sorted(out.items()))


def rim_cores(
    g: MultilayerGraph,
    S: Iterable[int],
    k: Sequence[int],
    r: int,
    M: RightInnermostContext | None = None,
    order: Sequence[int] | None = None,
) -> list[Core]:
    """Right-inner-most cores of ``C_k`` from position ``r`` of ``order`` onward.

    ``k`` is in the graph's own layer order; ``order`` defaults to
    :func:`density_order`. ``S`` should be the core of ``k``.
    """
    k = _check_vector(g, k)
    order = density_order(g) if order is None else list(order)
    if sorted(order) != list(g.layers()):
        raise ValueError("layer order must be a permutation of the layers")
    if not 0 <= r < g.layer_count:
        raise ValueError(f"position {r} out of range [0, {g.layer_count})")
    if M is None:
        M = RightInnermostContext(g.layer_count - 1)
    run = _Run(g, order, M)
    ks = run.to_sorted(k)
    S = _peel(run.am, mask_of(S), ks)
    if S:
        run.rim(S, ks, r)
    return list(_cores(run).values())


def innermost_core_in_layer(
    g: MultilayerGraph, S: Iterable[int], k: Sequence[int], layer: int
) -> Core | None:
    """The core inside ``S`` of highest ``layer`` component, with ``k`` as floor; None if empty."""
    k = _check_vector(g, k)
    g.check_layer(layer)
    am = _masks(g)
    C = _peel(am, mask_of(S), k)
    if not C:
        return None
    path = _path(am, C, k, layer, peeled=True)
    if path:
        C = path[-1][1]
    return Core(set_of(C), _dmu(am, C))


def innermost_cores(g: MultilayerGraph, order: Sequence[int] | None = None) -> InnermostSet:
    if g.vertex_count == 0 or g.layer_count == 0:
        return InnermostSet()
    cores = rim_cores(g, g.vertices(), (0,) * g.layer_count, 0, order=order)
    return InnermostSet({c.vector: c for c in cores})

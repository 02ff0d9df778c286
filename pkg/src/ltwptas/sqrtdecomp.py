"""Tree decompositions of width O(sqrt(lambda * n)) from BFS levels.

The levels around a vertex are cut into maximal runs of small levels
(``|L|^2 <= lambda*n``, the I-intervals) and large levels (the J-intervals).
Small runs get the path decomposition of consecutive level pairs.  Large
runs get an inner decomposition widened by the neighbouring border levels.
The pieces are chained in level order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .graph import Graph, bfs_layers, induced_subgraph
from .treedecomp import DecompositionError, TreeDecomposition, heuristic_decomposition, require_valid, width

InnerProvider = Callable[[Graph, frozenset], TreeDecomposition]


def min_fill_provider(g: Graph, verts: frozenset) -> TreeDecomposition:
    return heuristic_decomposition(g, "min-fill", vertices=verts)


@dataclass
class IntervalSplit:
    levels: list[int]
    intervals: list[tuple[str, int, int]]  # (kind "I" or "J", first level, last level)
    lam: int
    n: int

    @property
    def threshold(self) -> float:
        return math.sqrt(self.lam * self.n)

    def is_small(self, size: int) -> bool:
        return size * size <= self.lam * self.n


def split_levels(sizes: list[int], lam: int, n: int) -> IntervalSplit:
    """Maximal runs of small and large levels, level 0 included."""
    if lam < 1:
        raise ValueError("lambda must be positive")
    intervals: list[tuple[str, int, int]] = []
    for j, s in enumerate(sizes):
        kind = "I" if s * s <= lam * n else "J"
        if intervals and intervals[-1][0] == kind:
            intervals[-1] = (kind, intervals[-1][1], j)
        else:
            intervals.append((kind, j, j))
    return IntervalSplit(list(sizes), intervals, lam, n)


@dataclass
class SqrtDecomposition:
    decomposition: TreeDecomposition
    split: IntervalSplit
    center: int
    interval_widths: list[int]
    width: int
    bound: int
    apex: frozenset = field(default_factory=frozenset)

    @property
    def within_bound(self) -> bool:
        return self.width <= self.bound

    def report_lines(self) -> list[str]:
        sp = self.split
        parts = " ".join(f"{k}[{a},{b}]:{w}" for (k, a, b), w in zip(sp.intervals, self.interval_widths))
        return [
            f"n={sp.n}",
            f"lambda={sp.lam}",
            f"threshold={sp.threshold:.4f}",
            f"center={self.center}",
            f"apex={len(self.apex)}",
            f"intervals={parts}",
            f"width={self.width}",
            f"bound={self.bound}",
            f"within_bound={str(self.within_bound).lower()}",
        ]


def width_bound(lam: int, n: int, mu: int = 0) -> int:
    """``floor(3 * sqrt(lam * n)) + mu`` in exact integer arithmetic."""
    return math.isqrt(9 * lam * n) + mu


def sqrt_decomposition(g: Graph, lam: int, v: int | None = None,
                       inner: InnerProvider = min_fill_provider, check: bool = True) -> SqrtDecomposition:
    if g.n == 0:
        raise DecompositionError("empty graph")
    v = 0 if v is None else v
    layers, unreachable = bfs_layers(g, v)
    if unreachable:
        raise DecompositionError("graph is not connected")
    split = split_levels([len(layer) for layer in layers], lam, g.n)
    bags: list[frozenset] = []
    parent: list[int] = []
    widths: list[int] = []
    hook = -1  # node the next piece hangs from
    last = len(layers) - 1
    for kind, a, b in split.intervals:
        if kind == "I":
            blocks = [layers[a]] if a == b else [layers[j] | layers[j + 1] for j in range(a, b)]
            for blk in blocks:
                bags.append(blk)
                parent.append(hook)
                hook = len(bags) - 1
            widths.append(max(len(blk) for blk in blocks) - 1)
        else:
            verts = frozenset().union(*layers[a:b + 1])
            td = inner(g, verts)
            border = (layers[a - 1] if a > 0 else frozenset()) | (layers[b + 1] if b < last else frozenset())
            offset = len(bags)
            for t, blk in enumerate(td.bags):
                bags.append(frozenset(blk) | border)
                p = td.parent[t]
                parent.append(hook if p < 0 else p + offset)
            widths.append(max(len(blk) for blk in bags[offset:]) - 1)
            hook = offset + td.root
    out = TreeDecomposition(bags, parent, g)
    if check:
        require_valid(out, g)
    return SqrtDecomposition(out, split, v, widths, width(out), width_bound(lam, g.n))


def sqrt_decomposition_apex(g: Graph, lam: int, mu: int, apex: Iterable[int], v: int | None = None,
                            inner: InnerProvider = min_fill_provider) -> SqrtDecomposition:
    """Decompose ``g - apex`` and add the apex set to every block."""
    apex = g.check_vertices(apex)
    if len(apex) > mu:
        raise ValueError(f"apex set of size {len(apex)} exceeds mu={mu}")
    rest = [w for w in g.vertices if w not in apex]
    if not rest:
        td = TreeDecomposition([apex], [-1], g)
        return SqrtDecomposition(td, split_levels([], lam, g.n), -1, [], width(td), width_bound(lam, g.n, mu), apex)
    sub, back = induced_subgraph(g, rest)
    fwd = {w: i for i, w in enumerate(back)}
    if v is None:
        v = back[0]
    elif v in apex:
        raise ValueError("center must not be an apex vertex")
    res = sqrt_decomposition(sub, lam, fwd[v], inner=inner)
    td = res.decomposition.relabel(back).with_extra(apex)
    td = TreeDecomposition(td.bags, td.parent, g)
    require_valid(td, g)
    return SqrtDecomposition(td, res.split, v, [w + len(apex) for w in res.interval_widths],
                             width(td), width_bound(lam, g.n, mu), apex)

"""Deterministic graph corpora.

Every generator taking ``seed`` draws from its own ``random.Random`` so
results depend on the arguments alone.
"""

from __future__ import annotations

import random
from itertools import combinations

import numpy as np
from scipy.spatial import Delaunay

from .graph import Graph, components, is_clique, union_graph
from .treedecomp import CliqueSumDecomposition


def path(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    _positive(n=n)
    return Graph.from_edges(n, combinations(range(n), 2))


def star(leaves: int) -> Graph:
    _positive(leaves=leaves)
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def wheel(rim: int) -> Graph:
    """Cycle ``0..rim-1`` plus hub ``rim``."""
    c = cycle(rim)
    return union_graph(rim + 1, c.edges(), [(rim, i) for i in range(rim)])


def grid(a: int, b: int) -> Graph:
    """``a`` rows by ``b`` columns; vertex ``r*b + c``."""
    _positive(a=a, b=b)
    edges = []
    for r in range(a):
        for c in range(b):
            v = r * b + c
            if c + 1 < b:
                edges.append((v, v + 1))
            if r + 1 < a:
                edges.append((v, v + b))
    return Graph.from_edges(a * b, edges)


def random_tree(n: int, seed: int) -> Graph:
    _positive(n=n)
    rng = random.Random(seed)
    return Graph.from_edges(n, [(i, rng.randrange(i)) for i in range(1, n)])


def random_connected(n: int, p: float, seed: int) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``p``."""
    _positive(n=n)
    rng = random.Random(seed)
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for u, v in combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < p:
            edges.add((u, v))
    return Graph.from_edges(n, edges)


def k_tree(n: int, k: int, seed: int) -> Graph:
    """Random ``k``-tree on ``n >= k+1`` vertices (tree-width exactly ``k``)."""
    _positive(k=k)
    if n < k + 1:
        raise ValueError("k_tree needs n >= k+1")
    rng = random.Random(seed)
    edges = set(combinations(range(k + 1), 2))
    cliques = [c for c in combinations(range(k + 1), k)]
    for v in range(k + 1, n):
        base = cliques[rng.randrange(len(cliques))]
        edges.update((u, v) for u in base)
        cliques.extend(tuple(sorted(set(base) - {u} | {v})) for u in base)
    return Graph.from_edges(n, edges)


def partial_k_tree(n: int, k: int, keep: float, seed: int) -> Graph:
    """Random edge-subgraph of a ``k``-tree (tree-width at most ``k``)."""
    rng = random.Random(seed)
    full = k_tree(n, k, seed)
    return Graph.from_edges(n, [e for e in full.edges() if rng.random() < keep])


def planar(n: int, seed: int, drop: float = 0.0) -> Graph:
    """Delaunay triangulation of ``n`` random points.

    With ``drop > 0`` each edge is removed with that probability unless the
    removal would disconnect the graph.
    """
    if n < 3:
        return path(n)
    rng = np.random.default_rng(seed)
    while True:
        pts = rng.random((n, 2))
        try:
            tri = Delaunay(pts)
        except Exception:
            continue
        break
    edges = set()
    for simplex in tri.simplices:
        for a, b in combinations(sorted(int(x) for x in simplex), 2):
            edges.add((a, b))
    g = Graph.from_edges(n, edges)
    if drop <= 0:
        return g
    prng = random.Random(seed)
    current = set(g.edges())
    for e in sorted(current):
        if prng.random() < drop:
            trial = current - {e}
            if len(components(Graph.from_edges(n, trial))) == 1:
                current = trial
    return Graph.from_edges(n, current)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform-ish simple ``d``-regular graph by configuration-model rejection."""
    if (n * d) % 2 or d >= n:
        raise ValueError("need n*d even and d < n")
    rng = random.Random(seed)
    for _ in range(10000):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = list(zip(stubs[::2], stubs[1::2]))
        if any(a == b for a, b in pairs):
            continue
        norm = {(min(a, b), max(a, b)) for a, b in pairs}
        if len(norm) == len(pairs):
            return Graph.from_edges(n, norm)
    raise RuntimeError("could not sample a simple regular graph")


def apex_over(base: Graph, mu: int, seed: int, universal: bool = False) -> tuple[Graph, frozenset[int]]:
    """Add ``mu`` apex vertices ``base.n .. base.n+mu-1``.

    Apexes attach to every base vertex when ``universal``, otherwise to a
    random non-empty subset.
    """
    if mu < 0:
        raise ValueError("mu must be non-negative")
    rng = random.Random(seed)
    edges = list(base.edges())
    for a in range(base.n, base.n + mu):
        if universal or base.n == 0:
            targets = list(range(base.n))
        else:
            targets = [v for v in range(base.n) if rng.random() < 0.5] or [rng.randrange(base.n)]
        edges += [(a, v) for v in targets]
    return Graph.from_edges(base.n + mu, edges), frozenset(range(base.n, base.n + mu))


def _cliques_of_size(g: Graph, size: int) -> list[tuple[int, ...]]:
    if size == 0:
        return [()]
    return [c for c in combinations(range(g.n), size) if is_clique(g, c)]


def clique_sum_of(parts, adhesion: int, seed: int, apexes=None) -> tuple[Graph, CliqueSumDecomposition]:
    """Glue ``parts`` along cliques and return the ground-truth decomposition.

    Part ``i > 0`` is glued onto a random earlier part along a clique of
    size ``adhesion`` (or the largest smaller size both parts offer).  Node
    ``i`` of the decomposition holds part ``i``; ``apexes[i]`` (part-local
    ids) becomes that node's apex set.
    """
    if not parts:
        raise ValueError("need at least one part")
    if adhesion < 0 or adhesion > min(p.n for p in parts):
        raise ValueError("adhesion must be in 0..min part size")
    rng = random.Random(seed)
    apexes = apexes or [frozenset()] * len(parts)
    blocks: list[list[int]] = []
    parent: list[int] = []
    edges: set[tuple[int, int]] = set()
    n = 0
    for idx, part in enumerate(parts):
        mapping: dict[int, int] = {}
        if idx == 0:
            parent.append(-1)
        else:
            p = rng.randrange(idx)
            parent.append(p)
            host_graph, host_block = parts[p], blocks[p]
            for size in range(adhesion, -1, -1):
                mine = _cliques_of_size(part, size)
                theirs = _cliques_of_size(host_graph, size)
                if mine and theirs:
                    break
            q_mine = mine[rng.randrange(len(mine))]
            q_theirs = theirs[rng.randrange(len(theirs))]
            for a, b in zip(q_mine, q_theirs):
                mapping[a] = host_block[b]
        for v in range(part.n):
            if v not in mapping:
                mapping[v] = n
                n += 1
        blocks.append([mapping[v] for v in range(part.n)])
        edges.update((min(mapping[a], mapping[b]), max(mapping[a], mapping[b])) for a, b in part.edges())
    g = Graph.from_edges(n, edges)
    csd = CliqueSumDecomposition(
        [frozenset(b) for b in blocks],
        parent,
        [frozenset(blocks[i][a] for a in apexes[i]) for i in range(len(parts))],
        graph=g,
    )
    return g, csd


def generate(kind: str, *args, seed: int = 0, **kwargs):
    """Dispatch by name; ``clique_sum_of`` also returns its decomposition."""
    table = {
        "grid": lambda a, b: grid(a, b),
        "path": lambda n: path(n),
        "cycle": lambda n: cycle(n),
        "complete": lambda n: complete(n),
        "star": lambda n: star(n),
        "wheel": lambda n: wheel(n),
        "k_tree": lambda n, k: k_tree(n, k, seed),
        "tree": lambda n: random_tree(n, seed),
        "random": lambda n, p=0.3: random_connected(n, p, seed),
        "planar": lambda n, drop=0.0: planar(n, seed, drop),
        "regular": lambda n, d: random_regular(n, d, seed),
        "apex_over": lambda base, mu, **kw: apex_over(base, mu, seed, **kw),
        "clique_sum_of": lambda ps, adhesion, **kw: clique_sum_of(ps, adhesion, seed, **kw),
    }
    if kind not in table:
        raise ValueError(f"unknown generator {kind!r}")
    return table[kind](*args, **kwargs)


def _positive(**kw):
    for name, val in kw.items():
        if val < 1:
            raise ValueError(f"{name} must be positive")

"""Tree decompositions over a graph class by recursive separator search.

A graph decomposes over a class ``C`` with clique bound ``omega`` when it
is in ``C`` itself or some set ``X`` of at most ``omega`` vertices splits it
into two or more components whose pieces ``<X | C> + K_X`` decompose.

The search tries separators first, by increasing size and then
lexicographically, and only falls back to the predicate on the whole
graph when no separator works.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from .graph import Graph, components
from .treedecomp import DecompositionError, TreeDecomposition, exact_treewidth, torso, validate

OVERCLASS_CEILING = int(os.environ.get("LTWPTAS_OVERCLASS_CEILING", "20"))


@dataclass(frozen=True)
class ClassPredicate:
    name: str
    test: Callable[[Graph], bool]
    omega: int

    def __call__(self, g: Graph) -> bool:
        return bool(self.test(g))


def _tw_at_most(g: Graph, w: int) -> bool:
    if g.n <= w + 1:
        return True
    res = exact_treewidth(g)
    if res.width <= w:
        return True
    if res.lower > w:
        return False
    raise DecompositionError("tree-width search ran out of budget")


def width_bound(w: int) -> ClassPredicate:
    """Graphs of tree-width at most ``w``."""
    return ClassPredicate(f"tw{w}", lambda g: _tw_at_most(g, w), w + 1)


def apex_width(w: int, mu: int) -> ClassPredicate:
    """Graphs with at most ``mu`` vertices whose removal leaves tree-width <= ``w``."""

    def test(g: Graph) -> bool:
        for size in range(min(mu, g.n) + 1):
            for xs in combinations(range(g.n), size):
                keep = [v for v in g.vertices if v not in xs]
                sub, _ = _induced(g, keep)
                if _tw_at_most(sub, w):
                    return True
        return False

    return ClassPredicate(f"apex{mu}tw{w}", test, w + 1 + mu)


def predicate_by_name(name: str) -> ClassPredicate:
    """``tw<w>`` or ``apex<mu>tw<w>``."""
    m = re.fullmatch(r"tw(\d+)", name)
    if m:
        return width_bound(int(m.group(1)))
    m = re.fullmatch(r"apex(\d+)tw(\d+)", name)
    if m:
        return apex_width(int(m.group(2)), int(m.group(1)))
    raise ValueError(f"unknown class {name!r}; use tw<w> or apex<mu>tw<w>")


def _induced(g: Graph, keep) -> tuple[Graph, list[int]]:
    keep = list(keep)
    pos = {v: i for i, v in enumerate(keep)}
    return Graph.from_edges(len(keep), [(pos[a], pos[b]) for a, b in g.edges() if a in pos and b in pos]), keep


@dataclass
class ClassDecomposition:
    decomposition: TreeDecomposition | None
    predicate: str
    separators_tried: int = 0
    predicate_calls: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return self.decomposition is not None


class _Search:
    def __init__(self, pred: ClassPredicate):
        self.pred = pred
        self.memo: dict = {}
        self.tried = 0
        self.calls = 0

    def in_class(self, verts: tuple, edges: frozenset) -> bool:
        self.calls += 1
        pos = {v: i for i, v in enumerate(verts)}
        g = Graph.from_edges(len(verts), [(pos[a], pos[b]) for a, b in edges])
        return self.pred(g)

    def solve(self, verts: tuple, edges: frozenset):
        """Nested ``(bag, [subtrees])`` whose root bag is ``verts``-local, or None."""
        key = (verts, edges)
        if key in self.memo:
            return self.memo[key]
        result = None
        adj = {v: set() for v in verts}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        for size in range(0, min(self.pred.omega, len(verts) - 2) + 1):
            for xs in combinations(verts, size):
                xset = set(xs)
                comps = _split(adj, [v for v in verts if v not in xset])
                if len(comps) < 2:
                    continue
                self.tried += 1
                pieces = []
                for comp in comps:
                    pv = tuple(sorted(xset | comp))
                    pe = frozenset(e for e in edges if e[0] in comp or e[1] in comp) | frozenset(combinations(xs, 2))
                    sub = self.solve(pv, pe)
                    if sub is None:
                        break
                    pieces.append(sub)
                else:
                    result = _glue(pieces, frozenset(xs))
                    break
            if result is not None:
                break
        if result is None and self.in_class(verts, edges):
            result = (frozenset(verts), [])
        self.memo[key] = result
        return result


def _split(adj, verts) -> list[set]:
    left = set(verts)
    out = []
    for v in verts:
        if v not in left:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        out.append(comp)
    return out


def _reroot(tree, xs: frozenset):
    """Re-hang a nested tree so that its root bag contains ``xs``."""
    # flatten
    bags, parent = [], []

    def walk(node, p):
        idx = len(bags)
        bags.append(node[0])
        parent.append(p)
        for ch in node[1]:
            walk(ch, idx)

    walk(tree, -1)
    start = next(i for i, b in enumerate(bags) if xs <= b)
    nbrs = {i: set() for i in range(len(bags))}
    for i, p in enumerate(parent):
        if p >= 0:
            nbrs[i].add(p)
            nbrs[p].add(i)

    def build(i, came):
        return (bags[i], [build(j, i) for j in sorted(nbrs[i]) if j != came])

    return build(start, -1)


def _glue(pieces, xs: frozenset):
    rooted = [_reroot(p, xs) for p in pieces]
    first = rooted[0]
    return (first[0], list(first[1]) + rooted[1:])


def _flatten(tree) -> tuple[list, list]:
    bags, parent = [], []
    stack = [(tree, -1)]
    while stack:
        node, p = stack.pop()
        idx = len(bags)
        bags.append(node[0])
        parent.append(p)
        for ch in reversed(node[1]):
            stack.append((ch, idx))
    return bags, parent


def decompose_over_class(g: Graph, pred: ClassPredicate, ceiling: int | None = None) -> ClassDecomposition:
    """Decomposition of ``g`` whose torsos all satisfy ``pred``, or a rejection."""
    ceiling = OVERCLASS_CEILING if ceiling is None else ceiling
    if g.n > ceiling:
        raise DecompositionError(f"n={g.n} exceeds class-decomposition ceiling {ceiling}")
    search = _Search(pred)
    tree = search.solve(tuple(g.vertices), frozenset(g.edges()))
    out = ClassDecomposition(None, pred.name, search.tried, search.calls)
    if tree is None:
        out.notes.append(f"no separator of size <= {pred.omega} splits into decomposable pieces and {pred.name} fails")
        return out
    bags, parent = _flatten(tree)
    out.decomposition = TreeDecomposition(bags, parent, g)
    return out


def torsos_satisfy(td: TreeDecomposition, g: Graph, pred: ClassPredicate) -> bool:
    return all(pred(torso(td, t, g)[0]) for t in td.nodes)


def decomposable_exhaustive(g: Graph, pred: ClassPredicate) -> bool:
    """Independent yes/no check: plain recursion over every separator, no memo."""

    def rec(verts: frozenset, edges: frozenset) -> bool:
        vs = sorted(verts)
        pos = {v: i for i, v in enumerate(vs)}
        if pred(Graph.from_edges(len(vs), [(pos[a], pos[b]) for a, b in edges])):
            return True
        for size in range(pred.omega + 1):
            for xs in combinations(vs, size):
                rest = verts - set(xs)
                sub = Graph.from_edges(len(vs), [(pos[a], pos[b]) for a, b in edges])
                comps = components(sub, [pos[v] for v in rest])
                if len(comps) < 2:
                    continue
                ok = True
                for comp in comps:
                    cv = {vs[i] for i in comp}
                    pe = {e for e in edges if e[0] in cv or e[1] in cv} | set(combinations(xs, 2))
                    if not rec(frozenset(cv) | frozenset(xs), frozenset(pe)):
                        ok = False
                        break
                if ok:
                    return True
        return False

    return rec(frozenset(g.vertices), frozenset(g.edges()))


def check_class_decomposition(td: TreeDecomposition, g: Graph, pred: ClassPredicate) -> list[str]:
    """Problems with a claimed decomposition over ``pred`` (empty when fine)."""
    problems = validate(td, g).lines()
    for t in td.nodes:
        if len(td.adhesion_set(t)) > pred.omega:
            problems.append(f"node {t}: adhesion {len(td.adhesion_set(t))} > {pred.omega}")
        if not pred(torso(td, t, g)[0]):
            problems.append(f"node {t}: torso fails {pred.name}")
    return problems

"""Exact dynamic programming on tree decompositions, plus brute-force oracles.

All three problems run through :func:`solve_on_decomposition`, a DP over a
nice decomposition whose per-vertex states are

* vertex cover / independent set: ``0`` out, ``1`` in;
* dominating set: ``0`` out and not yet dominated, ``1`` out and dominated
  (or exempt), ``2`` in.

Internally everything is minimised; independent set uses weight ``-1``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .graph import Graph
from .treedecomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    TreeDecomposition,
    nice_decomposition,
    require_valid,
)

BRUTE_FORCE_CEILING = int(os.environ.get("LTWPTAS_BRUTE_CEILING", "22"))


class ProblemKind(Enum):
    VC = "vc"
    DS = "ds"
    IS = "is"

    @property
    def minimize(self) -> bool:
        return self is not ProblemKind.IS

    @property
    def label(self) -> str:
        return {"vc": "vertex cover", "ds": "dominating set", "is": "independent set"}[self.value]

    @classmethod
    def parse(cls, s) -> "ProblemKind":
        if isinstance(s, cls):
            return s
        try:
            return cls(str(s).lower())
        except ValueError:
            raise ValueError(f"unknown problem {s!r}; expected vc, ds or is") from None


@dataclass
class Solution:
    kind: ProblemKind
    vertices: tuple[int, ...]
    feasible: bool
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(sorted(self.vertices))

    @property
    def value(self) -> int:
        return len(self.vertices)


class InfeasibleError(ValueError):
    pass


# -- predicates -------------------------------------------------------------------

def is_vertex_cover(g: Graph, xs: Iterable[int]) -> bool:
    xs = set(xs)
    return all(u in xs or v in xs for u, v in g.edges())


def is_independent_set(g: Graph, xs: Iterable[int]) -> bool:
    xs = set(xs)
    return not any(g.neighbors(u) & xs for u in xs)


def is_dominating_set(g: Graph, xs: Iterable[int], targets: Iterable[int] | None = None) -> bool:
    xs = set(xs)
    targets = g.vertices if targets is None else targets
    return all(v in xs or g.neighbors(v) & xs for v in targets)


def is_feasible(g: Graph, kind: ProblemKind, xs: Iterable[int]) -> bool:
    kind = ProblemKind.parse(kind)
    if kind is ProblemKind.VC:
        return is_vertex_cover(g, xs)
    if kind is ProblemKind.DS:
        return is_dominating_set(g, xs)
    return is_independent_set(g, xs)


# -- generic engine -------------------------------------------------------------------

@dataclass
class HookOption:
    dominated: frozenset[int]
    cost: int
    payload: object


class Hook:
    """External cost attached to a vertex set that some bag contains.

    ``lookup(in_set, out_set)`` returns the options for one assignment of
    ``verts``: each names the out-vertices it dominates (dominating set
    only), a non-negative size, and an opaque payload.  An empty list
    rules the assignment out.
    """

    def __init__(self, verts: Iterable[int], lookup: Callable[[frozenset, frozenset], Sequence[HookOption]]):
        self.verts = frozenset(verts)
        self._lookup = lookup
        self._memo: dict = {}

    def options(self, in_set: frozenset, out_set: frozenset) -> Sequence[HookOption]:
        key = (in_set, out_set)
        if key not in self._memo:
            self._memo[key] = list(self._lookup(in_set, out_set))
        return self._memo[key]


@dataclass
class DPResult:
    cost: int
    chosen: frozenset[int]
    payloads: list


def solve_on_decomposition(
    kind: ProblemKind,
    td: TreeDecomposition,
    decide: Iterable[int],
    adjacency: Callable[[int], Iterable[int]],
    fixed: Mapping[int, bool] | None = None,
    need: Iterable[int] | None = None,
    hooks: Sequence[Hook] = (),
    forced_in: Iterable[int] = (),
    forbidden: Iterable[int] = (),
) -> DPResult | None:
    """Optimise over subsets of ``decide``; ``None`` if nothing is feasible.

    ``fixed`` maps context vertices to in/out; they join every bag, cost
    nothing, and constrain their neighbours.  ``adjacency`` yields the
    constraint neighbours of a vertex (only neighbours in ``decide`` or
    ``fixed`` matter).  For dominating set only ``need`` vertices must end
    up dominated (default: all of ``decide``).  Hook costs are sizes; they
    are added for minimisation and subtracted for independent set.
    """
    kind = ProblemKind.parse(kind)
    decide = frozenset(decide)
    fixed = dict(fixed or {})
    forced_in = frozenset(forced_in)
    forbidden = frozenset(forbidden)
    need = decide if need is None else frozenset(need)
    universe = decide | frozenset(fixed)
    sign = 1 if kind.minimize else -1
    ds = kind is ProblemKind.DS
    nbrs = {v: frozenset(w for w in adjacency(v) if w in universe and w != v) for v in universe}

    if fixed:
        td = td.with_extra(fixed)
    nodes = nice_decomposition(td)
    for v in universe:
        if not any(v in nd.bag for nd in nodes):
            raise ValueError(f"vertex {v} missing from the decomposition")

    hooks_at: dict[int, list[Hook]] = {}
    for h in hooks:
        for i, nd in enumerate(nodes):
            if h.verts <= nd.bag:
                hooks_at.setdefault(i, []).append(h)
                break
        else:
            raise ValueError(f"no bag contains hook set {sorted(h.verts)}")

    def allowed(v):
        if v in fixed:
            return (1,) if fixed[v] else (0,)
        if v in forced_in:
            return (1,)
        if v in forbidden:
            return (0,)
        return (0, 1)

    # tables[i]: list of stages; each stage maps state -> (value, back)
    tables: list[list[dict]] = []
    bags = [tuple(sorted(nd.bag)) for nd in nodes]
    for i, nd in enumerate(nodes):
        bag = bags[i]
        if nd.kind == LEAF:
            tab = {(): (0, None)}
        elif nd.kind == INTRODUCE:
            v = nd.vertex
            pos = bag.index(v)
            child = tables[nd.children[0]][-1]
            npos = [k for k, u in enumerate(bag) if u in nbrs[v]]
            npos_child = [k if k < pos else k - 1 for k in npos]
            weight = sign if v in decide else 0
            exempt = v not in need
            tab = {}
            for cs, (val, _) in child.items():
                for s in allowed(v):
                    if ds:
                        if s == 1:
                            st = list(cs)
                            for k in npos_child:
                                if st[k] == 0:
                                    st[k] = 1
                            st.insert(pos, 2)
                            key, nv = tuple(st), val + weight
                        else:
                            dom = exempt or any(cs[k] == 2 for k in npos_child)
                            key, nv = cs[:pos] + (1 if dom else 0,) + cs[pos:], val
                    elif kind is ProblemKind.VC:
                        if s == 0 and any(cs[k] == 0 for k in npos_child):
                            continue
                        key, nv = cs[:pos] + (s,) + cs[pos:], val + (weight if s else 0)
                    else:
                        if s == 1 and any(cs[k] == 1 for k in npos_child):
                            continue
                        key, nv = cs[:pos] + (s,) + cs[pos:], val + (weight if s else 0)
                    old = tab.get(key)
                    if old is None or nv < old[0]:
                        tab[key] = (nv, cs)
        elif nd.kind == FORGET:
            child_bag = bags[nd.children[0]]
            pos = child_bag.index(nd.vertex)
            child = tables[nd.children[0]][-1]
            tab = {}
            for cs, (val, _) in child.items():
                if ds and cs[pos] == 0:
                    continue
                key = cs[:pos] + cs[pos + 1:]
                old = tab.get(key)
                if old is None or val < old[0]:
                    tab[key] = (val, cs)
        else:  # JOIN
            left = tables[nd.children[0]][-1]
            right = tables[nd.children[1]][-1]
            wts = [sign if u in decide else 0 for u in bag]
            tab = {}
            if ds:
                groups: dict = {}
                for rs, (rv, _) in right.items():
                    groups.setdefault(tuple(x == 2 for x in rs), []).append((rs, rv))
                for ls, (lv, _) in left.items():
                    pattern = tuple(x == 2 for x in ls)
                    overlap = sum(w for w, p in zip(wts, pattern) if p)
                    for rs, rv in groups.get(pattern, ()):
                        key = tuple(max(a, b) for a, b in zip(ls, rs))
                        nv = lv + rv - overlap
                        old = tab.get(key)
                        if old is None or nv < old[0]:
                            tab[key] = (nv, (ls, rs))
            else:
                for ls, (lv, _) in left.items():
                    r = right.get(ls)
                    if r is None:
                        continue
                    nv = lv + r[0] - sum(w for w, s in zip(wts, ls) if s)
                    tab[ls] = (nv, (ls, ls))
        stages = [tab]
        for h in hooks_at.get(i, ()):
            hpos = [k for k, u in enumerate(bag) if u in h.verts]
            prev = stages[-1]
            tab = {}
            for st, (val, _) in prev.items():
                in_set = frozenset(bag[k] for k in hpos if st[k] == (2 if ds else 1))
                out_set = h.verts - in_set
                for opt in h.options(in_set, out_set):
                    if opt.dominated:
                        nst = tuple(1 if (bag[k] in opt.dominated and s == 0) else s for k, s in enumerate(st))
                    else:
                        nst = st
                    nv = val + sign * opt.cost
                    old = tab.get(nst)
                    if old is None or nv < old[0]:
                        tab[nst] = (nv, (st, opt.payload))
            stages.append(tab)
        tables.append(stages)

    root = tables[-1][-1]
    if () not in root:
        return None

    chosen: set[int] = set()
    payloads: list = []
    stack = [(len(nodes) - 1, ())]
    while stack:
        i, st = stack.pop()
        nd = nodes[i]
        stages = tables[i]
        for stage in reversed(stages[1:]):
            st, payload = stage[st][1]
            payloads.append(payload)
        back = stages[0][st][1]
        if nd.kind == INTRODUCE:
            pos = bags[i].index(nd.vertex)
            if nd.vertex in decide and st[pos] == (2 if ds else 1):
                chosen.add(nd.vertex)
            stack.append((nd.children[0], back))
        elif nd.kind == FORGET:
            stack.append((nd.children[0], back))
        elif nd.kind == JOIN:
            stack.append((nd.children[0], back[0]))
            stack.append((nd.children[1], back[1]))
    return DPResult(root[()][0], frozenset(chosen), payloads)


def _graph_adj(g: Graph):
    return g.neighbors


# -- public solvers ----------------------------------------------------------------

def solve_exact_tw(g: Graph, td: TreeDecomposition, kind) -> Solution:
    """Optimal solution by DP over ``td`` (validated first)."""
    kind = ProblemKind.parse(kind)
    require_valid(td, g)
    res = solve_on_decomposition(kind, td, g.vertices, _graph_adj(g))
    if res is None:  # cannot happen for the unconstrained problems
        raise InfeasibleError("no feasible solution")
    xs = res.chosen
    return Solution(kind, xs, is_feasible(g, kind, xs), {"method": "tree-decomposition dp"})


def solve_vc_constrained(g: Graph, apex: Iterable[int], chosen: Iterable[int], td: TreeDecomposition) -> Solution | None:
    """Smallest ``X`` outside ``apex`` such that ``X | chosen`` covers ``g``.

    ``chosen`` must be a subset of ``apex``; ``td`` decomposes ``g - apex``
    in ``g``'s ids.  Returns ``None`` when an edge has both ends in
    ``apex - chosen``.
    """
    apex = g.check_vertices(apex)
    chosen = g.check_vertices(chosen)
    if not chosen <= apex:
        raise ValueError("chosen apex vertices must be a subset of the apex set")
    rest = frozenset(v for v in g.vertices if v not in apex)
    require_valid(td, g, rest)
    for u in apex - chosen:
        if g.neighbors(u) & (apex - chosen):
            return None
    fixed = {u: (u in chosen) for u in apex}
    res = solve_on_decomposition(ProblemKind.VC, td, rest, _graph_adj(g), fixed=fixed)
    if res is None:
        return None
    xs = res.chosen
    return Solution(ProblemKind.VC, xs, is_vertex_cover(g, xs | chosen),
                    {"method": "constrained dp", "apex_in": sorted(chosen)})


def solve_ds_strip(g: Graph, strip: Iterable[int], interior: Iterable[int], td: TreeDecomposition) -> Solution:
    """Smallest ``X`` inside ``strip`` dominating every ``interior`` vertex.

    Domination only counts edges inside the strip.
    """
    strip = g.check_vertices(strip)
    interior = g.check_vertices(interior)
    if not interior <= strip:
        raise ValueError("interior must lie inside the strip")
    require_valid(td, g, strip)
    res = solve_on_decomposition(ProblemKind.DS, td, strip, _graph_adj(g), need=interior)
    xs = res.chosen
    ok = all(v in xs or (g.neighbors(v) & xs) for v in interior)
    return Solution(ProblemKind.DS, xs, ok, {"method": "strip dp", "interior": len(interior)})


# -- brute force ----------------------------------------------------------------------

def brute_force(g: Graph, kind, forced_in: Iterable[int] = (), forbidden: Iterable[int] = (),
                dominate_only: Iterable[int] | None = None, ceiling: int | None = None) -> Solution | None:
    """Exhaustive optimum over all ``2^n`` subsets (vectorised).

    Among optima the lexicographically least sorted vertex list wins.
    ``None`` when the constraints admit no solution.
    """
    kind = ProblemKind.parse(kind)
    ceiling = BRUTE_FORCE_CEILING if ceiling is None else ceiling
    n = g.n
    if n > ceiling:
        raise ValueError(f"n={n} exceeds brute-force ceiling {ceiling}")
    forced_in = g.check_vertices(forced_in)
    forbidden = g.check_vertices(forbidden)
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(1 << n, dtype=bool)
    fmask = sum(1 << v for v in forced_in)
    bmask = sum(1 << v for v in forbidden)
    if fmask:
        ok &= (masks & np.uint32(fmask)) == fmask
    if bmask:
        ok &= (masks & np.uint32(bmask)) == 0
    if kind is ProblemKind.VC:
        for u, v in g.edges():
            ok &= (masks & np.uint32((1 << u) | (1 << v))) != 0
    elif kind is ProblemKind.IS:
        for u, v in g.edges():
            e = np.uint32((1 << u) | (1 << v))
            ok &= (masks & e) != e
    else:
        targets = g.vertices if dominate_only is None else sorted(g.check_vertices(dominate_only))
        for v in targets:
            closed = (1 << v) | sum(1 << w for w in g.adj[v])
            ok &= (masks & np.uint32(closed)) != 0
    if not ok.any():
        return None
    cand = masks[ok]
    sizes = np.bitwise_count(cand)
    best = sizes.min() if kind.minimize else sizes.max()
    cand = cand[sizes == best]
    for v in range(n):
        with_v = cand[(cand >> np.uint32(v)) & np.uint32(1) == 1]
        if len(with_v):
            cand = with_v
    pick = int(cand[0])
    xs = [v for v in range(n) if pick >> v & 1]
    feasible = is_feasible(g, kind, xs) if dominate_only is None else is_dominating_set(g, xs, dominate_only)
    return Solution(kind, xs, feasible, {"method": "brute force"})


def optimum_value(g: Graph, kind) -> int:
    sol = brute_force(g, kind)
    return math.inf if sol is None else sol.value

"""Shifting-strategy approximation schemes.

One recursion serves all entry points.  Each node ``t`` of a clique-sum
decomposition gets a table ``X(t, Y)`` over assignments ``Y`` of its
adhesion set ``A_t``.  For every extension ``Z`` of ``Y`` to the apex set,
the torso minus ``W = U_t | A_t`` is cut into BFS-level strips, one family
per shift ``i = 1..k``.  Each strip is solved exactly with the children's
tables attached to the clique ``A_c`` they hang from, and the best shift
is kept.

:func:`ptas_local` is the one-node, apex-free case and :func:`ptas_apex`
the one-node case with an apex set.

Dominating-set labels on a context vertex are ``in``, ``need`` (must be
dominated inside) and ``ext`` (dominated elsewhere).  Context vertices
labelled ``need`` may be dominated by any strip or child; a small covering
DP distributes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .dp import Hook, HookOption, ProblemKind, Solution, is_feasible, solve_on_decomposition
from .graph import Graph, bfs_distances, level_interval
from .treedecomp import (
    DEFAULT_EXACT_CEILING,
    CliqueSumDecomposition,
    DecompositionError,
    adhesion,
    decomposition_from_order,
    exact_treewidth,
    greedy_order,
    require_valid,
    width,
)

CENTER_RULES = ("first", "given", "best")


@dataclass
class PtasConfig:
    epsilon: Fraction | float | str
    kind: ProblemKind | str = ProblemKind.VC
    lam: int = 3
    mu: int = 0
    center_rule: str = "first"
    center: int | None = None
    exact_budget: int = 200_000

    def __post_init__(self):
        self.kind = ProblemKind.parse(self.kind)
        self.epsilon = Fraction(str(self.epsilon)) if not isinstance(self.epsilon, Fraction) else self.epsilon
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.center_rule not in CENTER_RULES:
            raise ValueError(f"center_rule must be one of {CENTER_RULES}")
        if self.center_rule == "given" and self.center is None:
            raise ValueError("center_rule 'given' needs a center")

    @property
    def k(self) -> int:
        numer = 2 if self.kind is ProblemKind.DS else 1
        return max(1, math.ceil(numer / self.epsilon))

    @property
    def ratio_bound(self) -> Fraction:
        """Worst-case value/opt factor implied by ``k``."""
        k = self.k
        if self.kind is ProblemKind.VC:
            return Fraction(k + 1, k)
        if self.kind is ProblemKind.DS:
            return Fraction(k + 2, k)
        return Fraction(k - 1, k)


@dataclass
class Strip:
    problem: ProblemKind
    i: int
    j: int
    lo: int
    hi: int
    vertices: frozenset[int]
    interior: frozenset[int]


def strip_bounds(kind: ProblemKind, k: int, i: int, j: int) -> tuple[int, int, int, int]:
    """``(lo, hi, interior_lo, interior_hi)`` level bounds before clamping."""
    if kind is ProblemKind.VC:
        lo, hi = (j - 1) * k + i, j * k + i
        return lo, hi, lo, hi
    if kind is ProblemKind.DS:
        return (j - 1) * k + i - 1, j * k + i, (j - 1) * k + i, j * k + i - 1
    lo, hi = (j - 1) * k + i, j * k + i - 2
    return lo, hi, lo, hi


def _levels_between(dist: dict[int, int], lo: int, hi: int) -> frozenset[int]:
    if lo > hi:
        return frozenset()
    lo = max(lo, 0)
    return frozenset(w for w, d in dist.items() if lo <= d <= hi)


def _strips_from_distances(dist: dict[int, int], kind: ProblemKind, k: int, i: int) -> list[Strip]:
    depth = max(dist.values())
    out = []
    j = 0
    while True:
        lo, hi, ilo, ihi = strip_bounds(kind, k, i, j)
        if lo > depth:
            break
        verts = _levels_between(dist, lo, hi)
        inner = _levels_between(dist, ilo, ihi) if kind is ProblemKind.DS else verts
        if verts:
            out.append(Strip(kind, i, j, lo, hi, verts, inner))
        j += 1
    return out


def build_strips(g: Graph, v: int, kind, k: int, i: int) -> list[Strip]:
    """Shift-``i`` strips around ``v`` (empty strips omitted).

    Only the component of ``v`` is covered.
    """
    kind = ProblemKind.parse(kind)
    g.check_vertex(v)
    if k < 1 or not 1 <= i <= k:
        raise ValueError("need k >= 1 and 1 <= i <= k")
    return _strips_from_distances(bfs_distances(g, v), kind, k, i)


# -- the recursion ---------------------------------------------------------------

def _subsets(xs, sizes=None):
    xs = sorted(xs)
    for r in range(len(xs) + 1) if sizes is None else sizes:
        for c in combinations(xs, r):
            yield frozenset(c)


@dataclass
class _Audit:
    max_width: int = -1
    over_bound: int = 0
    strips: int = 0
    exact_fallbacks: int = 0
    strip_records: list = field(default_factory=list)


class _Solver:
    def __init__(self, g: Graph, csd: CliqueSumDecomposition, cfg: PtasConfig, record_root: bool = True):
        self.g = g
        self.csd = csd
        self.cfg = cfg
        self.kind = cfg.kind
        self.k = cfg.k
        self.audit = _Audit()
        self.tables: dict[int, dict] = {}
        self.td_cache: dict = {}
        self.strip_cache: dict = {}
        self.record_root = record_root
        self.root_detail = None

    # objective helpers
    def better(self, a: frozenset | None, b: frozenset | None) -> bool:
        """Is ``a`` strictly preferable to ``b``?  ``None`` is infeasible."""
        if a is None:
            return False
        if b is None:
            return True
        if len(a) != len(b):
            return len(a) < len(b) if self.kind.minimize else len(a) > len(b)
        return sorted(a) < sorted(b)

    def run(self) -> frozenset | None:
        for t in self.csd.postorder():
            self.tables[t] = self.node_table(t)
        root = self.csd.root
        return self.tables[root].get(self.empty_key())

    def empty_key(self):
        return (frozenset(), frozenset()) if self.kind is ProblemKind.DS else frozenset()

    # -- per node ------------------------------------------------------------
    def node_table(self, t: int) -> dict:
        g, csd, kind = self.g, self.csd, self.kind
        bag = csd.bags[t]
        a_t = csd.adhesion_set(t)
        u_only = csd.apex[t] - a_t
        w_set = csd.apex[t] | a_t
        tadj: dict[int, set[int]] = {v: set(g.neighbors(v) & bag) for v in bag}
        cliques = [csd.adhesion_set(c) for c in csd.children[t]] + [a_t]
        for q in cliques:
            for x, y in combinations(q, 2):
                tadj[x].add(y)
                tadj[y].add(x)
        rest = bag - w_set
        comps = []
        for comp in _components_in(tadj, rest):
            comps.append(comp)
        ctx = _NodeContext(self, t, bag, a_t, w_set, tadj, comps)

        table = {}
        for y_key in self.adhesion_keys(a_t):
            best, best_detail = None, None
            for extra_in in _subsets(u_only):
                z_in = self.key_in(y_key) | extra_in
                if kind is ProblemKind.IS and not _independent(g, z_in):
                    continue
                if kind is ProblemKind.DS:
                    need = (y_key[1] | (u_only - extra_in))
                else:
                    need = frozenset()
                xz, detail = ctx.solve_z(z_in, need)
                if xz is None:
                    continue
                cand = xz | extra_in
                if self.better(cand, best):
                    best, best_detail = cand, detail
            if best is not None:
                table[y_key] = best
                if t == csd.root and self.record_root:
                    self.root_detail = best_detail
        return table

    def adhesion_keys(self, a_t: frozenset):
        if self.kind is ProblemKind.DS:
            for in_set in _subsets(a_t):
                for need in _subsets(a_t - in_set):
                    yield (in_set, need)
        else:
            for y in _subsets(a_t):
                if self.kind is ProblemKind.IS and not _independent(self.g, y):
                    continue
                yield y

    def key_in(self, key) -> frozenset:
        return key[0] if self.kind is ProblemKind.DS else key

    # -- strip decompositions ---------------------------------------------------
    def strip_decomposition(self, tadj, verts: frozenset, bound: int):
        key = (id(tadj), verts)
        if key in self.td_cache:
            return self.td_cache[key]
        back = sorted(verts)
        fwd = {v: i for i, v in enumerate(back)}
        sub = Graph.from_edges(len(back), [(fwd[a], fwd[b]) for a in back for b in tadj[a] if b in fwd and a < b])
        order, w = greedy_order(sub, "min-fill")
        td = decomposition_from_order(sub, order)
        exact = False
        if width(td) > bound and sub.n <= DEFAULT_EXACT_CEILING:
            res = exact_treewidth(sub, node_budget=self.cfg.exact_budget)
            if res.width < width(td):
                td = res.decomposition
            exact = True
            self.audit.exact_fallbacks += 1
        td = td.relabel(back)
        w = width(td)
        self.audit.strips += 1
        self.audit.max_width = max(self.audit.max_width, w)
        if w > bound:
            self.audit.over_bound += 1
        self.td_cache[key] = (td, w, exact)
        return self.td_cache[key]


def _components_in(adj: dict[int, set[int]], verts: frozenset) -> list[frozenset]:
    seen: set[int] = set()
    out = []
    for v in sorted(verts):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in verts and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        out.append(frozenset(comp))
    return out


def _independent(g: Graph, xs: frozenset) -> bool:
    return not any(g.neighbors(u) & xs for u in xs)


def _bfs_in(adj, start, verts) -> dict[int, int]:
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w in verts and w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


class _NodeContext:
    """Everything about node ``t`` that does not depend on ``Z``."""

    def __init__(self, solver: _Solver, t, bag, a_t, w_set, tadj, comps):
        self.s = solver
        self.t = t
        self.bag = bag
        self.a_t = a_t
        self.w_set = w_set
        self.tadj = tadj
        self.comps = comps
        csd = solver.csd
        kind = solver.kind
        self.children = list(csd.children[t])
        self.child_adh = {c: csd.adhesion_set(c) for c in self.children}
        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
        self.w_children = []
        self.comp_children: dict[int, list[int]] = {ci: [] for ci in range(len(comps))}
        for c in self.children:
            r = self.child_adh[c] - w_set
            if not r:
                self.w_children.append(c)
            else:
                self.comp_children[comp_of[next(iter(r))]].append(c)
        # per component: list of (center, {i: (strips, attachments, gap_children)})
        self.layouts = []
        for ci, comp in enumerate(comps):
            centers = self.centers(comp)
            per_center = []
            for v in centers:
                dist = _bfs_in(tadj, v, comp)
                shifts = {}
                for i in range(1, solver.k + 1):
                    strips = _strips_from_distances(dist, kind, solver.k, i)
                    attach: dict[int, list[int]] = {j: [] for j in range(len(strips))}
                    gap_children = []
                    for c in self.comp_children[ci]:
                        r = self.child_adh[c] - w_set
                        if kind is ProblemKind.IS:
                            covered = frozenset().union(*(s.vertices for s in strips)) if strips else frozenset()
                            r = r & covered
                            if not r:
                                gap_children.append(c)
                                continue
                        for j, st in enumerate(strips):
                            if r <= st.vertices:
                                attach[j].append(c)
                                break
                        else:
                            raise DecompositionError(f"adhesion of child {c} fits in no strip")
                    shifts[i] = (strips, attach, gap_children)
                per_center.append((v, shifts))
            self.layouts.append(per_center)

    def centers(self, comp):
        cfg = self.s.cfg
        if cfg.center_rule == "best":
            return sorted(comp)
        if cfg.center_rule == "given" and cfg.center in comp:
            return [cfg.center]
        return [min(comp)]

    # -- solving for one Z ----------------------------------------------------------
    def child_lookup(self, c, in_set, need=frozenset()):
        table = self.s.tables[c]
        key = (in_set, need) if self.s.kind is ProblemKind.DS else in_set
        return table.get(key)

    def solve_z(self, z_in: frozenset, need_labels: frozenset):
        s = self.s
        g, kind = s.g, s.kind
        w_set = self.w_set
        fixed = {w: (w in z_in) for w in w_set}
        if kind is ProblemKind.VC:
            out = w_set - z_in
            if any(g.neighbors(u) & out for u in out):
                return None, None
        need = frozenset(w for w in need_labels if not (g.neighbors(w) & z_in))

        units = []  # each: dict R -> frozenset
        details = []
        for c in self.w_children:
            units.append(self.child_unit(c, z_in, need))
        for ci in range(len(self.comps)):
            table, detail = self.component_unit(ci, fixed, z_in, need)
            units.append(table)
            details.append(detail)
        best = _cover(units, need, s.better)
        return best, details

    def child_unit(self, c, z_in, need):
        adh = self.child_adh[c]
        in_set = adh & z_in
        out = {}
        if self.s.kind is ProblemKind.DS:
            for r in _subsets(adh & need):
                x = self.child_lookup(c, in_set, r)
                if x is not None:
                    out[r] = x
        else:
            x = self.child_lookup(c, in_set)
            if x is not None:
                out[frozenset()] = x
        return out

    def component_unit(self, ci, fixed, z_in, need):
        s = self.s
        best: dict = {}
        best_detail = {}
        for v, shifts in self.layouts[ci]:
            for i, (strips, attach, gap_children) in shifts.items():
                units = [self.strip_unit(ci, v, i, j, st, attach[j], fixed, need) for j, st in enumerate(strips)]
                units += [self.child_unit(c, z_in, need) for c in gap_children]
                table = _cover_all(units, need, s.better)
                for r, x in table.items():
                    if s.better(x, best.get(r)):
                        best[r] = x
                        best_detail[r] = (v, i)
                if s.record_root and self.t == s.csd.root:
                    full = table.get(need)
                    best_detail.setdefault("shifts", []).append({
                        "center": v, "i": i,
                        "value": None if full is None else len(full),
                        "strip_sum": self._strip_sum(ci, v, i, strips, attach, fixed, need),
                    })
        return best, best_detail

    def _strip_sum(self, ci, v, i, strips, attach, fixed, need):
        total = 0
        for j, st in enumerate(strips):
            res = self.s.strip_cache.get(self._strip_key(ci, v, i, j, fixed, frozenset(), attach[j], st))
            if res is None:
                return None
            total += len(res)
        return total

    def _strip_key(self, ci, v, i, j, fixed, r, attached, st):
        g = self.s.g
        touch = set()
        for u in st.vertices:
            touch |= g.neighbors(u) & self.w_set
        for c in attached:
            touch |= self.child_adh[c] & self.w_set
        touch |= r
        rel = tuple(sorted((w, fixed[w]) for w in touch))
        return (self.t, ci, v, i, j, rel, r)

    def strip_unit(self, ci, v, i, j, st: Strip, attached, fixed, need):
        g = self.s.g
        reach = set()
        for u in st.vertices:
            reach |= g.neighbors(u) & need
        for c in attached:
            reach |= self.child_adh[c] & need
        out = {}
        for r in _subsets(reach):
            x = self.solve_strip(ci, v, i, j, st, attached, fixed, frozenset(r))
            if x is not None:
                out[r] = x
        return out

    def solve_strip(self, ci, v, i, j, st: Strip, attached, fixed, r):
        s = self.s
        key = self._strip_key(ci, v, i, j, fixed, r, attached, st)
        if key in s.strip_cache:
            return s.strip_cache[key]
        g, kind = s.g, s.kind
        lo = max(st.lo, 0)
        bound = s.cfg.lam * (st.hi - lo + 1)
        td, w, _ = s.strip_decomposition(self.tadj, st.vertices, bound)
        rel = dict(key[5])
        verts = st.vertices
        hooks = []
        for c in attached:
            hv = self.child_adh[c] & (verts | frozenset(rel))
            hooks.append(Hook(hv, self._hook_lookup(c)))
        need = (st.interior | r) if kind is ProblemKind.DS else None
        res = solve_on_decomposition(kind, td, verts, g.neighbors, fixed=rel, need=need, hooks=hooks)
        if res is None:
            out = None
        else:
            out = frozenset(res.chosen).union(*(p[1] for p in res.payloads))
        s.strip_cache[key] = out
        if s.record_root and self.t == s.csd.root and not r:
            s.audit.strip_records.append((v, i, j, st.lo, st.hi, len(verts), w, bound,
                                          None if out is None else len(res.chosen)))
        return out

    def _hook_lookup(self, c):
        kind = self.s.kind

        def lookup(in_set, out_set):
            if kind is ProblemKind.DS:
                opts = []
                for nd in _subsets(out_set):
                    x = self.child_lookup(c, in_set, nd)
                    if x is not None:
                        opts.append(HookOption(nd, len(x), (c, x)))
                return opts
            x = self.child_lookup(c, in_set)
            return [] if x is None else [HookOption(frozenset(), len(x), (c, x))]

        return lookup


def _cover(units: list[dict], need: frozenset, better) -> frozenset | None:
    table = _cover_all(units, need, better)
    return table.get(need)


def _cover_all(units: list[dict], need: frozenset, better) -> dict:
    """Combine unit tables ``R -> set`` into ``covered -> union``."""
    state = {frozenset(): frozenset()}
    for unit in units:
        nxt: dict = {}
        for cov, xs in state.items():
            for r, ys in unit.items():
                key = cov | r
                cand = xs | ys
                if better(cand, nxt.get(key)):
                    nxt[key] = cand
        state = nxt
        if not state:
            return {}
    return state


# -- entry points -------------------------------------------------------------------

def _solve(g: Graph, csd: CliqueSumDecomposition, cfg: PtasConfig, op: str) -> Solution:
    solver = _Solver(g, csd, cfg)
    xs = solver.run()
    audit = solver.audit
    prov = {
        "operation": op,
        "epsilon": str(cfg.epsilon),
        "k": cfg.k,
        "lambda": cfg.lam,
        "mu": cfg.mu,
        "center_rule": cfg.center_rule,
        "strips": audit.strips,
        "max_strip_width": audit.max_width,
        "strips_over_lambda_bound": audit.over_bound,
        "guarantee": "conditional on lambda" if audit.over_bound else "holds",
        "exact_fallbacks": audit.exact_fallbacks,
    }
    detail = solver.root_detail
    if detail:
        shifts = {}
        sums = {}
        chosen = []
        for comp_detail in detail:
            for rec in comp_detail.get("shifts", []):
                i = rec["i"]
                if rec["value"] is not None:
                    shifts[i] = shifts.get(i, 0) + rec["value"]
                if rec["strip_sum"] is not None:
                    sums[i] = sums.get(i, 0) + rec["strip_sum"]
            pick = comp_detail.get(frozenset())
            if pick is not None:
                chosen.append(pick)
        prov["shift_values"] = [shifts.get(i) for i in range(1, cfg.k + 1)]
        prov["shift_strip_sums"] = [sums.get(i) for i in range(1, cfg.k + 1)]
        prov["chosen"] = [{"center": v, "shift": i} for v, i in chosen]
    prov["strip_records"] = audit.strip_records
    if xs is None:
        return Solution(cfg.kind, (), False, prov)
    return Solution(cfg.kind, xs, is_feasible(g, cfg.kind, xs), prov)


def _single_node(g: Graph, apex: frozenset = frozenset()) -> CliqueSumDecomposition:
    return CliqueSumDecomposition([frozenset(g.vertices)], [-1], [apex], g)


def ptas_local(g: Graph, kind, cfg: PtasConfig | None = None, **kw) -> Solution:
    """Best shift of exactly solved strips; components are handled separately."""
    cfg = _config(kind, cfg, kw)
    if g.n == 0:
        return Solution(cfg.kind, (), True, {"operation": "ptas_local", "k": cfg.k})
    return _solve(g, _single_node(g), cfg, "ptas_local")


def ptas_apex(g: Graph, apex: Iterable[int], kind, cfg: PtasConfig | None = None, **kw) -> Solution:
    """Enumerate every assignment of the apex set, shifting on the rest."""
    cfg = _config(kind, cfg, kw)
    apex = g.check_vertices(apex)
    if len(apex) > cfg.mu:
        raise ValueError(f"apex set of size {len(apex)} exceeds mu={cfg.mu}")
    if g.n == 0:
        return Solution(cfg.kind, (), True, {"operation": "ptas_apex", "k": cfg.k})
    return _solve(g, _single_node(g, apex), cfg, "ptas_apex")


def ptas_cliquesum(g: Graph, csd: CliqueSumDecomposition, kind, cfg: PtasConfig | None = None, **kw) -> Solution:
    """Leaf-to-root recursion over a clique-sum decomposition."""
    cfg = _config(kind, cfg, kw)
    require_valid(csd, g)
    if csd.mu > cfg.mu:
        raise ValueError(f"decomposition uses {csd.mu} apex vertices, mu={cfg.mu}")
    limit = cfg.lam + cfg.mu + 1
    if adhesion(csd) > limit:
        raise ValueError(f"adhesion {adhesion(csd)} exceeds lambda+mu+1={limit}")
    return _solve(g, csd, cfg, "ptas_cliquesum")


def _config(kind, cfg, kw) -> PtasConfig:
    kind = ProblemKind.parse(kind)
    if cfg is None:
        cfg = PtasConfig(kind=kind, **kw)
    elif cfg.kind is not kind:
        raise ValueError(f"config is for {cfg.kind.value}, asked for {kind.value}")
    return cfg


def strip_treewidth_premise(g: Graph, v: int, i: int, j: int, lam: int, max_size: int = 25):
    """``(tw, bound)`` of ``<L_v[i,j]>`` or ``None`` if the strip is too big or empty."""
    verts = level_interval(g, v, i, j)
    if not verts or len(verts) > max_size:
        return None
    res = exact_treewidth(g, vertices=verts)
    return res.width, lam * (j - i + 1), res.exact


__all__ = [
    "PtasConfig",
    "Strip",
    "build_strips",
    "strip_bounds",
    "ptas_local",
    "ptas_apex",
    "ptas_cliquesum",
    "strip_treewidth_premise",
]

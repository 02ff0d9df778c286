"""Tree and path decompositions.

Bags hold vertex ids of the subject graph.  A decomposition of an induced
subgraph keeps the host's ids; pass ``vertices=`` to :func:`validate` to
check it against ``<vertices>`` only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph, GraphFormatError, clique_number, components, induced_subgraph

DEFAULT_EXACT_CEILING = int(os.environ.get("LTWPTAS_EXACT_CEILING", "25"))


class DecompositionError(ValueError):
    pass


class TreeDecomposition:
    """Rooted tree of bags.

    ``parent[t]`` is ``-1`` for the root only.  Adhesion sets
    ``A_t = B_t & B_parent(t)`` are derived on demand.
    """

    def __init__(self, bags: Sequence[Iterable[int]], parent: Sequence[int], graph: Graph | None = None):
        self.bags: list[frozenset[int]] = [frozenset(b) for b in bags]
        self.parent: list[int] = list(parent)
        self.graph = graph
        if len(self.bags) != len(self.parent):
            raise DecompositionError("bags and parent pointers differ in length")
        if not self.bags:
            raise DecompositionError("a decomposition needs at least one node")
        roots = [t for t, p in enumerate(self.parent) if p == -1]
        if len(roots) != 1:
            raise DecompositionError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.children: list[list[int]] = [[] for _ in self.bags]
        for t, p in enumerate(self.parent):
            if p != -1:
                if not 0 <= p < len(self.bags):
                    raise DecompositionError(f"node {t} has unknown parent {p}")
                self.children[p].append(t)
        if len(self.postorder()) != len(self.bags):
            raise DecompositionError("parent pointers do not form a tree")

    def __len__(self):
        return len(self.bags)

    @property
    def nodes(self) -> range:
        return range(len(self.bags))

    def postorder(self) -> list[int]:
        out, stack = [], [(self.root, False)]
        seen = set()
        while stack:
            t, done = stack.pop()
            if done:
                out.append(t)
                continue
            if t in seen:
                break
            seen.add(t)
            stack.append((t, True))
            for c in reversed(self.children[t]):
                stack.append((c, False))
        return out

    def adhesion_set(self, t: int) -> frozenset[int]:
        p = self.parent[t]
        return frozenset() if p == -1 else self.bags[t] & self.bags[p]

    def subtree_vertices(self, t: int) -> frozenset[int]:
        """``C_t``: union of the bags below and at ``t``."""
        out, stack = set(), [t]
        while stack:
            s = stack.pop()
            out |= self.bags[s]
            stack.extend(self.children[s])
        return frozenset(out)

    def vertex_set(self) -> frozenset[int]:
        return frozenset().union(*self.bags)

    def with_extra(self, extra: Iterable[int]) -> "TreeDecomposition":
        """Every bag augmented by ``extra``."""
        extra = frozenset(extra)
        return type(self)._plain(self, [b | extra for b in self.bags])

    @staticmethod
    def _plain(td, bags):
        return TreeDecomposition(bags, td.parent, td.graph)

    def relabel(self, mapping: Sequence[int], graph: Graph | None = None) -> "TreeDecomposition":
        return TreeDecomposition([[mapping[v] for v in b] for b in self.bags], self.parent, graph)

    def __repr__(self):
        return f"TreeDecomposition(nodes={len(self)}, width={width(self)})"


@dataclass
class PathDecomposition:
    """Blocks ``B_1..B_m`` in path order."""

    blocks: list[frozenset[int]]

    def __post_init__(self):
        self.blocks = [frozenset(b) for b in self.blocks]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.blocks), default=0) - 1

    def as_tree(self, graph: Graph | None = None) -> TreeDecomposition:
        blocks = self.blocks or [frozenset()]
        return TreeDecomposition(blocks, [-1] + list(range(len(blocks) - 1)), graph)


class CliqueSumDecomposition(TreeDecomposition):
    """Tree decomposition with a per-node apex set ``U_t`` inside ``B_t``."""

    def __init__(self, bags, parent, apex=None, graph: Graph | None = None):
        super().__init__(bags, parent, graph)
        apex = apex if apex is not None else [frozenset()] * len(self.bags)
        self.apex: list[frozenset[int]] = [frozenset(a) for a in apex]
        if len(self.apex) != len(self.bags):
            raise DecompositionError("one apex set per node required")
        for t, (a, b) in enumerate(zip(self.apex, self.bags)):
            if not a <= b:
                raise DecompositionError(f"apex set of node {t} not inside its block")

    @staticmethod
    def _plain(td, bags):
        return CliqueSumDecomposition(bags, td.parent, td.apex, td.graph)

    @property
    def mu(self) -> int:
        return max(len(a) for a in self.apex)


# -- measures ------------------------------------------------------------------

def width(td: TreeDecomposition) -> int:
    return max(len(b) for b in td.bags) - 1


def adhesion(td: TreeDecomposition) -> int:
    return max(len(td.adhesion_set(t)) for t in td.nodes)


@dataclass
class ValidityReport:
    uncovered_vertices: list[int] = field(default_factory=list)
    uncovered_edges: list[tuple[int, int]] = field(default_factory=list)
    disconnected: list[int] = field(default_factory=list)
    foreign: list[int] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.uncovered_vertices or self.uncovered_edges or self.disconnected or self.foreign)

    def __bool__(self):
        return self.valid

    def lines(self) -> list[str]:
        out = [f"uncovered vertex {v}" for v in self.uncovered_vertices]
        out += [f"uncovered edge {u}-{v}" for u, v in self.uncovered_edges]
        out += [f"occurrences of {v} disconnected" for v in self.disconnected]
        out += [f"vertex {v} not in subject" for v in self.foreign]
        return out


def validate(td: TreeDecomposition, graph: Graph | None = None, vertices: Iterable[int] | None = None) -> ValidityReport:
    """Check coverage and connectivity against ``<vertices>^graph``."""
    g = graph if graph is not None else td.graph
    if g is None:
        raise DecompositionError("no subject graph to validate against")
    verts = frozenset(g.vertices) if vertices is None else frozenset(vertices)
    rep = ValidityReport()
    occ: dict[int, list[int]] = {}
    for t, b in enumerate(td.bags):
        for v in b:
            occ.setdefault(v, []).append(t)
    rep.foreign = sorted(v for v in occ if v not in verts)
    rep.uncovered_vertices = sorted(v for v in verts if v not in occ)
    for u in sorted(verts):
        for v in g.adj[u]:
            if u < v and v in verts:
                if not any(v in td.bags[t] for t in occ.get(u, ())):
                    rep.uncovered_edges.append((u, v))
    for v, ts in sorted(occ.items()):
        tset = set(ts)
        # occurrence set is connected iff exactly one node has its parent outside
        tops = [t for t in ts if td.parent[t] == -1 or td.parent[t] not in tset]
        if len(tops) != 1:
            rep.disconnected.append(v)
    return rep


def require_valid(td: TreeDecomposition, graph: Graph | None = None, vertices=None) -> None:
    rep = validate(td, graph, vertices)
    if not rep.valid:
        raise DecompositionError("invalid decomposition: " + "; ".join(rep.lines()[:5]))


def torso_edges(td: TreeDecomposition, t: int, graph: Graph | None = None) -> set[tuple[int, int]]:
    """Edges of ``[B_t]`` in host ids."""
    g = graph if graph is not None else td.graph
    b = td.bags[t]
    edges = {(u, v) for u in b for v in g.adj[u] if u < v and v in b}
    for a in [td.adhesion_set(t)] + [td.adhesion_set(c) for c in td.children[t]]:
        edges.update(combinations(sorted(a), 2))
    return edges


def torso(td: TreeDecomposition, t: int, graph: Graph | None = None) -> tuple[Graph, tuple[int, ...]]:
    """``[B_t]`` relabelled densely, with the map back to host ids."""
    if not 0 <= t < len(td):
        raise DecompositionError(f"unknown node {t}")
    back = tuple(sorted(td.bags[t]))
    fwd = {v: i for i, v in enumerate(back)}
    es = [(fwd[u], fwd[v]) for u, v in torso_edges(td, t, graph)]
    return Graph.from_edges(len(back), es), back


# -- elimination orderings ----------------------------------------------------

def decomposition_from_order(g: Graph, order: Sequence[int], vertices: Iterable[int] | None = None) -> TreeDecomposition:
    """Tree decomposition induced by eliminating ``order`` in ``<vertices>``.

    Bags contained in their parent are merged away.  Components are chained
    under the last-eliminated vertex.
    """
    verts = frozenset(g.vertices) if vertices is None else frozenset(vertices)
    if not verts:
        return TreeDecomposition([frozenset()], [-1], g)
    pos = {v: i for i, v in enumerate(order)}
    nb = {v: set(w for w in g.adj[v] if w in verts) for v in verts}
    bags, par_vertex = [], []
    for v in order:
        ns = nb.pop(v)
        bags.append(frozenset(ns | {v}))
        par_vertex.append(min(ns, key=pos.__getitem__) if ns else None)
        for a in ns:
            nb[a].discard(v)
            nb[a] |= ns - {a}
    last = len(order) - 1
    parent = [pos[p] if p is not None else (last if i != last else -1) for i, p in enumerate(par_vertex)]
    return _compress(bags, parent, g)


def _compress(bags, parent, g):
    """Fold each bag that is a subset of its parent's into the parent."""
    bags = list(bags)
    parent = list(parent)
    alive = [True] * len(bags)
    for t in range(len(bags)):
        p = parent[t]
        if p != -1 and bags[t] <= bags[p]:
            alive[t] = False
            for c in range(len(bags)):
                if parent[c] == t:
                    parent[c] = p
    idx = {t: i for i, t in enumerate(t for t in range(len(bags)) if alive[t])}
    return TreeDecomposition(
        [bags[t] for t in idx],
        [-1 if parent[t] == -1 else idx[parent[t]] for t in idx],
        g,
    )


def greedy_order(g: Graph, strategy: str = "min-fill", vertices: Iterable[int] | None = None) -> tuple[list[int], int]:
    """Greedy elimination ordering and its width; ties go to the lowest id."""
    if strategy not in ("min-fill", "min-degree"):
        raise ValueError(f"unknown strategy {strategy!r}")
    verts = frozenset(g.vertices) if vertices is None else frozenset(vertices)
    nb = {v: set(w for w in g.adj[v] if w in verts) for v in verts}
    order, w = [], -1

    def fill(v):
        ns = list(nb[v])
        return sum(1 for a, b in combinations(ns, 2) if b not in nb[a])

    while nb:
        if strategy == "min-degree":
            v = min(nb, key=lambda u: (len(nb[u]), u))
        else:
            v = min(nb, key=lambda u: (fill(u), len(nb[u]), u))
        ns = nb.pop(v)
        w = max(w, len(ns))
        for a in ns:
            nb[a].discard(v)
            nb[a] |= ns - {a}
        order.append(v)
    return order, max(w, 0) if verts else -1


def heuristic_decomposition(g: Graph, strategy: str = "min-fill", vertices: Iterable[int] | None = None) -> TreeDecomposition:
    order, _ = greedy_order(g, strategy, vertices)
    return decomposition_from_order(g, order, vertices)


# -- exact tree-width ---------------------------------------------------------

class BudgetExceeded(RuntimeError):
    pass


@dataclass
class TreewidthResult:
    width: int
    decomposition: TreeDecomposition
    exact: bool
    lower: int
    nodes: int = 0


def minor_min_width(g: Graph, vertices: Iterable[int] | None = None) -> int:
    """Contraction-degeneracy lower bound (min-d contraction variant)."""
    verts = frozenset(g.vertices) if vertices is None else frozenset(vertices)
    nb = {v: set(w for w in g.adj[v] if w in verts) for v in verts}
    lb = 0
    while len(nb) > 1:
        v = min(nb, key=lambda u: (len(nb[u]), u))
        lb = max(lb, len(nb[v]))
        ns = nb.pop(v)
        for a in ns:
            nb[a].discard(v)
        if ns:
            u = min(ns, key=lambda x: (len(nb[x]), x))
            for a in ns - {u}:
                nb[a].add(u)
                nb[u].add(a)
    return lb


def _elim_nbrs(nb, S, v):
    seen = 1 << v
    res = 0
    todo = nb[v]
    while todo:
        seen |= todo
        res |= todo & ~S
        inner = todo & S
        todo = 0
        while inner:
            low = inner & -inner
            inner ^= low
            todo |= nb[low.bit_length() - 1]
        todo &= ~seen
    return res


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _decide(nb: list[int], full: int, w: int, budget: list[int]) -> list[int] | None:
    """Elimination order of width <= ``w`` over mask ``full``, or None."""
    failed: set[int] = set()

    def rec(S: int) -> list[int] | None:
        rem = full & ~S
        if rem.bit_count() <= w + 1:
            return list(_bits(rem))
        if S in failed:
            return None
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded
        q = {v: _elim_nbrs(nb, S, v) for v in _bits(rem)}
        cands = []
        for v, qv in q.items():
            d = qv.bit_count()
            if d > w:
                continue
            # simplicial or almost simplicial with degree <= w: safe to take first
            bad = [u for u in _bits(qv) if (qv & ~(1 << u)) & ~q[u]]
            if not bad or _almost(qv, q, bad):
                sub = rec(S | (1 << v))
                if sub is None:
                    failed.add(S)
                    return None
                return [v] + sub
            cands.append((d, v))
        for _, v in sorted(cands):
            sub = rec(S | (1 << v))
            if sub is not None:
                return [v] + sub
        failed.add(S)
        return None

    return rec(0)


def _almost(qv, q, bad):
    # N(v) minus one vertex is a clique iff some u in bad covers every defect
    for u in bad:
        rest = qv & ~(1 << u)
        if all((rest & ~(1 << x)) & ~q[x] == 0 for x in _bits(rest)):
            return True
    return False


def exact_treewidth(g: Graph, node_budget: int = 2_000_000, ceiling: int | None = None,
                    vertices: Iterable[int] | None = None) -> TreewidthResult:
    """Tree-width by iterative deepening over elimination-order branch and bound.

    Works per component.  On budget exhaustion the best upper bound is
    returned with ``exact=False``.
    """
    ceiling = DEFAULT_EXACT_CEILING if ceiling is None else ceiling
    verts = frozenset(g.vertices) if vertices is None else frozenset(vertices)
    if len(verts) > ceiling:
        raise DecompositionError(f"n={len(verts)} exceeds exact tree-width ceiling {ceiling}")
    if not verts:
        return TreewidthResult(-1, TreeDecomposition([frozenset()], [-1], g), True, -1)
    order: list[int] = []
    best = lower = -1
    exact = True
    budget = [node_budget]
    for comp in components(g, verts):
        sub, back = induced_subgraph(g, comp)
        o_fill, u_fill = greedy_order(sub, "min-fill")
        o_deg, u_deg = greedy_order(sub, "min-degree")
        ub, ub_order = (u_fill, o_fill) if u_fill <= u_deg else (u_deg, o_deg)
        lb = max(minor_min_width(sub), clique_number(sub) - 1, best)
        comp_order, comp_w, comp_exact = ub_order, ub, True
        if lb < ub:
            nb = [sum(1 << w for w in sub.adj[v]) for v in range(sub.n)]
            full = (1 << sub.n) - 1
            try:
                for w in range(lb, ub):
                    found = _decide(nb, full, w, budget)
                    if found is not None:
                        comp_order, comp_w = found, w
                        break
            except BudgetExceeded:
                comp_exact = False
                lb = max(lb, w)
        best = max(best, comp_w)
        lower = max(lower, comp_w if comp_exact else lb)
        exact &= comp_exact
        order += [back[v] for v in comp_order]
    used = node_budget - budget[0]
    td = decomposition_from_order(g, order, verts)
    return TreewidthResult(width(td), td, exact, lower, used)


def treewidth_by_subsets(g: Graph) -> int:
    """Independent oracle: dynamic program over eliminated vertex subsets."""
    n = g.n
    if n == 0:
        return -1
    nb = [sum(1 << w for w in g.adj[v]) for v in range(n)]
    INF = n + 1
    tw = [INF] * (1 << n)
    tw[0] = -1
    for S in range(1, 1 << n):
        best = INF
        for v in _bits(S):
            prev = S & ~(1 << v)
            val = max(tw[prev], _elim_nbrs(nb, prev, v).bit_count())
            if val < best:
                best = val
        tw[S] = best
    return tw[(1 << n) - 1]


# -- nice decompositions --------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class NiceNode:
    kind: str
    bag: frozenset[int]
    vertex: int | None
    children: tuple[int, ...]


def nice_decomposition(td: TreeDecomposition) -> list[NiceNode]:
    """Introduce/forget/join normal form; nodes listed children-first.

    The last node is the root and has an empty bag.
    """
    nodes: list[NiceNode] = []

    def add(kind, bag, v, ch):
        nodes.append(NiceNode(kind, bag, v, tuple(ch)))
        return len(nodes) - 1

    top: dict[int, int] = {}
    for t in td.postorder():
        b = td.bags[t]
        branches = []
        for c in td.children[t]:
            cur, cb = top[c], td.bags[c]
            for v in sorted(cb - b):
                cb = cb - {v}
                cur = add(FORGET, cb, v, [cur])
            for v in sorted(b - cb):
                cb = cb | {v}
                cur = add(INTRODUCE, cb, v, [cur])
            branches.append(cur)
        if not branches:
            cur, cb = add(LEAF, frozenset(), None, []), frozenset()
            for v in sorted(b):
                cb = cb | {v}
                cur = add(INTRODUCE, cb, v, [cur])
            branches = [cur]
        while len(branches) > 1:
            nxt = [add(JOIN, b, None, branches[i:i + 2]) if i + 1 < len(branches) else branches[i]
                   for i in range(0, len(branches), 2)]
            branches = nxt
        top[t] = branches[0]
    cur, cb = top[td.root], td.bags[td.root]
    for v in sorted(cb):
        cb = cb - {v}
        cur = add(FORGET, cb, v, [cur])
    return nodes


# -- attaching a path-decomposed graph ----------------------------------------

def attach_path(g: Graph, td_g: TreeDecomposition, h: Graph, pd_h: PathDecomposition,
                anchors: Sequence[tuple[int, int]]) -> tuple[Graph, TreeDecomposition, tuple[int, ...]]:
    """Decompose ``G u H`` where ``H`` meets ``G`` in an anchored path.

    ``anchors[i] = (x_i, y_i)`` identifies ``x_i`` in ``g`` with ``y_i`` in
    ``h``; ``y_i`` must lie in block ``i`` and ``x_1..x_m`` must be a path
    in ``g``.  Returns the union graph (``g``'s ids first, then the other
    ``h`` vertices), its decomposition with blocks ``C_t`` widened by every
    ``B_i`` whose anchor lies in ``C_t``, and the map of ``h`` ids into the
    union.
    """
    m = len(pd_h.blocks)
    if len(anchors) != m:
        raise DecompositionError(f"{len(anchors)} anchors for {m} path blocks")
    xs = [x for x, _ in anchors]
    if len(set(xs)) != m or len({y for _, y in anchors}) != m:
        raise DecompositionError("anchors must be distinct")
    for i, (x, y) in enumerate(anchors):
        g.check_vertex(x)
        h.check_vertex(y)
        if y not in pd_h.blocks[i]:
            raise DecompositionError(f"anchor {y} missing from path block {i}")
        if i and not g.has_edge(xs[i - 1], x):
            raise DecompositionError(f"anchors {xs[i - 1]} and {x} not adjacent in G")
    hmap = {y: x for x, y in anchors}
    nxt = g.n
    for y in range(h.n):
        if y not in hmap:
            hmap[y] = nxt
            nxt += 1
    hmap_t = tuple(hmap[y] for y in range(h.n))
    union = Graph.from_edges(nxt, list(g.edges()) + [(hmap[a], hmap[b]) for a, b in h.edges()])
    block_of = {x: frozenset(hmap[y] for y in pd_h.blocks[i]) for i, x in enumerate(xs)}
    bags = [c.union(*(block_of[x] for x in c if x in block_of)) for c in td_g.bags]
    return union, TreeDecomposition(bags, td_g.parent, union), hmap_t


# -- serialization ----------------------------------------------------------------

def serialize_td(td: TreeDecomposition, n: int | None = None) -> str:
    """``td <#nodes> <width+1> <n>``, ``b`` block lines, ``t`` tree edges (1-based)."""
    if n is None:
        n = td.graph.n if td.graph is not None else (max(td.vertex_set(), default=-1) + 1)
    lines = [f"td {len(td)} {width(td) + 1} {n}"]
    for t, b in enumerate(td.bags):
        lines.append(" ".join(["b", str(t + 1)] + [str(v + 1) for v in sorted(b)]))
    for t in range(len(td)):
        if td.parent[t] != -1:
            lines.append(f"t {td.parent[t] + 1} {t + 1}")
    return "\n".join(lines) + "\n"


def parse_td(text: str, graph: Graph | None = None) -> TreeDecomposition:
    """Read the block format; ``s td`` headers and bare ``a b`` edges are accepted too.

    Without ``t`` lines the first block is the root; bare edge lines are
    rooted at block 1.
    """
    header = None
    bags: dict[int, frozenset[int]] = {}
    directed: list[tuple[int, int]] = []
    undirected: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        parts = s.split()
        try:
            if parts[0] == "td" or parts[:2] == ["s", "td"]:
                nums = parts[1:] if parts[0] == "td" else parts[2:]
                header = tuple(int(x) for x in nums[:3])
            elif parts[0] == "b":
                vs = [int(x) - 1 for x in parts[2:]]
                if any(v < 0 for v in vs):
                    raise GraphFormatError("vertex ids are 1-based", lineno)
                bags[int(parts[1])] = frozenset(vs)
            elif parts[0] == "t":
                directed.append((int(parts[1]), int(parts[2])))
            elif len(parts) == 2:
                undirected.append((int(parts[0]), int(parts[1])))
            else:
                raise GraphFormatError(f"unrecognised line {s!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError("non-integer field", lineno) from None
    if header is None:
        raise GraphFormatError("missing 'td' header")
    if len(bags) != header[0]:
        raise GraphFormatError(f"header declares {header[0]} blocks, found {len(bags)}")
    ids = sorted(bags)
    pos = {b: i for i, b in enumerate(ids)}
    parent = [-1] * len(ids)
    if directed:
        for p, c in directed:
            if p not in pos or c not in pos:
                raise GraphFormatError(f"tree edge {p} {c} references unknown block")
            parent[pos[c]] = pos[p]
    elif undirected:
        adj: dict[int, list[int]] = {i: [] for i in range(len(ids))}
        for a, b in undirected:
            if a not in pos or b not in pos:
                raise GraphFormatError(f"tree edge {a} {b} references unknown block")
            adj[pos[a]].append(pos[b])
            adj[pos[b]].append(pos[a])
        seen, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    stack.append(w)
    if graph is not None and header[2] != graph.n:
        raise GraphFormatError(f"header says n={header[2]}, graph has {graph.n}")
    return TreeDecomposition([bags[b] for b in ids], parent, graph)


def serialize_csd(csd: CliqueSumDecomposition, n: int | None = None) -> str:
    n = csd.graph.n if n is None else n
    lines = [f"csd {len(csd)} {n}"]
    for t in csd.nodes:
        par = "-" if csd.parent[t] == -1 else str(csd.parent[t] + 1)
        blk = ",".join(str(v + 1) for v in sorted(csd.bags[t]))
        apx = ",".join(str(v + 1) for v in sorted(csd.apex[t]))
        lines.append(f"node {t + 1} parent={par} block={blk} apex={apx}")
    return "\n".join(lines) + "\n"


def parse_csd(text: str, graph: Graph) -> CliqueSumDecomposition:
    """Read a clique-sum decomposition and validate it against ``graph``."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.split()[0] == "c":
            continue
        parts = s.split()
        if parts[0] == "csd":
            if len(parts) != 3:
                raise GraphFormatError("expected 'csd <#nodes> <n>'", lineno)
            header = (int(parts[1]), int(parts[2]))
            continue
        if parts[0] != "node" or len(parts) < 2:
            raise GraphFormatError(f"unrecognised line {s!r}", lineno)
        fields = {"parent": "-", "block": "", "apex": ""}
        for tok in parts[2:]:
            if "=" not in tok:
                raise GraphFormatError(f"bad field {tok!r}", lineno)
            k, v = tok.split("=", 1)
            if k not in fields:
                raise GraphFormatError(f"unknown field {k!r}", lineno)
            fields[k] = v

        def vset(txt):
            out = set()
            for x in filter(None, txt.split(",")):
                v = int(x) - 1
                if not 0 <= v < graph.n:
                    raise GraphFormatError(f"vertex {x} out of range", lineno)
                out.add(v)
            return frozenset(out)

        try:
            rows.append((int(parts[1]), None if fields["parent"] == "-" else int(fields["parent"]),
                         vset(fields["block"]), vset(fields["apex"])))
        except ValueError:
            raise GraphFormatError("non-integer field", lineno) from None
    if header is None:
        raise GraphFormatError("missing 'csd' header")
    if header[0] != len(rows) or header[1] != graph.n:
        raise GraphFormatError("header does not match contents")
    pos = {r[0]: i for i, r in enumerate(rows)}
    parent = []
    for r in rows:
        if r[1] is not None and r[1] not in pos:
            raise GraphFormatError(f"node {r[0]} has unknown parent {r[1]}")
        parent.append(-1 if r[1] is None else pos[r[1]])
    csd = CliqueSumDecomposition([r[2] for r in rows], parent, [r[3] for r in rows], graph)
    require_valid(csd, graph)
    return csd

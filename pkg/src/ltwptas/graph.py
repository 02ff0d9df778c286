"""Simple undirected graphs with dense integer vertex ids.

Vertices are ``0..n-1`` internally.  Text formats use 1-based endpoints,
so ``parse_graph`` and ``serialize_graph`` shift by one on the way in and
out; optional ``labels`` carry external names for round-trips.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class GraphFormatError(ValueError):
    """Malformed graph text; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class Graph:
    """Immutable simple undirected graph.

    ``adj[v]`` is a strictly increasing tuple of neighbours.  Construct with
    :meth:`from_edges`; the plain constructor trusts its input.
    """

    __slots__ = ("n", "adj", "labels", "_nbr_sets", "_m")

    def __init__(self, adj: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adj)
        self.n = len(self.adj)
        self.labels = tuple(labels) if labels is not None else None
        self._nbr_sets = tuple(frozenset(a) for a in self.adj)
        self._m = sum(len(a) for a in self.adj) // 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls([sorted(s) for s in nbrs], labels)

    @property
    def m(self) -> int:
        return self._m

    @property
    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbr_sets[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbr_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v + 1)

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise IndexError(f"vertex {v!r} out of range 0..{self.n - 1}")

    def check_vertices(self, xs: Iterable[int]) -> frozenset[int]:
        xs = frozenset(xs)
        for v in xs:
            self.check_vertex(v)
        return xs

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.adj == other.adj

    def __hash__(self):
        return hash(self.adj)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class MinorWitness:
    """Branch sets witnessing that ``pattern`` is a minor of ``host``."""

    host: Graph
    pattern: Graph
    branch_sets: tuple[frozenset[int], ...] = field(repr=False)

    def violations(self) -> list[str]:
        out = []
        if len(self.branch_sets) != self.pattern.n:
            return [f"expected {self.pattern.n} branch sets, got {len(self.branch_sets)}"]
        seen: dict[int, int] = {}
        for x, bs in enumerate(self.branch_sets):
            if not bs:
                out.append(f"branch set of {x} is empty")
                continue
            if not is_connected_set(self.host, bs):
                out.append(f"branch set of {x} is not connected")
            for v in bs:
                if v in seen:
                    out.append(f"host vertex {v} in branch sets of {seen[v]} and {x}")
                seen[v] = x
        for x, y in self.pattern.edges():
            bx, by = self.branch_sets[x], self.branch_sets[y]
            if not any(self.host.neighbors(u) & by for u in bx):
                out.append(f"pattern edge {x}-{y} has no host edge")
        return out

    def is_valid(self) -> bool:
        return not self.violations()


# -- text formats ------------------------------------------------------------

def parse_graph(text: str, format: str = "auto") -> Graph:
    """Parse a graph from text.

    ``dimacs``: header ``p edge <n> <m>`` (``p tw`` and ``p col`` also
    accepted), then ``e <u> <v>`` lines.  ``edge-list``: first line
    ``<n> <m>``, then ``<u> <v>`` lines.  Endpoints are 1-based and ``c``
    lines are comments in both.  Duplicate and reversed edges collapse;
    the declared ``m`` must match the number of edge lines.
    """
    lines = text.splitlines()
    if format == "auto":
        format = "edge-list"
        for raw in lines:
            s = raw.strip()
            if s and not s.startswith("c"):
                format = "dimacs" if s.startswith("p") else "edge-list"
                break
    if format not in ("dimacs", "edge-list"):
        raise ValueError(f"unknown graph format {format!r}")

    n = m_decl = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, 1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        parts = s.split()
        if n is None:
            if format == "dimacs":
                if parts[0] != "p" or len(parts) != 4:
                    raise GraphFormatError("expected header 'p edge <n> <m>'", lineno)
                nums = parts[2:]
            else:
                if len(parts) != 2:
                    raise GraphFormatError("expected header '<n> <m>'", lineno)
                nums = parts
            try:
                n, m_decl = int(nums[0]), int(nums[1])
            except ValueError:
                raise GraphFormatError("non-integer header field", lineno) from None
            if n < 0 or m_decl < 0:
                raise GraphFormatError("negative header field", lineno)
            continue
        if format == "dimacs":
            if parts[0] == "e":
                parts = parts[1:]
            elif parts[0].isalpha():
                raise GraphFormatError(f"unexpected line type {parts[0]!r}", lineno)
        if len(parts) != 2:
            raise GraphFormatError("edge line must have two endpoints", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("non-integer endpoint", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex index out of range 1..{n}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        edges.append((u - 1, v - 1))
    if n is None:
        raise GraphFormatError("missing header")
    if len(edges) != m_decl:
        raise GraphFormatError(f"declared {m_decl} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def parse_vertex_list(text: str, g: Graph) -> frozenset[int]:
    """Whitespace-separated 1-based vertex ids; ``c`` lines ignored."""
    out = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        for tok in s.replace(",", " ").split():
            try:
                v = int(tok)
            except ValueError:
                raise GraphFormatError(f"non-integer vertex {tok!r}", lineno) from None
            if not 1 <= v <= g.n:
                raise GraphFormatError(f"vertex {v} out of range 1..{g.n}", lineno)
            out.add(v - 1)
    return frozenset(out)


# -- metric ------------------------------------------------------------------

def bfs_distances(g: Graph, v: int, within: frozenset[int] | None = None) -> dict[int, int]:
    """Distances from ``v``; restricted to ``within`` when given."""
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.adj[u]:
            if w not in dist and (within is None or w in within):
                dist[w] = du
                queue.append(w)
    return dist


def bfs_layers(g: Graph, v: int) -> tuple[list[frozenset[int]], frozenset[int]]:
    """Level sets ``L_0..L_m`` around ``v`` and the unreachable vertices."""
    g.check_vertex(v)
    dist = bfs_distances(g, v)
    depth = max(dist.values())
    layers: list[set[int]] = [set() for _ in range(depth + 1)]
    for w, d in dist.items():
        layers[d].add(w)
    unreachable = frozenset(w for w in g.vertices if w not in dist)
    return [frozenset(s) for s in layers], unreachable


def level_interval(g: Graph, v: int, i: int, j: int) -> frozenset[int]:
    """Vertices at distance ``i..j`` from ``v``.

    Empty when ``i > j``; ``i <= 0`` is read as ``0``.
    """
    g.check_vertex(v)
    if i > j:
        return frozenset()
    i = max(i, 0)
    return frozenset(w for w, d in bfs_distances(g, v).items() if i <= d <= j)


def ball(g: Graph, v: int, r: int) -> frozenset[int]:
    return level_interval(g, v, 0, r)


# -- structure ---------------------------------------------------------------

def induced_subgraph(g: Graph, xs: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """``<X>`` relabelled densely; the tuple maps new ids back to ``g``."""
    back = tuple(sorted(g.check_vertices(xs)))
    fwd = {v: i for i, v in enumerate(back)}
    adj = [[fwd[w] for w in g.adj[v] if w in fwd] for v in back]
    labels = [g.label(v) for v in back] if g.labels is not None else None
    return Graph(adj, labels), back


def delete_vertices(g: Graph, xs: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    xs = g.check_vertices(xs)
    return induced_subgraph(g, [v for v in g.vertices if v not in xs])


def contract_ball(g: Graph, v: int, r: int) -> tuple[Graph, MinorWitness]:
    """Contract the radius-``r`` ball around ``v`` into one vertex.

    The merged vertex gets id 0; the remaining vertices follow in
    increasing original order.  Parallel edges collapse.
    """
    g.check_vertex(v)
    if r < 0:
        raise ValueError("radius must be non-negative")
    inner = ball(g, v, r)
    rest = [w for w in g.vertices if w not in inner]
    fwd = {w: i + 1 for i, w in enumerate(rest)}
    for w in inner:
        fwd[w] = 0
    edges = {(min(fwd[a], fwd[b]), max(fwd[a], fwd[b])) for a, b in g.edges()}
    edges.discard((0, 0))
    h = Graph.from_edges(len(rest) + 1, edges)
    branch = (inner,) + tuple(frozenset({w}) for w in rest)
    return h, MinorWitness(g, h, branch)


def is_clique(g: Graph, xs: Iterable[int]) -> bool:
    xs = sorted(g.check_vertices(xs))
    return all(g.has_edge(a, b) for a, b in combinations(xs, 2))


def is_connected_set(g: Graph, xs: Iterable[int]) -> bool:
    xs = frozenset(xs)
    if not xs:
        return True
    start = next(iter(xs))
    return len(bfs_distances(g, start, within=xs)) == len(xs)


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Connected components, ordered by smallest vertex."""
    pool = frozenset(g.vertices) if within is None else frozenset(within)
    seen: set[int] = set()
    out = []
    for v in sorted(pool):
        if v in seen:
            continue
        comp = frozenset(bfs_distances(g, v, within=pool))
        seen |= comp
        out.append(comp)
    return out


def clique_number(g: Graph, within: Iterable[int] | None = None) -> int:
    """Size of a largest clique (Bron-Kerbosch with pivoting)."""
    pool = set(g.vertices) if within is None else set(within)
    best = 0

    def expand(r: int, p: set[int], x: set[int]) -> None:
        nonlocal best
        if not p and not x:
            best = max(best, r)
            return
        if r + len(p) <= best:
            return
        pivot = max(p | x, key=lambda u: len(p & g.neighbors(u)))
        for u in list(p - g.neighbors(pivot)):
            nu = g.neighbors(u)
            expand(r + 1, p & nu, x & nu)
            p.discard(u)
            x.add(u)

    expand(0, pool, set())
    return best


def union_graph(n: int, *edge_sets: Iterable[tuple[int, int]]) -> Graph:
    edges = set()
    for es in edge_sets:
        edges.update((min(a, b), max(a, b)) for a, b in es)
    return Graph.from_edges(n, edges)

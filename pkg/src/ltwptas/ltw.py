"""Local tree-width profiles and linear-bound checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import Graph, ball, contract_ball, induced_subgraph
from .treedecomp import DEFAULT_EXACT_CEILING, DecompositionError, exact_treewidth, greedy_order

MODES = ("exact", "upper")


@dataclass
class LtwEntry:
    radius: int
    value: int
    vertex: int
    size: int  # |N_r(vertex)|
    exact: bool


@dataclass
class LtwProfile:
    entries: list[LtwEntry]
    mode: str

    @property
    def radii(self) -> list[int]:
        return [e.radius for e in self.entries]

    @property
    def values(self) -> list[int]:
        return [e.value for e in self.entries]

    @property
    def exact(self) -> bool:
        return all(e.exact for e in self.entries)

    def __getitem__(self, r: int) -> int:
        return self.entries[r].value

    def lines(self) -> list[str]:
        return [f"r={e.radius} ltw={e.value} vertex={e.vertex} size={e.size} exact={str(e.exact).lower()}"
                for e in self.entries]


class _WidthCache:
    """Tree-width of induced subgraphs, keyed by vertex set."""

    def __init__(self, g: Graph, mode: str, ceiling: int, budget: int):
        self.g = g
        self.mode = mode
        self.ceiling = ceiling
        self.budget = budget
        self.memo: dict[frozenset, tuple[int, bool]] = {}

    def width(self, verts: frozenset, v: int, r: int) -> tuple[int, bool]:
        if verts in self.memo:
            return self.memo[verts]
        sub, _ = induced_subgraph(self.g, verts)
        if self.mode == "upper":
            out = (greedy_order(sub, "min-fill")[1], False)
        else:
            if sub.n > self.ceiling:
                raise DecompositionError(
                    f"neighbourhood of vertex {v} at radius {r} has {sub.n} vertices, over ceiling {self.ceiling}")
            res = exact_treewidth(sub, node_budget=self.budget, ceiling=self.ceiling)
            out = (res.width, res.exact)
        self.memo[verts] = out
        return out


def local_treewidth(g: Graph, r_max: int, mode: str = "exact", ceiling: int | None = None,
                    node_budget: int = 2_000_000) -> LtwProfile:
    """``ltw(r)`` for ``r = 0..r_max``: the largest tree-width of any r-ball."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if r_max < 0:
        raise ValueError("r_max must be non-negative")
    ceiling = DEFAULT_EXACT_CEILING if ceiling is None else ceiling
    cache = _WidthCache(g, mode, ceiling, node_budget)
    entries = []
    for r in range(r_max + 1):
        best = LtwEntry(r, -1, -1, 0, True)
        exact = True
        for v in g.vertices:
            nb = ball(g, v, r)
            w, ex = cache.width(nb, v, r)
            exact &= ex
            if w > best.value:
                best = LtwEntry(r, w, v, len(nb), True)
        best.exact = exact
        if entries and best.value < entries[-1].value and not exact:
            # heuristic widths need not be monotone; report the monotone envelope
            prev = entries[-1]
            best = LtwEntry(r, prev.value, prev.vertex, prev.size, False)
        entries.append(best)
    return LtwProfile(entries, mode)


@dataclass
class BoundCheck:
    lam: int
    profile: LtwProfile
    failures: list[LtwEntry]
    minors_checked: int = 0
    minor_failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.minor_failures

    def lines(self) -> list[str]:
        out = []
        for e in self.profile.entries:
            bound = self.lam * e.radius
            status = "pass" if e.value <= bound else "fail"
            out.append(f"r={e.radius} ltw={e.value} bound={bound} {status}"
                       + ("" if status == "pass" else f" witness={e.vertex}"))
        out.append(f"minors_checked={self.minors_checked}")
        out.extend(f"minor_fail {m}" for m in self.minor_failures)
        out.append("scope=balls of the graph" + (" and sampled ball contractions" if self.minors_checked else ""))
        return out


def check_linear_bound(g: Graph, lam: int, r_max: int, mode: str = "exact", minors: int = 0,
                       seed: int = 0, ceiling: int | None = None) -> BoundCheck:
    """Test ``ltw(r) <= lam * r`` for ``r <= r_max``.

    Only the graph itself is certain to be covered; ``minors`` extra minors
    obtained by contracting random balls are checked as a sample.
    """
    profile = local_treewidth(g, r_max, mode, ceiling)
    failures = [e for e in profile.entries if e.value > lam * e.radius]
    out = BoundCheck(lam, profile, failures)
    rng = random.Random(seed)
    for _ in range(minors):
        if g.n < 2:
            break
        v = rng.randrange(g.n)
        rad = rng.randrange(0, 2)
        h, _ = contract_ball(g, v, rad)
        sub = local_treewidth(h, r_max, mode, ceiling)
        out.minors_checked += 1
        for e in sub.entries:
            if e.value > lam * e.radius:
                out.minor_failures.append(f"contract({v},{rad}) r={e.radius} ltw={e.value}")
    return out


def valence_bound(l: int, r: int) -> int:
    """Local tree-width bound for maximum degree ``l``: ``l * (l-1)**(r-1)``."""
    if l < 1 or r < 1:
        raise ValueError("need l >= 1 and r >= 1")
    return l * (l - 1) ** (r - 1)

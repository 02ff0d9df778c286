import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltwptas.generators import apex_over, grid, path, planar, star, wheel
from ltwptas.graph import Graph, bfs_layers
from ltwptas.sqrtdecomp import split_levels, sqrt_decomposition, sqrt_decomposition_apex, width_bound
from ltwptas.treedecomp import DecompositionError, TreeDecomposition, exact_treewidth, validate, width

from oracles import td_is_valid
from strategies import graphs


def _valid(td, g):
    return validate(td, g).valid and td_is_valid(g, td.bags, td.parent, g.vertices)


def test_path_from_an_end():
    g = path(9)
    res = sqrt_decomposition(g, 1, 0)
    assert res.split.intervals == [("I", 0, 8)]
    assert res.width == 1 and res.width <= 2 * 3 - 1
    assert _valid(res.decomposition, g)


def test_grid_10x10_from_corner():
    g = grid(10, 10)
    res = sqrt_decomposition(g, 3, 0)
    assert res.bound == 51 == math.floor(3 * math.sqrt(300))
    assert _valid(res.decomposition, g) and res.within_bound
    assert 10 <= res.width <= 20


def test_star_from_center():
    g = star(8)
    res = sqrt_decomposition(g, 1, 0)
    assert res.split.levels == [1, 8]
    assert res.split.intervals == [("I", 0, 0), ("J", 1, 1)]
    assert _valid(res.decomposition, g) and res.width <= 3 * math.sqrt(g.n)


def test_wheel_with_hub_apex():
    g = wheel(8)
    hub = max(g.vertices, key=g.degree)
    res = sqrt_decomposition_apex(g, 2, 1, {hub})
    assert _valid(res.decomposition, g)
    assert exact_treewidth(g).width == 3 <= res.width <= res.bound
    assert res.bound == math.isqrt(9 * 2 * g.n) + 1


def test_empty_apex_is_plain():
    g = planar(14, 3)
    a = sqrt_decomposition(g, 3, 0)
    b = sqrt_decomposition_apex(g, 3, 0, set(), v=0)
    assert a.decomposition.bags == b.decomposition.bags and a.width == b.width


def test_apex_over_grid():
    g, apex = apex_over(grid(6, 6), 2, 5)
    res = sqrt_decomposition_apex(g, 3, 2, apex)
    assert _valid(res.decomposition, g)
    assert res.width <= math.floor(3 * math.sqrt(3 * 38)) + 2
    assert all(apex <= b for b in res.decomposition.bags)


def test_apex_errors():
    g, apex = apex_over(grid(3, 3), 2, 1)
    with pytest.raises(ValueError):
        sqrt_decomposition_apex(g, 3, 1, apex)
    with pytest.raises(ValueError):
        sqrt_decomposition_apex(g, 3, 2, apex, v=min(apex))


def test_disconnected_rejected():
    with pytest.raises(DecompositionError):
        sqrt_decomposition(Graph.from_edges(3, [(0, 1)]), 1)


def test_inner_failure_propagates():
    def broken(g, verts):
        return TreeDecomposition([set()], [-1])

    with pytest.raises(DecompositionError):
        sqrt_decomposition(star(8), 1, 0, inner=broken)


def test_threshold_ties_go_to_small_side():
    # 2^2 == 1 * 4
    sp = split_levels([1, 2, 3], 1, 4)
    assert sp.intervals == [("I", 0, 1), ("J", 2, 2)]


@given(st.lists(st.integers(1, 12), min_size=1, max_size=12), st.integers(1, 4))
def test_split_partitions_levels_in_order(sizes, lam):
    n = sum(sizes)
    sp = split_levels(sizes, lam, n)
    covered = []
    for (kind, a, b), nxt in zip(sp.intervals, sp.intervals[1:] + [None]):
        covered.extend(range(a, b + 1))
        for j in range(a, b + 1):
            assert (sizes[j] ** 2 <= lam * n) == (kind == "I")
        if nxt is not None:
            assert nxt[0] != kind
    assert covered == list(range(len(sizes)))


@given(graphs(max_n=14, connected=True), st.integers(1, 3), st.data())
def test_always_valid(g, lam, data):
    v = data.draw(st.integers(0, g.n - 1))
    res = sqrt_decomposition(g, lam, v)
    assert _valid(res.decomposition, g)
    assert res.width == width(res.decomposition)


def test_border_edges_covered_by_augmented_blocks():
    rng = random.Random(2)
    for _ in range(30):
        g = planar(rng.randint(10, 30), rng.randrange(10**6))
        res = sqrt_decomposition(g, 1, 0)
        layers, _ = bfs_layers(g, 0)
        level = {w: r for r, layer in enumerate(layers) for w in layer}
        for kind, a, b in res.split.intervals:
            if kind != "J":
                continue
            for x, y in g.edges():
                lx, ly = sorted((level[x], level[y]))
                if (lx == a - 1 and ly == a) or (lx == b and ly == b + 1):
                    assert any(x in blk and y in blk for blk in res.decomposition.bags)


@pytest.mark.parametrize("side", [5, 8, 12])
def test_grid_within_bound(side):
    g = grid(side, side)
    res = sqrt_decomposition(g, 3, 0)
    assert res.within_bound and res.bound == width_bound(3, side * side)


def test_report_lines():
    res = sqrt_decomposition(star(8), 1, 0)
    lines = res.report_lines()
    assert "intervals=I[0,0]:0 J[1,1]:1" in lines and "within_bound=true" in lines

import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltwptas.generators import complete, grid, planar, random_regular, random_tree
from ltwptas.graph import Graph, induced_subgraph
from ltwptas.ltw import check_linear_bound, local_treewidth, valence_bound
from ltwptas.treedecomp import DecompositionError, exact_treewidth

from oracles import from_nx, to_nx, treewidth_by_orders
from strategies import graphs


def test_trees_have_local_width_one():
    for seed in range(5):
        prof = local_treewidth(random_tree(12, seed), 3)
        assert prof.values == [0, 1, 1, 1] and prof.exact


def test_edgeless_graph():
    assert local_treewidth(Graph.from_edges(3, []), 2).values == [0, 0, 0]


def test_grid_radius_one():
    assert local_treewidth(grid(5, 5), 1)[1] == 1


def test_k5():
    assert local_treewidth(complete(5), 3).values == [0, 4, 4, 4]


def test_witness_attains_value():
    g = planar(8, 8)
    prof = local_treewidth(g, 2)
    for e in prof.entries:
        if e.radius:
            ball = nx.ego_graph(to_nx(g), e.vertex, radius=e.radius)
            assert len(ball) == e.size
            assert treewidth_by_orders(from_nx(nx.convert_node_labels_to_integers(ball))) == e.value


def test_six_by_six_grid_passes_slope_three():
    chk = check_linear_bound(grid(6, 6), 3, 3)
    assert chk.passed and chk.profile.exact


def test_k5_fails_slope_one_with_witness():
    chk = check_linear_bound(complete(5), 1, 1)
    assert not chk.passed
    assert chk.failures[0].radius == 1 and chk.failures[0].value == 4
    assert any(line.startswith("r=1 ltw=4 bound=1 fail witness=") for line in chk.lines())


def test_slope_at_least_treewidth_passes():
    rng = random.Random(3)
    for _ in range(10):
        g = planar(11, rng.randrange(10**6))
        tw = exact_treewidth(g).width
        assert check_linear_bound(g, max(tw, 1), 3).passed


def test_sampled_minors_reported():
    chk = check_linear_bound(grid(4, 4), 3, 2, minors=3, seed=1)
    assert chk.minors_checked == 3 and chk.passed
    assert "minors_checked=3" in chk.lines()


def test_valence_bound_values():
    assert valence_bound(3, 1) == 3
    assert valence_bound(2, 5) == 2
    assert valence_bound(4, 3) == 36
    assert valence_bound(10, 40) == 10 * 9 ** 39
    with pytest.raises(ValueError):
        valence_bound(0, 1)


def test_cubic_graphs_radius_two():
    for seed in range(6):
        g = random_regular(16 + 2 * (seed % 3), 3, seed)
        assert local_treewidth(g, 2)[2] <= 6 == valence_bound(3, 2)


def test_ceiling_names_vertex_and_radius():
    with pytest.raises(DecompositionError, match=r"vertex \d+ at radius 2 has 9 vertices"):
        local_treewidth(grid(6, 6), 2, ceiling=8)


def test_upper_mode_flagged():
    prof = local_treewidth(grid(6, 6), 2, mode="upper")
    assert not prof.exact and prof.mode == "upper"
    exact = local_treewidth(grid(6, 6), 2)
    assert all(u >= e for u, e in zip(prof.values, exact.values))


def test_bad_arguments():
    with pytest.raises(ValueError):
        local_treewidth(grid(2, 2), 1, mode="fast")
    with pytest.raises(ValueError):
        local_treewidth(grid(2, 2), -1)


@given(graphs(max_n=10))
def test_profile_monotone_and_below_treewidth(g):
    prof = local_treewidth(g, 3)
    vals = prof.values
    assert vals[0] == 0
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= exact_treewidth(g).width


@given(graphs(max_n=10), st.data())
def test_induced_subgraph_monotone(g, data):
    keep = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    h, _ = induced_subgraph(g, keep)
    big = local_treewidth(g, 3).values
    small = local_treewidth(h, 3).values
    assert all(a <= b for a, b in zip(small, big))

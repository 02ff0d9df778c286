import random
from itertools import chain, combinations

import networkx as nx
import pytest
from hypothesis import given

from ltwptas.dp import (
    ProblemKind,
    brute_force,
    is_dominating_set,
    is_feasible,
    optimum_value,
    solve_ds_strip,
    solve_exact_tw,
    solve_vc_constrained,
)
from ltwptas.generators import complete, cycle, grid, path, planar, random_connected
from ltwptas.graph import Graph, induced_subgraph
from ltwptas.treedecomp import TreeDecomposition, heuristic_decomposition

from oracles import from_nx, opt_by_enumeration
from strategies import graphs

KINDS = list(ProblemKind)


def _td(g, vertices=None):
    return heuristic_decomposition(g, vertices=vertices)


# -- exact DP ------------------------------------------------------------------------------

def test_p3_vertex_cover_is_middle():
    sol = solve_exact_tw(path(3), _td(path(3)), "vc")
    assert sol.vertices == (1,) and sol.feasible


def test_grid_3x3_independent_set():
    g = grid(3, 3)
    assert solve_exact_tw(g, _td(g), "is").value == 5 == opt_by_enumeration(g, "is")


def test_grid_3x3_dominating_set():
    g = grid(3, 3)
    assert solve_exact_tw(g, _td(g), "ds").value == 3 == opt_by_enumeration(g, "ds")


def test_exact_rejects_invalid_decomposition():
    g = path(3)
    with pytest.raises(ValueError):
        solve_exact_tw(g, TreeDecomposition([{0, 1}, {2}], [-1, 0]), "vc")


@given(graphs(max_n=9))
def test_dp_matches_enumeration(g):
    td = _td(g)
    for kind in KINDS:
        sol = solve_exact_tw(g, td, kind)
        assert sol.feasible and is_feasible(g, kind, sol.vertices)
        assert sol.value == opt_by_enumeration(g, kind.value)


def test_dp_on_disconnected_graph():
    g = Graph.from_edges(6, [(0, 1), (2, 3), (3, 4)])
    for kind in KINDS:
        assert solve_exact_tw(g, _td(g), kind).value == opt_by_enumeration(g, kind.value)


def test_dp_on_larger_planar_graph():
    g = planar(20, 7)
    for kind in KINDS:
        assert solve_exact_tw(g, _td(g), kind).value == brute_force(g, kind).value


# -- constrained vertex cover -----------------------------------------------------------------

def test_vc_constrained_apex_covers():
    g = path(2)
    sol = solve_vc_constrained(g, {0}, {0}, _td(g, [1]))
    assert sol.vertices == ()


def test_vc_constrained_forced_endpoint():
    g = path(2)
    assert solve_vc_constrained(g, {0}, set(), _td(g, [1])).vertices == (1,)


def test_vc_constrained_infeasible():
    g = complete(3)
    assert solve_vc_constrained(g, {0, 1}, set(), _td(g, [2])) is None


def test_vc_constrained_rejects_bad_subset():
    g = path(3)
    with pytest.raises(ValueError):
        solve_vc_constrained(g, {0}, {1}, _td(g, [1, 2]))


@given(graphs(max_n=9))
def test_vc_constrained_without_apex_is_plain_vc(g):
    td = _td(g)
    assert solve_vc_constrained(g, set(), set(), td).value == solve_exact_tw(g, td, "vc").value


def test_vc_constrained_monotone_in_chosen_set():
    rng = random.Random(3)
    for _ in range(30):
        g = random_connected(rng.randint(5, 9), 0.35, rng.randrange(10**6))
        apex = frozenset(rng.sample(range(g.n), rng.randint(1, 4)))
        td = _td(g, [v for v in g.vertices if v not in apex])
        subsets = list(chain.from_iterable(combinations(sorted(apex), r) for r in range(len(apex) + 1)))
        value = {}
        for ys in subsets:
            sol = solve_vc_constrained(g, apex, ys, td)
            value[frozenset(ys)] = float("inf") if sol is None else sol.value
            if sol is not None:
                ok = brute_force(g, "vc", forced_in=ys, forbidden=apex - set(ys))
                assert ok is not None and sol.value == ok.value - len(ys)
        for a in value:
            for b in value:
                if a <= b:
                    assert value[b] <= value[a]


# -- dominating-set strips ----------------------------------------------------------------------

def test_ds_strip_path_interior():
    g = path(5)
    sol = solve_ds_strip(g, range(5), {1, 2, 3}, _td(g))
    assert sol.vertices == (2,) and sol.feasible


def test_ds_strip_empty_interior():
    g = path(5)
    assert solve_ds_strip(g, range(5), set(), _td(g)).value == 0


def test_ds_strip_full_grid():
    g = grid(3, 3)
    assert solve_ds_strip(g, range(9), range(9), _td(g)).value == 3


def test_ds_strip_interior_must_be_inside():
    g = path(5)
    with pytest.raises(ValueError):
        solve_ds_strip(g, [0, 1, 2], [3], _td(g, [0, 1, 2]))


@given(graphs(max_n=9))
def test_ds_strip_full_equals_exact(g):
    td = _td(g)
    assert solve_ds_strip(g, g.vertices, g.vertices, td).value == solve_exact_tw(g, td, "ds").value


def test_ds_strip_matches_restricted_brute_force():
    rng = random.Random(8)
    for _ in range(25):
        g = planar(12, rng.randrange(10**6))
        strip = sorted(rng.sample(range(g.n), 8))
        interior = set(rng.sample(strip, 4))
        sub, back = induced_subgraph(g, strip)
        fwd = {v: i for i, v in enumerate(back)}
        want = opt_by_enumeration(sub, "ds", targets=[fwd[v] for v in interior])
        sol = solve_ds_strip(g, strip, interior, _td(g, strip))
        assert sol.value == want and sol.feasible


# -- brute force ------------------------------------------------------------------------------------

def test_brute_c5():
    assert brute_force(cycle(5), "vc").value == 3
    assert brute_force(cycle(5), "is").value == 2


def test_brute_k4_ds():
    assert brute_force(complete(4), "ds").value == 1


def test_brute_lexicographically_least():
    assert brute_force(cycle(4), "vc").vertices == (0, 2)
    assert brute_force(path(3), "ds").vertices == (1,)


def test_brute_constraints():
    g = path(3)
    assert brute_force(g, "vc", forbidden=[1]).vertices == (0, 2)
    assert brute_force(g, "is", forced_in=[1]).vertices == (1,)
    assert brute_force(g, "vc", forbidden=[0, 1]) is None
    sol = brute_force(g, "ds", dominate_only=[0])
    assert sol.value == 1 and is_dominating_set(g, sol.vertices, [0])


def test_brute_ceiling():
    with pytest.raises(ValueError, match="ceiling"):
        brute_force(path(30), "vc")


def test_optimum_value_infinite_when_infeasible():
    assert optimum_value(path(3), "vc") == 1


def test_all_small_trees():
    for n in range(1, 8):
        for t in nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]:
            g = from_nx(t)
            for kind in KINDS:
                assert solve_exact_tw(g, _td(g), kind).value == opt_by_enumeration(g, kind.value)


def test_problem_kind_parse():
    assert ProblemKind.parse("VC") is ProblemKind.VC
    assert not ProblemKind.IS.minimize
    with pytest.raises(ValueError):
        ProblemKind.parse("tsp")

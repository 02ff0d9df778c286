"""Shifting approximation schemes for graphs of bounded local tree-width."""

from .dp import (
    ProblemKind,
    Solution,
    brute_force,
    is_dominating_set,
    is_feasible,
    is_independent_set,
    is_vertex_cover,
    solve_ds_strip,
    solve_exact_tw,
    solve_vc_constrained,
)
from .graph import (
    Graph,
    GraphFormatError,
    MinorWitness,
    ball,
    bfs_layers,
    contract_ball,
    induced_subgraph,
    is_clique,
    level_interval,
    parse_graph,
    serialize_graph,
)
from .ltw import LtwProfile, check_linear_bound, local_treewidth, valence_bound
from .overclass import ClassPredicate, apex_width, decompose_over_class, width_bound
from .ptas import PtasConfig, Strip, build_strips, ptas_apex, ptas_cliquesum, ptas_local
from .sqrtdecomp import IntervalSplit, sqrt_decomposition, sqrt_decomposition_apex
from .treedecomp import (
    CliqueSumDecomposition,
    PathDecomposition,
    TreeDecomposition,
    adhesion,
    attach_path,
    exact_treewidth,
    heuristic_decomposition,
    torso,
    validate,
    width,
)

__version__ = "0.1.0"

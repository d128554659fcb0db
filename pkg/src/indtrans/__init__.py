"""Independent and K_s-free transversals in vertex-partitioned graphs."""

from .errors import BudgetExceeded, InputError, SolverFailure, TransversalError
from .generators import (
    GraphFamilyInstance,
    ListColoringInstance,
    coloring_from_transversal,
    gen_bipartite_union,
    gen_clique_grid,
    gen_disjoint_cliques,
    gen_random_list_coloring,
    gen_random_local_sparse,
    reduce_graph_family,
    reduce_list_coloring,
    search_no_it_assignment,
    transversal_to_partition,
)
from .graph import (
    GraphStats,
    MultipartiteGraph,
    Transversal,
    compute_stats,
    delete_vertices,
    is_independent_transversal,
    is_ks_free_transversal,
    normalize,
    per_part_degree,
)
from .io import load_graph, load_transversal, save_graph, save_transversal
from .ksfree import Coloring, minimize_mono_coloring, solve_ksfree, split_by_coloring
from .lll import LLLReport, lll_condition_check, moser_tardos_it, sample_transversal
from .nibble import NibbleSchedule, NibbleState, build_schedule, check_property_P, run_iteration, run_nibble, solve_it
from .oracle import OracleResult, brute_force_transversal, certify_no_transversal, enumerate_transversals
from .reduce import ReductionSchedule, plan_reduction, random_halving, reduce_local_degree, subsample_sparsify

__all__ = [
    "BudgetExceeded",
    "Coloring",
    "GraphFamilyInstance",
    "GraphStats",
    "InputError",
    "LLLReport",
    "ListColoringInstance",
    "MultipartiteGraph",
    "NibbleSchedule",
    "NibbleState",
    "OracleResult",
    "ReductionSchedule",
    "SolverFailure",
    "Transversal",
    "TransversalError",
    "brute_force_transversal",
    "build_schedule",
    "certify_no_transversal",
    "check_property_P",
    "coloring_from_transversal",
    "compute_stats",
    "delete_vertices",
    "enumerate_transversals",
    "gen_bipartite_union",
    "gen_clique_grid",
    "gen_disjoint_cliques",
    "gen_random_list_coloring",
    "gen_random_local_sparse",
    "is_independent_transversal",
    "is_ks_free_transversal",
    "lll_condition_check",
    "load_graph",
    "load_transversal",
    "minimize_mono_coloring",
    "moser_tardos_it",
    "normalize",
    "per_part_degree",
    "plan_reduction",
    "random_halving",
    "reduce_graph_family",
    "reduce_list_coloring",
    "reduce_local_degree",
    "run_iteration",
    "run_nibble",
    "sample_transversal",
    "save_graph",
    "save_transversal",
    "search_no_it_assignment",
    "solve_it",
    "solve_ksfree",
    "split_by_coloring",
    "subsample_sparsify",
    "transversal_to_partition",
]

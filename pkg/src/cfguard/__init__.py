"""Conflict-free coloring of graphs via treewidth DP, with 1.5D terrain guarding."""

from .cfc import cf_number, solve_cfc
from .decomposition import (
    NiceTreeDecomposition,
    TreeDecomposition,
    exact_treewidth,
    make_nice,
    min_fill_decomposition,
    validate,
    validate_nice,
)
from .graph import (
    Coloring,
    Graph,
    closed_neighborhood,
    degeneracy,
    greedy_color_bound,
    oracle_cfc,
    oracle_scfc,
    random_graph,
    verify_conflict_free,
    verify_strong_conflict_free,
)
from .scfc import scf_number, solve_scfc
from .terrain import (
    GuardColoring,
    OnionPeeling,
    Terrain,
    cf_guard,
    onion_peeling,
    pipeline,
    random_terrain,
    sees,
    strong_guard,
    verify_guarding,
    visibility_graph,
)

__all__ = [
    "Coloring",
    "Graph",
    "GuardColoring",
    "NiceTreeDecomposition",
    "OnionPeeling",
    "Terrain",
    "TreeDecomposition",
    "cf_guard",
    "cf_number",
    "closed_neighborhood",
    "degeneracy",
    "exact_treewidth",
    "greedy_color_bound",
    "make_nice",
    "min_fill_decomposition",
    "onion_peeling",
    "oracle_cfc",
    "oracle_scfc",
    "pipeline",
    "random_graph",
    "random_terrain",
    "scf_number",
    "sees",
    "solve_cfc",
    "solve_scfc",
    "strong_guard",
    "validate",
    "validate_nice",
    "verify_conflict_free",
    "verify_guarding",
    "verify_strong_conflict_free",
    "visibility_graph",
]

__version__ = "0.1.0"

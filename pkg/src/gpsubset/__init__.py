"""Subsets with few collinear points: exact collinearity analysis, selection
and coloring algorithms, and experiment sweeps."""

__version__ = "0.1.0"

from .geometry import (
    BoundReport,
    LineKey,
    LineStats,
    PointSet,
    bound_report,
    canonical_line,
    collinear_lines,
    collinearity_profile,
    count_collinear_ktuples,
)
from .hypergraph import (
    CollinearHypergraph,
    build_collinearity_hypergraph,
    degree_truncate,
    enumerate_edges,
    pair_overlap_counts,
    precondition_check,
    vertex_degree,
)
from .selection import (
    SelectionResult,
    exact_max_subset,
    gowers_witness,
    greedy_select,
    local_search_improve,
    select_best,
    spencer_select,
)
from .coloring import Coloring, lll_coloring, peel_coloring, signature_coloring, verify_coloring
from .generators import generic_projection, gpk_grid, grid_2d, lattice_hd, random_bounded_collinear
from .pointio import load_points, save_points

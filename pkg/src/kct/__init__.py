"""Administrative divisions of road graphs via the constrained vertex k-center problem."""

from .borders import BorderSketch, border_sketch, cross_edges, euclidean_mst, midpoints, rng
from .errors import (
    BudgetExceededError,
    DegenerateGeometryError,
    InfeasibleError,
    InputError,
    KctError,
    MetricError,
)
from .geo import PlanarFrame, fit_plane, project, project_graph, to_ecef
from .graph import (
    DistanceMatrix,
    MetricSummary,
    RoadGraph,
    StatsReport,
    Vertex,
    all_pairs,
    eccentricity,
    graph_stats,
    induced_subgraph,
    metric_summary,
    n_hop_neighborhood,
    sssp,
)
from .io import (
    GraphBundle,
    emit_geojson,
    emit_solution,
    emit_sweep_csv,
    gen_random_graph,
    load_graph,
    parse_solution,
    write_bundle,
)
from .partition import (
    CenteredPartition,
    CenteredTU,
    check_center_constraint,
    shift_centers,
    shift_recompute_fixpoint,
    tu_radius,
    voronoi_partition,
)
from .render import RenderSpec, render_svg
from .solver import (
    Objective,
    Solution,
    SolverConfig,
    balance_min_radius,
    exact_solver,
    greedy_farthest_first,
    local_search,
    solve,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "all_pairs",
    "balance_min_radius",
    "border_sketch",
    "BorderSketch",
    "BudgetExceededError",
    "CenteredPartition",
    "CenteredTU",
    "check_center_constraint",
    "cross_edges",
    "DegenerateGeometryError",
    "DistanceMatrix",
    "eccentricity",
    "emit_geojson",
    "emit_solution",
    "emit_sweep_csv",
    "euclidean_mst",
    "exact_solver",
    "fit_plane",
    "gen_random_graph",
    "graph_stats",
    "GraphBundle",
    "greedy_farthest_first",
    "induced_subgraph",
    "InfeasibleError",
    "InputError",
    "KctError",
    "load_graph",
    "local_search",
    "metric_summary",
    "MetricError",
    "MetricSummary",
    "midpoints",
    "n_hop_neighborhood",
    "Objective",
    "parse_solution",
    "PlanarFrame",
    "project",
    "project_graph",
    "render_svg",
    "RenderSpec",
    "rng",
    "RoadGraph",
    "shift_centers",
    "shift_recompute_fixpoint",
    "Solution",
    "solve",
    "SolverConfig",
    "sssp",
    "StatsReport",
    "sweep",
    "to_ecef",
    "tu_radius",
    "Vertex",
    "voronoi_partition",
    "write_bundle",
]

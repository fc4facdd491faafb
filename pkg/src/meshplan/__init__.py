"""meshplan: near-minimal connected router placement on gridded regions."""

from .connectivity import are_linked, is_connected
from .coverage import (CoverageMetrics, CoverDepthMap, add_router,
                       coverage_metrics, disk_cells, fitness, nr_min,
                       remove_router, router_stats)
from .metropolis import (OptimizerConfig, OptimizeResult, Placement, accept,
                         default_hops, initial_router_count,
                         initialize_placement, optimize, propose_move)
from .planner import MeshRouterPlanner, as_region
from .reduction import (MilestoneRow, RunReport, TraceRow, plan,
                        render_coverage, select_router_to_remove)
from .region import (Cell, RegionFormatError, RegionGrid, generate_region,
                     parse_region, required_area, serialize_region)

__version__ = "0.1.0"

__all__ = [
    "Cell", "RegionGrid", "RegionFormatError", "parse_region",
    "serialize_region", "generate_region", "required_area",
    "CoverDepthMap", "CoverageMetrics", "disk_cells", "add_router",
    "remove_router", "fitness", "coverage_metrics", "router_stats", "nr_min",
    "OptimizerConfig", "Placement", "OptimizeResult", "default_hops",
    "initial_router_count", "initialize_placement", "propose_move", "accept",
    "optimize", "are_linked", "is_connected", "select_router_to_remove",
    "plan", "TraceRow", "MilestoneRow", "RunReport", "render_coverage",
    "MeshRouterPlanner", "as_region",
]

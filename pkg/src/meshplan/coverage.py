"""Disk coverage geometry, the cover-depth map, fitness and statistics.

Every router covers the grid cells strictly inside its radius (squared
distance < r^2). The depth map counts, per cell, how many routers cover
it; the fitness of a placement is the number of required cells with
depth >= 1. add_router/remove_router return the exact fitness delta of
their own change, which lets the optimizer track fitness incrementally
instead of rescanning the grid.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .region import Cell, RegionGrid, required_area


@lru_cache(maxsize=32)
def _disk_offsets(radius: int):
    """(dy, dx) offset arrays for all cells with dx^2+dy^2 < radius^2, row-major."""
    span = np.arange(-(radius - 1), radius)
    dy, dx = np.meshgrid(span, span, indexing="ij")
    keep = dx * dx + dy * dy < radius * radius
    return dy[keep], dx[keep]


def disk_cells(center: Cell, radius: int, bounds) -> list[Cell]:
    """In-bounds cells covered from center, row-major order.

    bounds is (width, height). The boundary circle itself is excluded:
    coverage needs squared distance strictly below radius^2.
    """
    width, height = bounds
    dy, dx = _disk_offsets(radius)
    xs = center.x + dx
    ys = center.y + dy
    keep = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
    return [Cell(int(x), int(y)) for x, y in zip(xs[keep], ys[keep])]


class CoverDepthMap:
    """Mutable per-cell count of covering routers for one optimization run."""

    def __init__(self, depth: np.ndarray):
        self.depth = depth

    @classmethod
    def zeros(cls, grid: RegionGrid) -> "CoverDepthMap":
        return cls(np.zeros((grid.height, grid.width), dtype=np.int32))

    @classmethod
    def from_placement(cls, grid: RegionGrid, placement) -> "CoverDepthMap":
        m = cls.zeros(grid)
        for c in placement.centers:
            add_router(m, grid, c, placement.radius)
        return m

    def copy(self) -> "CoverDepthMap":
        return CoverDepthMap(self.depth.copy())


def _disk_window(m: CoverDepthMap, grid: RegionGrid, center: Cell, radius: int):
    dy, dx = _disk_offsets(radius)
    xs = center.x + dx
    ys = center.y + dy
    keep = (xs >= 0) & (xs < grid.width) & (ys >= 0) & (ys < grid.height)
    return ys[keep], xs[keep]


def add_router(m: CoverDepthMap, grid: RegionGrid, center: Cell, radius: int) -> int:
    """Increment depth over the disk; return the count of required cells
    that were uncovered before this router arrived."""
    ys, xs = _disk_window(m, grid, center, radius)
    vals = m.depth[ys, xs]
    delta = int(((vals == 0) & grid.cover[ys, xs]).sum())
    m.depth[ys, xs] = vals + 1
    return delta


def remove_router(m: CoverDepthMap, grid: RegionGrid, center: Cell, radius: int) -> int:
    """Decrement depth over the disk; return the count of required cells
    that lose their last coverage. Raises if any depth would underflow."""
    ys, xs = _disk_window(m, grid, center, radius)
    vals = m.depth[ys, xs]
    if (vals < 1).any():
        raise ValueError("depth underflow: map inconsistent with placement")
    delta = int(((vals == 1) & grid.cover[ys, xs]).sum())
    m.depth[ys, xs] = vals - 1
    return delta


def fitness(grid: RegionGrid, m: CoverDepthMap) -> int:
    """Count of required cells covered at least once."""
    return int(((m.depth > 0) & grid.cover).sum())


@dataclass(frozen=True)
class CoverageMetrics:
    required_covered: int
    required_total: int
    optional_covered: int
    optional_total: int
    required_pct: float
    optional_pct: float


def coverage_metrics(grid: RegionGrid, m: CoverDepthMap) -> CoverageMetrics:
    req_total = required_area(grid)
    if req_total <= 0:
        raise ValueError("grid has no required cells")
    covered = m.depth > 0
    req_cov = int((covered & grid.cover).sum())
    opt_total = grid.width * grid.height - req_total
    opt_cov = int((covered & ~grid.cover).sum())
    return CoverageMetrics(
        required_covered=req_cov,
        required_total=req_total,
        optional_covered=opt_cov,
        optional_total=opt_total,
        required_pct=100.0 * req_cov / req_total,
        optional_pct=100.0 * opt_cov / opt_total if opt_total else 0.0,
    )


def router_stats(grid: RegionGrid, m: CoverDepthMap, placement, router_index: int) -> dict:
    """Per-router removal statistics over its own disk.

    single_coverage:   required cells only this router covers (depth 1)
    optional_coverage: optional cells it covers at all
    over_coverage:     required cells it shares with other routers (depth >= 2)
    """
    if not (0 <= router_index < len(placement.centers)):
        raise IndexError(f"router index {router_index} out of range")
    center = placement.centers[router_index]
    ys, xs = _disk_window(m, grid, center, placement.radius)
    depth = m.depth[ys, xs]
    cover = grid.cover[ys, xs]
    return {
        "single_coverage": int(((depth == 1) & cover).sum()),
        "optional_coverage": int(((depth >= 1) & ~cover).sum()),
        "over_coverage": int(((depth >= 2) & cover).sum()),
    }


def nr_min(grid: RegionGrid, radius: int) -> int:
    """Lower bound on the router count: ceil(required_area / (r^2 * 3.14)).

    The 3.14 disk-area constant is deliberate and evaluated exactly as the
    rational 157/50 so boundary cases never fall to float rounding.
    """
    area = required_area(grid)
    if area <= 0:
        raise ValueError("grid has zero required area")
    denom = 157 * radius * radius
    return (50 * area + denom - 1) // denom


def nr_min_from_area(area: int, radius: int) -> int:
    # same ceiling without a grid, for oracle tables
    if area <= 0:
        raise ValueError("area must be positive")
    denom = 157 * radius * radius
    return (50 * area + denom - 1) // denom

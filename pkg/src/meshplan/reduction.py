"""Outer planning loop: optimize, record, remove one router, repeat.

Starting from the initial over-provisioned placement, the planner runs the
Metropolis walk, records the best state it saw, then removes one router by
the configured strategy and re-optimizes the survivors. The reduction
always continues down to the theoretical minimum count, even after
coverage or connectivity degrade, so the report can state where each
quality threshold was crossed.

Milestone labels over the recorded trace:

    nr_init   the starting row; its required coverage M is the reference
    nr_same   smallest count still at M
    nr_max_1  smallest count within 1 percentage point of M
    nr_max_2  smallest count within 2 percentage points of M
    nr_con    smallest count whose routers form one connected network
    nr_min    the final row at the theoretical minimum

Comparisons against M are done in exact integer arithmetic on covered-cell
counts, never on float percentages.
"""

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .connectivity import is_connected
from .coverage import (CoverDepthMap, coverage_metrics, nr_min, remove_router,
                       router_stats)
from .metropolis import (OptimizerConfig, Placement, initial_router_count,
                         initialize_placement, optimize)
from .region import Cell, RegionGrid

RNG_NAME = "numpy.random.default_rng (PCG64)"


@dataclass
class TraceRow:
    router_count: int
    all_connected: bool
    required_pct: float
    optional_pct: float
    required_covered: int
    centers: list[Cell]


@dataclass
class MilestoneRow:
    label: str
    router_count: int
    all_connected: bool
    required_pct: float
    optional_pct: float
    centers: list[Cell]


@dataclass
class RunReport:
    instance: str
    config: dict
    nr_min: int
    trace: list[TraceRow]
    milestones: list[MilestoneRow] = field(default_factory=list)
    duration_seconds: float = 0.0

    def milestone(self, label: str) -> MilestoneRow | None:
        for row in self.milestones:
            if row.label == label:
                return row
        return None

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "config": self.config,
            "nr_min": self.nr_min,
            "trace": [
                {"router_count": t.router_count,
                 "all_connected": t.all_connected,
                 "required_pct": t.required_pct,
                 "optional_pct": t.optional_pct}
                for t in self.trace
            ],
            "milestones": [
                {**asdict(m), "centers": [[c.x, c.y] for c in m.centers]}
                for m in self.milestones
            ],
            "duration_seconds": self.duration_seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


_STRATEGY_KEYS = {
    "min-single": ("single_coverage", min),
    "max-optional": ("optional_coverage", max),
    "max-over": ("over_coverage", max),
}


def select_router_to_remove(grid: RegionGrid, m: CoverDepthMap,
                            placement: Placement, strategy: str, rng) -> int:
    """Index of the router the strategy sacrifices next.

    min-single drops the router covering the fewest cells alone,
    max-optional the one wasting the most coverage on optional cells,
    max-over the one whose required cells are mostly covered twice anyway.
    Ties are broken uniformly at random; the draw happens only on a tie.
    """
    n = len(placement.centers)
    if n < 2:
        raise ValueError("need at least 2 routers to remove one")
    key, pick = _STRATEGY_KEYS[strategy]
    values = [router_stats(grid, m, placement, i)[key] for i in range(n)]
    extremal = pick(values)
    candidates = [i for i, v in enumerate(values) if v == extremal]
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


def _record(grid, m, placement) -> TraceRow:
    met = coverage_metrics(grid, m)
    return TraceRow(
        router_count=len(placement.centers),
        all_connected=is_connected(placement),
        required_pct=met.required_pct,
        optional_pct=met.optional_pct,
        required_covered=met.required_covered,
        centers=list(placement.centers),
    )


def plan(grid: RegionGrid, config: OptimizerConfig, instance: str = "region") -> RunReport:
    """Full reduction run; deterministic per (grid, config) including seed."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(config.seed)
    minimum = nr_min(grid, config.radius)
    count = initial_router_count(grid, config)

    placement = initialize_placement(grid, count, rng, config.radius)
    m = CoverDepthMap.from_placement(grid, placement)
    trace = []
    while True:
        result = optimize(grid, placement, m, config, rng)
        placement = result.best
        m = CoverDepthMap.from_placement(grid, placement)
        trace.append(_record(grid, m, placement))
        if len(placement.centers) <= minimum:
            break
        idx = select_router_to_remove(grid, m, placement, config.removal_strategy, rng)
        gone = placement.centers.pop(idx)
        remove_router(m, grid, gone, config.radius)

    report = RunReport(
        instance=instance,
        config={**asdict(config),
                "hop_distances": list(config.hop_distances),
                "rng": RNG_NAME},
        nr_min=minimum,
        trace=trace,
    )
    _derive_milestones(report, grid)
    report.duration_seconds = time.perf_counter() - t0
    return report


def _derive_milestones(report: RunReport, grid: RegionGrid):
    trace = report.trace
    first = trace[0]
    m_cov = first.required_covered
    req_total = int(grid.cover.sum())

    def smallest(pred):
        # counts descend along the trace; scan from the end
        for row in reversed(trace):
            if pred(row):
                return row
        return None

    rows = [("nr_init", first),
            ("nr_same", smallest(lambda r: r.required_covered == m_cov)),
            ("nr_max_1", smallest(lambda r: 100 * r.required_covered >= 100 * m_cov - req_total)),
            ("nr_max_2", smallest(lambda r: 100 * r.required_covered >= 100 * m_cov - 2 * req_total)),
            ("nr_con", smallest(lambda r: r.all_connected)),
            ("nr_min", trace[-1])]
    report.milestones = [
        MilestoneRow(label, r.router_count, r.all_connected,
                     r.required_pct, r.optional_pct, list(r.centers))
        for label, r in rows if r is not None
    ]


# Fig-style rendering: one pixel per EA
_COLORS = {
    "uncovered_required": (64, 64, 64),
    "uncovered_optional": (0, 0, 0),
    "depth1": (0, 0, 255),
    "depth2": (255, 0, 0),
    "depth3plus": (255, 255, 255),
    "center": (0, 255, 0),
}


def render_coverage(grid: RegionGrid, m: CoverDepthMap, placement: Placement) -> bytes:
    """Binary PPM (P6) snapshot of the depth map; router centers in green."""
    img = np.zeros((grid.height, grid.width, 3), dtype=np.uint8)
    d = m.depth
    img[(d == 0) & grid.cover] = _COLORS["uncovered_required"]
    img[(d == 0) & ~grid.cover] = _COLORS["uncovered_optional"]
    img[d == 1] = _COLORS["depth1"]
    img[d == 2] = _COLORS["depth2"]
    img[d >= 3] = _COLORS["depth3plus"]
    for c in placement.centers:
        img[c.y, c.x] = _COLORS["center"]
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + img.tobytes()

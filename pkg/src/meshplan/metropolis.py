"""Fixed-temperature Metropolis search over router placements.

One iteration: pick a random router, a random hop distance and one of the
8 compass directions, and try to move the router there. Moves that land
out of bounds or on a cell that is optional or prohibited are rejected
outright. A legal move is scored by the exact fitness delta of removing
the router at its old cell and adding it at the new one; improvements and
sideways moves are always kept, downhill moves survive with probability
exp(T * delta). The walk ends after num_iter iterations, or once stop
iterations pass without a new best fitness.

The acceptance threshold multiplies the temperature by the delta, so at
T=0.1 a move that loses 10 required cells survives with probability
exp(-1). Raising T makes the walk greedier, not looser.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .coverage import CoverDepthMap, add_router, fitness, nr_min, remove_router
from .region import Cell, RegionGrid

REMOVAL_STRATEGIES = ("min-single", "max-optional", "max-over")

# 8 compass directions, scaled per-axis by the hop distance
_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1),
               (1, 1), (1, -1), (-1, 1), (-1, -1))


def default_hops(radius: int) -> tuple[int, ...]:
    """Hop set r, r/2, r/4 rounded to the grid, never below one cell."""
    hops = [radius, max(1, round(radius / 2)), max(1, round(radius / 4))]
    return tuple(dict.fromkeys(hops))


@dataclass
class OptimizerConfig:
    temperature: float = 0.1
    num_iter: int = 4000
    stop: int = 500
    radius: int = 12
    init_factor: float = 1.5
    coverage_threshold: float | None = None
    seed: int = 0
    removal_strategy: str = "min-single"
    hop_distances: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be > 0")
        if self.num_iter < 1:
            raise ValueError("num_iter must be >= 1")
        if self.stop < 1:
            raise ValueError("stop must be >= 1")
        if self.radius < 1:
            raise ValueError("radius must be >= 1")
        if not (1.0 < self.init_factor <= 2.0):
            raise ValueError("init_factor must be in (1.0, 2.0]")
        if self.removal_strategy not in REMOVAL_STRATEGIES:
            raise ValueError(f"removal_strategy must be one of {REMOVAL_STRATEGIES}")
        if self.hop_distances is None:
            self.hop_distances = default_hops(self.radius)
        else:
            self.hop_distances = tuple(self.hop_distances)
            if any(h < 1 or h > self.radius for h in self.hop_distances):
                raise ValueError("hop distances must be in [1, radius]")


@dataclass
class Placement:
    radius: int
    centers: list[Cell]

    def copy(self) -> "Placement":
        return Placement(self.radius, list(self.centers))


@dataclass
class MoveProposal:
    router_index: int
    src: Cell
    dst: Cell
    delta: int | None = None


@dataclass
class OptimizeResult:
    final: Placement
    best: Placement
    final_fitness: int
    best_fitness: int
    fitness_trace: list[int] = field(default_factory=list)


def initial_router_count(grid: RegionGrid, config: OptimizerConfig) -> int:
    return math.ceil(config.init_factor * nr_min(grid, config.radius))


def initialize_placement(grid: RegionGrid, nr: int, rng, radius: int) -> Placement:
    """nr routers dropped uniformly on the legal cells (cover=1 and place=1).

    Sampling is with replacement; co-located routers are allowed and the
    depth map copes with the multiplicity.
    """
    legal = grid.legal_cells()
    if len(legal) == 0:
        raise ValueError("no legal router cells in grid")
    picks = rng.integers(0, len(legal), size=nr)
    centers = [Cell(int(legal[i][1]), int(legal[i][0])) for i in picks]
    return Placement(radius, centers)


def propose_move(placement: Placement, grid: RegionGrid, rng,
                 hop_distances) -> MoveProposal | None:
    """Draw one candidate move; None when the target is out of bounds or
    not a legal router cell. A rejection still consumes the iteration."""
    idx = int(rng.integers(len(placement.centers)))
    d = hop_distances[int(rng.integers(len(hop_distances)))]
    ux, uy = _DIRECTIONS[int(rng.integers(8))]
    src = placement.centers[idx]
    dst = Cell(src.x + ux * d, src.y + uy * d)
    if not grid.is_legal(dst):
        return None
    return MoveProposal(idx, src, dst)


def accept(delta: int, temperature: float, rng) -> bool:
    """Keep non-losing moves unconditionally; otherwise draw once against
    exp(temperature * delta)."""
    if delta >= 0:
        return True
    return rng.random() < math.exp(temperature * delta)


def optimize(grid: RegionGrid, placement: Placement, m: CoverDepthMap,
             config: OptimizerConfig, rng) -> OptimizeResult:
    """Run the Metropolis walk; returns both the final state and the best
    state seen. The depth map and placement are mutated in place and
    describe the final state on return."""
    r = placement.radius
    current = fitness(grid, m)
    best_fitness = current
    best_centers = list(placement.centers)
    trace = []
    remaining = config.num_iter
    patience = config.stop
    while remaining > 0 and patience > 0:
        remaining -= 1
        patience -= 1
        prop = propose_move(placement, grid, rng, config.hop_distances)
        if prop is not None:
            c_a = remove_router(m, grid, prop.src, r)
            c_b = add_router(m, grid, prop.dst, r)
            prop.delta = c_b - c_a
            if accept(prop.delta, config.temperature, rng):
                placement.centers[prop.router_index] = prop.dst
                current += prop.delta
                if current > best_fitness:
                    best_fitness = current
                    best_centers = list(placement.centers)
                    patience = config.stop
            else:
                # undo trial application, bit-exact
                remove_router(m, grid, prop.dst, r)
                add_router(m, grid, prop.src, r)
        trace.append(current)
    return OptimizeResult(
        final=placement,
        best=Placement(r, best_centers),
        final_fitness=current,
        best_fitness=best_fitness,
        fitness_trace=trace,
    )

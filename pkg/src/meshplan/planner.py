"""Estimator-style front end around the placement pipeline."""

import numbers

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .coverage import CoverDepthMap
from .metropolis import OptimizerConfig, Placement
from .reduction import plan
from .region import RegionGrid, parse_region


def as_region(X) -> RegionGrid:
    """Coerce fit input into a RegionGrid.

    Accepts a RegionGrid, EA-REGION v1 text, or a (cover, place) pair of
    equal-shape boolean matrices.
    """
    if isinstance(X, RegionGrid):
        return X
    if isinstance(X, str):
        return parse_region(X)
    if isinstance(X, (tuple, list)) and len(X) == 2:
        cover = np.asarray(X[0], dtype=bool)
        place = np.asarray(X[1], dtype=bool)
        if cover.ndim != 2 or cover.shape != place.shape:
            raise ValueError("cover and place must be equal-shape 2-d matrices")
        h, w = cover.shape
        grid = RegionGrid(w, h, cover.copy(), place.copy())
        if not (grid.cover & grid.place).any():
            raise ValueError("grid has no placeable required cell")
        return grid
    raise TypeError(f"cannot interpret {type(X).__name__} as a region")


class MeshRouterPlanner(BaseEstimator):
    """Plan near-minimal connected router placements for a grid region.

    fit() runs the full optimize-and-reduce pipeline on a region and keeps
    the placement at the selected milestone; predict() then reports which
    query cells that placement covers.

    Parameters
    ----------
    radius : int, default=12
        Router coverage radius in cell units.
    temperature : float, default=0.1
        Metropolis acceptance temperature (multiplies the fitness delta).
    num_iter : int, default=4000
        Iteration budget of each inner optimization.
    stop : int, default=500
        Patience: iterations without a new best fitness before bailing out.
    init_factor : float, default=1.5
        Initial router count as a multiple of the theoretical minimum.
    coverage_threshold : float or None, default=None
        Required-coverage percentage the kept placement must reach. None
        keeps the placement at the nr_max_2 milestone (within 2 points of
        the best coverage attained).
    removal_strategy : {"min-single", "max-optional", "max-over"}, default="min-single"
        Which router the reduction sacrifices at each step.
    hop_distances : tuple of int or None, default=None
        Move distances for the optimizer; None derives r, r/2, r/4.
    random_state : int or None, default=None
        Seed for the single RNG stream driving the whole run. None draws
        a fresh seed; the seed actually used is echoed in report_.config.

    Attributes
    ----------
    report_ : RunReport
        Full trace and milestone table of the run.
    nr_min_ : int
        Theoretical minimum router count for the region.
    placement_ : Placement
        Selected placement (see coverage_threshold).
    n_routers_ : int
        len(placement_.centers).
    milestones_ : dict
        Label -> MilestoneRow for every milestone the run produced.
    """

    def __init__(self, radius=12, temperature=0.1, num_iter=4000, stop=500,
                 init_factor=1.5, coverage_threshold=None,
                 removal_strategy="min-single", hop_distances=None,
                 random_state=None):
        self.radius = radius
        self.temperature = temperature
        self.num_iter = num_iter
        self.stop = stop
        self.init_factor = init_factor
        self.coverage_threshold = coverage_threshold
        self.removal_strategy = removal_strategy
        self.hop_distances = hop_distances
        self.random_state = random_state

    def _config(self) -> OptimizerConfig:
        if self.random_state is None:
            seed = int(np.random.SeedSequence().entropy % (2 ** 63))
        elif isinstance(self.random_state, numbers.Integral):
            seed = int(self.random_state)
        else:
            raise ValueError("random_state must be an int or None")
        return OptimizerConfig(
            temperature=self.temperature,
            num_iter=self.num_iter,
            stop=self.stop,
            radius=self.radius,
            init_factor=self.init_factor,
            coverage_threshold=self.coverage_threshold,
            seed=seed,
            removal_strategy=self.removal_strategy,
            hop_distances=self.hop_distances,
        )

    def fit(self, X, y=None):
        """Run the pipeline on a region (RegionGrid, EA-REGION text, or
        (cover, place) matrix pair). y is ignored."""
        grid = as_region(X)
        report = plan(grid, self._config())
        self.grid_ = grid
        self.report_ = report
        self.nr_min_ = report.nr_min
        self.milestones_ = {m.label: m for m in report.milestones}
        selected = self._select_row(report)
        self.placement_ = Placement(self.radius, list(selected.centers))
        self.n_routers_ = len(self.placement_.centers)
        self.depth_map_ = CoverDepthMap.from_placement(grid, self.placement_)
        return self

    def _select_row(self, report):
        if self.coverage_threshold is None:
            return self.milestones_["nr_max_2"]
        # smallest count meeting the threshold; fall back to the best row
        for row in reversed(report.trace):
            if row.required_pct >= self.coverage_threshold:
                return row
        return report.trace[0]

    def predict(self, X):
        """Boolean coverage for query cells.

        X is an (n, 2) array of [x, y] cell coordinates; returns True where
        the fitted placement covers the cell at least once.
        """
        check_is_fitted(self, "placement_")
        pts = np.asarray(X, dtype=int)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("expected an (n, 2) array of [x, y] coordinates")
        xs, ys = pts[:, 0], pts[:, 1]
        if (xs < 0).any() or (xs >= self.grid_.width).any() \
                or (ys < 0).any() or (ys >= self.grid_.height).any():
            raise ValueError("query cell out of grid bounds")
        return self.depth_map_.depth[ys, xs] > 0

"""Persistence of heavy-tailed sample averages.

Tools for the probability that a random walk's running average stays
inside a convex set avoiding the origin: the radial program giving the
decay exponent, reproducible samplers for regularly varying steps,
splitting and direct Monte Carlo estimators, the staircase description
of the cheapest surviving path, and numerical audits of the supporting
constructive estimates.
"""

from .engine import (
    DirectMCResult,
    ExponentFit,
    LevelSchedule,
    SplittingResult,
    WindowedResult,
    direct_mc,
    exponent_fit,
    level_passage_slope,
    make_schedule,
    splitting_estimate,
    windowed_persistence,
)
from .errors import ConfigError, EstimationError, HypothesisError
from .geometry import (
    Ball,
    ConvexBody,
    ExponentReport,
    Polytope,
    box,
    exponent_report,
    interval,
    nonstandard_exponent,
    persistence_exponent,
    projection_exponent_bound,
    projection_interval,
    r_star,
    scaled_gap_ratio,
    set_distance,
)
from .rng import derive_rng, derive_seed_sequence
from .sampler import (
    HillEstimate,
    RVModel,
    SampleBatch,
    directed_tail_constant,
    hill_tail_index,
    multivariate_model,
    one_dim_model,
    product_model,
    sample,
    sample_batch,
    truncated_second_moment,
)
from .skeleton import (
    OptimalPathSkeleton,
    build_skeleton,
    cost_heuristic,
    height_at,
    skeleton_as_measure,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "ConfigError",
    "ConvexBody",
    "DirectMCResult",
    "EstimationError",
    "ExponentFit",
    "ExponentReport",
    "HillEstimate",
    "HypothesisError",
    "LevelSchedule",
    "OptimalPathSkeleton",
    "Polytope",
    "RVModel",
    "SampleBatch",
    "SplittingResult",
    "WindowedResult",
    "box",
    "build_skeleton",
    "cost_heuristic",
    "derive_rng",
    "derive_seed_sequence",
    "direct_mc",
    "directed_tail_constant",
    "exponent_fit",
    "exponent_report",
    "height_at",
    "hill_tail_index",
    "interval",
    "level_passage_slope",
    "make_schedule",
    "multivariate_model",
    "nonstandard_exponent",
    "one_dim_model",
    "persistence_exponent",
    "product_model",
    "projection_exponent_bound",
    "projection_interval",
    "r_star",
    "sample",
    "sample_batch",
    "scaled_gap_ratio",
    "set_distance",
    "skeleton_as_measure",
    "splitting_estimate",
    "truncated_second_moment",
    "windowed_persistence",
    "__version__",
]

"""stablevar: stable Levy noise simulation and stability-index estimation
from compensated p-variation statistics."""

from stablevar.stable_law import RandomStream, StableParams, abs_moment, sample_stable, sin_moment
from stablevar.path_sim import DriftSpec, PathSample, add_perturbation, simulate_levy, simulate_sde
from stablevar.pvariation import VariationSeries, compensated_terminal, compensator, pvariation
from stablevar.limit_law import LimitScale, limit_scale, ref_cdf_half_stable, sample_limit
from stablevar.estimator import (
    BlockedSeries,
    EstimationResult,
    KSSurface,
    block_split,
    block_statistics,
    empirical_cdf,
    estimate,
    ks_distance,
    ks_surface,
)

__all__ = [
    "RandomStream",
    "StableParams",
    "sample_stable",
    "abs_moment",
    "sin_moment",
    "PathSample",
    "DriftSpec",
    "simulate_levy",
    "simulate_sde",
    "add_perturbation",
    "VariationSeries",
    "pvariation",
    "compensator",
    "compensated_terminal",
    "LimitScale",
    "limit_scale",
    "ref_cdf_half_stable",
    "sample_limit",
    "BlockedSeries",
    "KSSurface",
    "EstimationResult",
    "block_split",
    "block_statistics",
    "empirical_cdf",
    "ks_distance",
    "ks_surface",
    "estimate",
]

__version__ = "0.1.0"

"""Limit objects of the p-variation convergence: the scale transfer
C' = C'(C, alpha, p) and the half-stable subordinator reference law."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gamma as gamma_fn

from stablevar.stable_law import RandomStream, StableParams, sample_stable


@dataclass(frozen=True)
class LimitScale:
    """Scale and index of the limiting stable law S_{alpha/p}(C', 1, 0)."""

    c_prime: float
    alpha_over_p: float

    def __post_init__(self):
        if not self.c_prime > 0.0:
            raise ValueError("c_prime must be positive")
        if not 0.0 < self.alpha_over_p < 2.0:
            raise ValueError("alpha_over_p must be in (0, 2)")


def _cos_gamma(z: float) -> float:
    """cos(pi z / 2) * Gamma(1 - z) for z in (0, 2).

    Both factors diverge at z = 1 but the product is finite; the reflection
    formula gives the everywhere-regular form pi / (2 sin(pi z / 2) Gamma(z)).
    """
    if not 0.0 < z < 2.0:
        raise ValueError(f"argument must be in (0, 2), got {z}")
    return math.pi / (2.0 * math.sin(math.pi * z / 2.0) * gamma_fn(z))


def limit_scale(params: StableParams, p: float) -> LimitScale:
    """Scale of the limiting law:

        C' = C^p ( cos(pi alpha / 2p) Gamma(1 - alpha/p)
                   / (cos(pi alpha / 2) Gamma(1 - alpha)) )^{p/alpha},

    with C' = C at alpha = p. The removable singularities at alpha = 1 and
    alpha/p = 1 are evaluated through the regularized composite."""
    a, c = params.alpha, params.scale_C
    if p <= a / 2.0:
        raise ValueError(f"limit_scale requires p > alpha/2, got p={p}, alpha={a}")
    if p == a:
        return LimitScale(c, 1.0)
    if a >= 2.0:
        raise ValueError("limit_scale is undefined at the Gaussian boundary alpha=2")
    ratio = _cos_gamma(a / p) / _cos_gamma(a)
    return LimitScale(c**p * ratio ** (p / a), a / p)


def ref_cdf_half_stable(c_prime: float, x) -> float | np.ndarray:
    """CDF of the half-stable subordinator S_{1/2}(c', 1, 0), i.e. the Levy
    distribution with scale c': F(x) = erfc(sqrt(c' / (2x))) for x > 0."""
    if not c_prime > 0.0:
        raise ValueError("c_prime must be positive")
    scalar = np.isscalar(x)
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xv)
    pos = xv > 0.0
    out[pos] = erfc(np.sqrt(c_prime / (2.0 * xv[pos])))
    if scalar:
        return float(out[0])
    return out


def sample_limit(scale: LimitScale, stream: RandomStream, size=None):
    """Draws from the limiting law S_{alpha/p}(C', 1, 0)."""
    params = StableParams(scale.alpha_over_p, scale.c_prime, 1.0)
    return sample_stable(params, stream, size=size)

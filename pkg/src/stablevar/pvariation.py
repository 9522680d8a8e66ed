"""Equidistant p-variation V_p^n(X)_t and its compensated version."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from stablevar.path_sim import PathSample
from stablevar.stable_law import StableParams, abs_moment, sin_moment


def abs_powers(increments: np.ndarray, p: float) -> np.ndarray:
    """|x|^p elementwise as exp(p log|x|), with an exact-zero shortcut."""
    x = np.abs(np.asarray(increments, dtype=float))
    out = np.zeros_like(x)
    nz = x > 0.0
    out[nz] = np.exp(p * np.log(x[nz]))
    return out


@dataclass(frozen=True)
class VariationSeries:
    """The step process V_p^n(X)_{k/n}: non-decreasing partial sums of
    |increment|^p, plus the per-step compensator B_n(alpha, p) when set."""

    n: int
    p: float
    raw: np.ndarray
    compensator_per_step: float = 0.0

    def terminal(self) -> float:
        return float(self.raw[-1])

    def compensated(self) -> np.ndarray:
        return self.raw - self.compensator_per_step * np.arange(len(self.raw))


def pvariation(path: PathSample, p: float) -> VariationSeries:
    """V_p^n(X)_{k/n} = sum_{i<=k} |X_{i/n} - X_{(i-1)/n}|^p for k = 0..floor(nT)."""
    if p <= 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if len(path.values) < 2:
        raise ValueError("path must have at least 2 points")
    powers = abs_powers(path.increments(), p)
    raw = np.empty(len(powers) + 1)
    raw[0] = 0.0
    np.cumsum(powers, out=raw[1:])
    return VariationSeries(path.n, p, raw)


def terminal_pvariation(increments: np.ndarray, p: float) -> float:
    """Terminal value sum |increment_i|^p with pairwise summation."""
    if p <= 0.0:
        raise ValueError(f"p must be positive, got {p}")
    return float(np.sum(abs_powers(increments, p)))


def compensator(params: StableParams, p: float, n: int) -> float:
    """The centering sequence B_n(alpha, p):

        n^{-p/alpha} E|L_1|^p        for p in (alpha/2, alpha),
        E sin(n^{-1} |L_1|^alpha)    for p = alpha,
        0                            for p > alpha.

    Only defined for p > alpha/2."""
    a = params.alpha
    if p <= a / 2.0:
        raise ValueError(f"compensator requires p > alpha/2, got p={p}, alpha={a}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if p > a:
        return 0.0
    if p == a:
        return sin_moment(params, n)
    return n ** (-p / a) * abs_moment(params, p)


def compensated_terminal(path: PathSample, p: float, params: StableParams) -> float:
    """V_p^n(X)_T - floor(nT) * B_n(alpha, p)."""
    b = compensator(params, p, path.n)
    k_max = int(math.floor(path.n * path.horizon_T))
    return terminal_pvariation(path.increments(), p) - k_max * b

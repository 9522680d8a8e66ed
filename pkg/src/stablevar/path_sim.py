"""Uniform-grid sample paths: stable Levy paths, additive perturbations, and
Euler schemes for X_t = x + int_0^t f(s, X_s) ds + L_t."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from stablevar.stable_law import RandomStream, StableParams, sample_stable


@dataclass(frozen=True)
class PathSample:
    """A path observed on the uniform grid {k/n}, k = 0..floor(n*T)."""

    n: int
    horizon_T: float
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.horizon_T <= 0:
            raise ValueError("horizon_T must be positive")
        expected = int(math.floor(self.n * self.horizon_T)) + 1
        if len(self.values) != expected:
            raise ValueError(
                f"values has length {len(self.values)}, expected {expected}"
            )

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) / self.n

    def increments(self) -> np.ndarray:
        return np.diff(self.values)

    def restrict(self, n_coarse: int) -> "PathSample":
        """Restriction to the coarser grid of spacing 1/n_coarse."""
        if self.n % n_coarse != 0:
            raise ValueError(f"n={self.n} is not a multiple of n_coarse={n_coarse}")
        step = self.n // n_coarse
        k_max = int(math.floor(n_coarse * self.horizon_T))
        idx = np.arange(k_max + 1) * step
        return PathSample(n_coarse, self.horizon_T, self.values[idx])


@dataclass(frozen=True)
class DriftSpec:
    """Drift f(s, x) of the SDE. kind 'zero' keeps the pure-Levy reduction
    exact; 'cosine' is f(s, x) = cos(x); 'custom' wraps any callable."""

    kind: str = "zero"
    func: Optional[Callable[[float, np.ndarray], np.ndarray]] = field(default=None)

    def __post_init__(self):
        if self.kind not in ("zero", "cosine", "custom"):
            raise ValueError(f"unknown drift kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom drift requires a callable")

    def __call__(self, s: float, x):
        if self.kind == "zero":
            return np.zeros_like(np.asarray(x, dtype=float))
        if self.kind == "cosine":
            return np.cos(x)
        return self.func(s, x)


def simulate_levy(params: StableParams, n: int, T: float, stream: RandomStream) -> PathSample:
    """Stable Levy path on the grid {k/n}: cumulative sums of i.i.d. increments
    distributed as n^{-1/alpha} scalings of S_alpha(C, beta, 0) (exact in law
    by self-similarity; at alpha = 1 the deterministic log-drift correction
    keeps the grid law exact for beta != 0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if T <= 0:
        raise ValueError("T must be positive")
    k_max = int(math.floor(n * T))
    xi = sample_stable(params, stream, size=k_max) * n ** (-1.0 / params.alpha)
    if abs(params.alpha - 1.0) < 1e-12 and params.beta != 0.0:
        xi = xi - (2.0 / math.pi) * params.beta * params.scale_C * math.log(n) / n
    values = np.empty(k_max + 1)
    values[0] = 0.0
    np.cumsum(xi, out=values[1:])
    return PathSample(n, T, values)


def simulate_sde(
    x0: float,
    drift: DriftSpec,
    params: StableParams,
    n_fine: int,
    n_obs: int,
    T: float,
    stream: RandomStream,
) -> PathSample:
    """Explicit Euler for X_t = x0 + int f(s, X_s) ds + L_t on the fine grid,
    restricted to the observation grid of spacing 1/n_obs.

    With drift 'zero' and x0 = 0 the output is bitwise identical to
    simulate_levy(params, n_fine, T, stream).restrict(n_obs)."""
    if n_obs < 1:
        raise ValueError("n_obs must be >= 1")
    if n_fine % n_obs != 0:
        raise ValueError(f"n_fine={n_fine} is not a multiple of n_obs={n_obs}")
    levy = simulate_levy(params, n_fine, T, stream)
    dL = levy.increments()
    h = 1.0 / n_fine
    values = np.empty(len(levy.values))
    values[0] = x0
    x = x0
    for k in range(len(dL)):
        x = x + float(drift(k * h, x)) * h + dL[k]
        values[k + 1] = x
    return PathSample(n_fine, T, values).restrict(n_obs)


def simulate_sde_batch(
    x0: float,
    drift: DriftSpec,
    params: StableParams,
    n_fine: int,
    n_obs: int,
    T: float,
    streams: list[RandomStream],
) -> np.ndarray:
    """Euler paths for many independent streams at once, vectorized across
    paths (one time loop, ndarray state). Returns an (m, floor(n_obs*T)+1)
    array of coarse-grid values; row i is stream i's path."""
    if n_fine % n_obs != 0:
        raise ValueError(f"n_fine={n_fine} is not a multiple of n_obs={n_obs}")
    m = len(streams)
    k_max = int(math.floor(n_fine * T))
    scale = n_fine ** (-1.0 / params.alpha)
    dL = np.empty((m, k_max))
    for i, s in enumerate(streams):
        dL[i] = sample_stable(params, s, size=k_max) * scale
    if abs(params.alpha - 1.0) < 1e-12 and params.beta != 0.0:
        dL -= (2.0 / math.pi) * params.beta * params.scale_C * math.log(n_fine) / n_fine
    h = 1.0 / n_fine
    step = n_fine // n_obs
    out = np.empty((m, int(math.floor(n_obs * T)) + 1))
    x = np.full(m, float(x0))
    out[:, 0] = x
    for k in range(k_max):
        x = x + drift(k * h, x) * h + dL[:, k]
        if (k + 1) % step == 0:
            out[:, (k + 1) // step] = x
    return out


def add_perturbation(base: PathSample, y) -> PathSample:
    """Pointwise sum X = base + Y on the grid of base. y may be a callable
    t -> Y_t or an array aligned with base.values."""
    if callable(y):
        yv = np.asarray([y(t) for t in base.times], dtype=float)
    else:
        yv = np.asarray(y, dtype=float)
        if yv.shape != base.values.shape:
            raise ValueError("perturbation array does not match the grid")
    return PathSample(base.n, base.horizon_T, base.values + yv)

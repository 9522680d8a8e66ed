import math

import numpy as np
import pytest
from scipy.stats import ks_2samp, kstest, norm

from stablevar.path_sim import DriftSpec, PathSample, add_perturbation, simulate_levy, simulate_sde, simulate_sde_batch
from stablevar.pvariation import terminal_pvariation
from stablevar.stable_law import RandomStream, StableParams

P075 = StableParams(0.75, 6.35)
P2 = StableParams(2.0, 1.0)


class TestSimulateLevy:
    def test_grid_shape(self):
        path = simulate_levy(P075, 4, 1.0, RandomStream(0))
        assert len(path.values) == 5
        assert path.values[0] == 0.0
        np.testing.assert_allclose(path.times, [0, 0.25, 0.5, 0.75, 1.0])

    def test_gaussian_increments(self):
        path = simulate_levy(P2, 100_000, 1.0, RandomStream(1))
        res = kstest(path.increments(), norm(scale=math.sqrt(2.0 / 100_000)).cdf)
        assert res.pvalue > 0.01

    def test_determinism(self):
        a = simulate_levy(P075, 100, 2.0, RandomStream(2, 5))
        b = simulate_levy(P075, 100, 2.0, RandomStream(2, 5))
        np.testing.assert_array_equal(a.values, b.values)

    def test_increment_stationarity(self):
        inc = simulate_levy(P075, 100_000, 1.0, RandomStream(3)).increments()
        half = len(inc) // 2
        assert ks_2samp(inc[:half], inc[half:]).pvalue > 0.01

    def test_pvariation_grows_linearly_in_horizon(self):
        # median across paths of V_{1.5} at T=1..8 should rise roughly linearly
        horizons = np.arange(1, 9)
        med = np.empty(len(horizons))
        stats = np.empty((60, len(horizons)))
        for i in range(60):
            path = simulate_levy(P075, 500, 8.0, RandomStream(4, i))
            inc = path.increments()
            for j, T in enumerate(horizons):
                stats[i, j] = terminal_pvariation(inc[: 500 * T], 1.5)
        med = np.median(stats, axis=0)
        assert np.all(np.isfinite(med))
        assert np.all(np.diff(med) > 0)
        slope, intercept = np.polyfit(horizons, med, 1)
        fit = slope * horizons + intercept
        assert np.max(np.abs(med - fit)) / med[-1] < 0.15


class TestSimulateSde:
    def test_zero_drift_bitwise_reduction(self):
        stream = RandomStream(5)
        sde = simulate_sde(0.0, DriftSpec("zero"), P075, 1600, 100, 1.0, stream)
        levy = simulate_levy(P075, 1600, 1.0, stream).restrict(100)
        np.testing.assert_array_equal(sde.values, levy.values)

    def test_rejects_incompatible_grids(self):
        with pytest.raises(ValueError):
            simulate_sde(0.0, DriftSpec("zero"), P075, 150, 100, 1.0, RandomStream(6))

    def test_bounded_drift_pointwise_bound(self):
        # |f| <= K implies |X - (x0 + L)| <= K*T on the grid
        K = 0.7
        drift = DriftSpec("custom", func=lambda s, x: K * np.cos(3.0 * x))
        stream = RandomStream(7)
        sde = simulate_sde(1.0, drift, P075, 800, 100, 2.0, stream)
        levy = simulate_levy(P075, 800, 2.0, stream).restrict(100)
        assert np.max(np.abs(sde.values - (1.0 + levy.values))) <= K * 2.0 + 1e-12

    def test_batch_matches_scalar_path(self):
        streams = [RandomStream(8, i) for i in range(3)]
        batch = simulate_sde_batch(0.5, DriftSpec("cosine"), P075, 400, 100, 1.0, streams)
        for i, s in enumerate(streams):
            single = simulate_sde(0.5, DriftSpec("cosine"), P075, 400, 100, 1.0, s)
            np.testing.assert_allclose(batch[i], single.values, rtol=1e-12, atol=1e-12)

    def test_refinement_consistency_in_law(self):
        # doubling the fine grid leaves the coarse-grid terminal law unchanged
        streams_a = [RandomStream(9, i) for i in range(1000)]
        streams_b = [RandomStream(10, i) for i in range(1000)]
        a = simulate_sde_batch(0.0, DriftSpec("cosine"), P075, 400, 100, 1.0, streams_a)
        b = simulate_sde_batch(0.0, DriftSpec("cosine"), P075, 800, 100, 1.0, streams_b)
        assert ks_2samp(a[:, -1], b[:, -1]).pvalue > 0.01


class TestAddPerturbation:
    def test_zero_identity(self):
        base = simulate_levy(P075, 50, 1.0, RandomStream(11))
        out = add_perturbation(base, lambda t: 0.0)
        np.testing.assert_array_equal(out.values, base.values)

    def test_linear_shifts_increments(self):
        K = 2.5
        base = simulate_levy(P075, 50, 1.0, RandomStream(12))
        out = add_perturbation(base, lambda t: K * t)
        np.testing.assert_allclose(out.increments() - base.increments(), K / 50.0, rtol=1e-9)

    def test_array_mismatch_rejected(self):
        base = simulate_levy(P075, 50, 1.0, RandomStream(13))
        with pytest.raises(ValueError):
            add_perturbation(base, np.zeros(7))

    def test_lipschitz_perturbation_same_limit_law(self):
        # V_p statistics of L and L + sin(t) agree in law (m=500 blocks)
        params, p, n, m = StableParams(1.5, 1.0), 1.2, 1000, 500
        from stablevar.scenarios import levy_statistic_sample, two_sample_ks, ks_threshold

        base = levy_statistic_sample(params, p, n, m, seed=14, compensate=True)
        pert = levy_statistic_sample(
            params, p, n, m, seed=15, compensate=True, perturbation=math.sin
        )
        assert two_sample_ks(base, pert) < ks_threshold(m, coeff=1.63)  # level ~0.01


class TestPathSample:
    def test_length_validation(self):
        with pytest.raises(ValueError):
            PathSample(10, 1.0, np.zeros(5))

    def test_restrict_requires_divisor(self):
        path = simulate_levy(P075, 12, 1.0, RandomStream(16))
        with pytest.raises(ValueError):
            path.restrict(5)

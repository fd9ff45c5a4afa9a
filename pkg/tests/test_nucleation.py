import math

import numpy as np
import pytest

from skysum import (
    InsufficientData,
    NucleationEvent,
    SingularFit,
    StochasticModel,
    analytic_sigma,
    estimate_pbar_from_trace,
    expected_cumulative,
    fit_weight,
    monte_carlo_sigma,
    sample_pulse_count,
    sample_pulse_counts,
    simulate_cumulative,
    stream,
)


class TestStochasticModel:
    def test_bounds(self):
        StochasticModel(0.0)
        StochasticModel(1.0)
        with pytest.raises(ValueError):
            StochasticModel(-0.1)
        with pytest.raises(ValueError):
            StochasticModel(1.1)

    def test_even_split(self):
        assert StochasticModel(0.4).deviation_probabilities() == (0.2, 0.2)

    def test_uneven_split_not_modeled(self):
        with pytest.raises(NotImplementedError):
            StochasticModel(0.4, split_even=False).deviation_probabilities()


class TestSamplePulseCount:
    def test_deterministic_unit_weight(self):
        model = StochasticModel(0.0)
        g = stream(0, "t")
        assert all(sample_pulse_count(1.0, model, g) == 1 for _ in range(200))

    def test_zero_weight_creates_nothing(self):
        model = StochasticModel(0.9)
        counts = sample_pulse_counts(0.0, model, stream(1, "z"), (5000,))
        assert not counts.any()

    def test_unit_weight_distribution(self):
        # p_bar = 0.4 gives {0: 0.2, 1: 0.6, 2: 0.2}.
        model = StochasticModel(0.4)
        counts = sample_pulse_counts(1.0, model, stream(2, "d"), (200_000,))
        freqs = np.bincount(counts, minlength=3) / counts.size
        assert set(np.unique(counts)) <= {0, 1, 2}
        assert freqs[0] == pytest.approx(0.2, abs=0.01)
        assert freqs[1] == pytest.approx(0.6, abs=0.01)
        assert freqs[2] == pytest.approx(0.2, abs=0.01)

    def test_fractional_weight_mean(self):
        # w = 2.5, no deviations: half 2s, half 3s, mean 2.5.
        model = StochasticModel(0.0)
        counts = sample_pulse_counts(2.5, model, stream(3, "f"), (1_000_000,))
        assert set(np.unique(counts)) == {2, 3}
        se = 0.5 / math.sqrt(counts.size)
        assert counts.mean() == pytest.approx(2.5, abs=3 * se)

    def test_unit_weight_mean_is_exact_in_expectation(self):
        model = StochasticModel(0.6)
        counts = sample_pulse_counts(1.0, model, stream(4, "m"), (500_000,))
        se = counts.std() / math.sqrt(counts.size)
        assert counts.mean() == pytest.approx(1.0, abs=3 * se)

    def test_support_window(self):
        # Support stays within {b-1 .. b+2} of the nominal count.
        model = StochasticModel(1.0)
        counts = sample_pulse_counts(3.42, model, stream(5, "s"), (100_000,))
        assert counts.min() >= 2 and counts.max() <= 5

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            sample_pulse_count(-0.1, StochasticModel(0.0), stream(0, "n"))


class TestSigma:
    def test_analytic_values(self):
        assert analytic_sigma(StochasticModel(0.0), 50) == 0.0
        assert analytic_sigma(StochasticModel(0.4), 100) == pytest.approx(
            math.sqrt(0.4 / 100), rel=1e-12)
        assert analytic_sigma(StochasticModel(0.4), 100) == pytest.approx(
            0.0632, abs=1e-4)
        assert analytic_sigma(StochasticModel(0.4), 10) == pytest.approx(
            0.2, rel=1e-12)

    def test_analytic_requires_pulses(self):
        with pytest.raises(ValueError):
            analytic_sigma(StochasticModel(0.4), 0)

    def test_monte_carlo_deterministic_limit(self):
        assert monte_carlo_sigma(StochasticModel(0.0), 50, 10_000, seed=0) == 0.0

    def test_monte_carlo_matches_analytic(self):
        got = monte_carlo_sigma(StochasticModel(0.4), 100, 100_000, seed=7)
        assert got == pytest.approx(0.0632, abs=1e-3)

    def test_monte_carlo_all_deviation(self):
        got = monte_carlo_sigma(StochasticModel(1.0), 4, 100_000, seed=8)
        assert got == pytest.approx(0.5, abs=0.01)

    def test_monte_carlo_reproducible(self):
        a = monte_carlo_sigma(StochasticModel(0.3), 20, 5000, seed=11)
        b = monte_carlo_sigma(StochasticModel(0.3), 20, 5000, seed=11)
        assert a == b

    def test_monte_carlo_needs_trials(self):
        with pytest.raises(ValueError):
            monte_carlo_sigma(StochasticModel(0.3), 20, 500, seed=0)


class TestPbarEstimator:
    def test_clean_trace(self):
        assert estimate_pbar_from_trace([1] * 10) == 0.0

    def test_documented_trace(self):
        counts = [0, 1, 2, 1, 1, 1, 2, 0, 1, 1]
        assert estimate_pbar_from_trace(counts) == pytest.approx(0.4)

    def test_accepts_events(self):
        events = [NucleationEvent(i, c) for i, c in
                  enumerate([0, 1, 2, 1, 1, 1, 2, 0, 1, 1])]
        assert estimate_pbar_from_trace(events) == pytest.approx(0.4)

    def test_round_trip(self):
        model = StochasticModel(0.4)
        counts = sample_pulse_counts(1.0, model, stream(9, "rt"), (10_000,))
        assert estimate_pbar_from_trace(counts) == pytest.approx(0.4, abs=0.01)

    def test_too_few_events(self):
        with pytest.raises(InsufficientData):
            estimate_pbar_from_trace([1, 1, 1, 1])
        with pytest.raises(InsufficientData):
            estimate_pbar_from_trace([])

    def test_only_unit_weight(self):
        with pytest.raises(ValueError):
            estimate_pbar_from_trace([1] * 10, w_nominal=2.0)


class TestFitWeight:
    def test_exact_line(self):
        fit = fit_weight([(0, 0), (10, 10), (20, 20)])
        assert fit.slope == pytest.approx(1.0, abs=1e-12)
        assert fit.intercept == pytest.approx(0.0, abs=1e-12)
        assert fit.slope_std == pytest.approx(0.0, abs=1e-12)

    def test_noise_free_cumulative_recovers_weight(self):
        w = 3.42
        cum = expected_cumulative(w, 20)
        pts = list(zip(range(21), cum))
        fit = fit_weight(pts)
        assert fit.slope == pytest.approx(w, abs=1e-9)
        # consistent with tens of skyrmions in 20 pulses at the floor field
        assert cum[-1] == pytest.approx(68.4) and cum[-1] > 50

    def test_stochastic_slope_within_sigma_bound(self):
        model = StochasticModel(0.4)
        cum = simulate_cumulative(1.0, model, 20, stream(12, "fit"))
        fit = fit_weight(list(zip(range(21), cum)))
        assert abs(fit.slope - 1.0) <= math.sqrt(0.4 / 20) + 3 * fit.slope_std

    def test_needs_three_points(self):
        with pytest.raises(InsufficientData):
            fit_weight([(0, 0), (20, 68)])

    def test_singular(self):
        with pytest.raises(SingularFit):
            fit_weight([(5, 1), (5, 2), (5, 3)])

    def test_non_monotone_rejected(self):
        with pytest.raises(ValueError):
            fit_weight([(0, 0), (2, 2), (1, 1)])

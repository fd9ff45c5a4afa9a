"""Stochastic per-pulse skyrmion generation and its fluctuation law.

A pulse at weight ``w`` nominally creates ``floor(w)`` skyrmions plus one
more with probability ``frac(w)``.  Thermal stochasticity then perturbs the
count by +/-1 with total probability ``p_bar`` (split evenly), and the
result clamps at zero.  At the unit operating point this reproduces the
observed outcome set {0, 1, 2} and the relative deviation of the
accumulated count follows ``sigma = sqrt(p_bar / n_pulse)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InsufficientData, SingularFit
from .rng import stream

#: Trials per derived stream in blocked Monte Carlo loops.  Trial t lives in
#: block t // MC_BLOCK, so any parallel split at block boundaries reproduces
#: the sequential result bit for bit.
MC_BLOCK = 8192


@dataclass(frozen=True)
class StochasticModel:
    """Per-pulse count fluctuation model.

    p_bar       probability that a pulse's count deviates from its nominal
                value
    split_even  deviations split equally between -1 and +1 (the only split
                modeled; kept explicit because the even split is what makes
                the sqrt(p_bar/N) law exact)
    """

    p_bar: float
    split_even: bool = True

    def __post_init__(self):
        if not 0.0 <= self.p_bar <= 1.0:
            raise ValueError("p_bar must lie in [0, 1]")

    def deviation_probabilities(self) -> tuple[float, float]:
        """(p(-1), p(+1)) for one pulse."""
        if not self.split_even:
            raise NotImplementedError("only the even deviation split is modeled")
        return self.p_bar / 2.0, self.p_bar / 2.0


@dataclass(frozen=True)
class NucleationEvent:
    """Outcome of one pulse: ``count`` skyrmions created."""

    pulse_index: int
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be >= 0")


def sample_pulse_counts(w: float, model: StochasticModel,
                        rng: np.random.Generator, shape,
                        dtype=np.float64) -> np.ndarray:
    """Vectorised per-pulse counts of the given shape.

    At exactly zero weight a pulse nucleates nothing: the device is at its
    cutoff field and there is no attempt for the thermal fluctuation to
    act on.  ``dtype`` selects the uniform-draw precision; float32 halves
    the memory traffic for large Monte Carlo sweeps without visible bias
    at the tolerances used here.
    """
    if w < 0:
        raise ValueError("weight must be >= 0")
    if w == 0:
        return np.zeros(shape, dtype=np.int64)
    base = math.floor(w)
    frac = w - base
    counts = np.full(shape, base, dtype=np.int64)
    if frac > 0:
        counts += rng.random(shape, dtype=dtype) < frac
    p_minus, p_plus = model.deviation_probabilities()
    if p_minus + p_plus > 0:
        u = rng.random(shape, dtype=dtype)
        counts += (u >= 1.0 - p_plus).astype(np.int64)
        counts -= u < p_minus
    np.maximum(counts, 0, out=counts)
    return counts


def sample_pulse_count(w: float, model: StochasticModel,
                       rng: np.random.Generator) -> int:
    """Number of skyrmions created by a single pulse at weight ``w``."""
    return int(sample_pulse_counts(w, model, rng, ()))


def simulate_cumulative(w: float, model: StochasticModel, n_pulses: int,
                        rng: np.random.Generator) -> np.ndarray:
    """Cumulative skyrmion count after 0..n_pulses pulses (length n+1)."""
    counts = sample_pulse_counts(w, model, rng, (n_pulses,))
    out = np.zeros(n_pulses + 1, dtype=np.int64)
    np.cumsum(counts, out=out[1:])
    return out


def expected_cumulative(w: float, n_pulses: int) -> np.ndarray:
    """Noise-free expected accumulation: k * w for k = 0..n_pulses."""
    return np.arange(n_pulses + 1, dtype=float) * w


def analytic_sigma(model: StochasticModel, n_pulse: int) -> float:
    """Relative standard deviation of N_sk / N_pulse: sqrt(p_bar / N)."""
    if n_pulse < 1:
        raise ValueError("n_pulse must be >= 1")
    return math.sqrt(model.p_bar / n_pulse)


def monte_carlo_sigma(model: StochasticModel, n_pulse: int, trials: int,
                      seed: int, w: float = 1.0, path: tuple = ()) -> float:
    """Empirical std of (sum of counts)/n_pulse over independent trials.

    Trials are drawn from Philox streams derived per block of MC_BLOCK
    trials, so reruns with the same seed are bit-identical and blocks can be
    distributed across workers.  ``path`` decorrelates repeated calls that
    share a seed (e.g. points of a parameter sweep).
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000 for a stable estimate")
    if n_pulse < 1:
        raise ValueError("n_pulse must be >= 1")
    means = np.empty(trials)
    done = 0
    block_index = 0
    while done < trials:
        nb = min(MC_BLOCK, trials - done)
        g = stream(seed, "mc-sigma", *path, block_index)
        counts = sample_pulse_counts(w, model, g, (nb, n_pulse),
                                     dtype=np.float32)
        means[done:done + nb] = counts.sum(axis=1) / n_pulse
        done += nb
        block_index += 1
    return float(means.std(ddof=1))


def _counts(events: Iterable) -> np.ndarray:
    vals = [e.count if isinstance(e, NucleationEvent) else int(e)
            for e in events]
    return np.asarray(vals, dtype=np.int64)


def estimate_pbar_from_trace(events: Iterable, w_nominal: float = 1.0) -> float:
    """Fraction of pulses whose count deviated from the nominal value.

    Unbiased for p_bar in the unit-weight regime, which is the only regime
    the estimator is defined for.
    """
    if w_nominal != 1.0:
        raise ValueError("estimator is defined for w_nominal = 1 only")
    counts = _counts(events)
    if counts.size < 10:
        raise InsufficientData(
            f"need at least 10 events, got {counts.size}")
    return float(np.mean(counts != 1))


class WeightFit(NamedTuple):
    slope: float
    intercept: float
    slope_std: float


def fit_weight(cumulative: Sequence[tuple[float, float]]) -> WeightFit:
    """Ordinary least-squares line through (n_pulses, n_sk) points.

    The slope is the empirical synaptic weight dN_sk/dN_pulses;
    ``slope_std`` is the standard OLS slope uncertainty from the residuals.
    """
    pts = np.asarray(cumulative, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("expected a sequence of (n_pulses, n_sk) pairs")
    if pts.shape[0] < 3:
        raise InsufficientData("need at least 3 points to fit")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(np.diff(x) <= 0):
        if np.all(x == x[0]):
            raise SingularFit("all n_pulses identical; slope undefined")
        raise ValueError("n_pulses must be strictly increasing")
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx == 0.0:
        raise SingularFit("no spread in n_pulses")
    slope = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    dof = x.size - 2
    s2 = float(resid @ resid) / dof if dof > 0 else 0.0
    return WeightFit(slope, intercept, math.sqrt(max(s2, 0.0) / sxx))

"""Crossbar composition: M input tracks, L detection columns, one output
voltage per column.

Each track i crosses column j at a nucleation site with weight ``w_ij``
(skyrmions per pulse) feeding a detection zone at that crossing.  The
column output is the readout of the summed in-zone count,
``f(sum_i n_ij)``: linear Hall summation or a saturating MTJ activation.
The parallel read circuit uses large series resistors so every track sees
the same dc read current.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import (
    FORWARD,
    DeviceCalibration,
    PulseTrain,
)
from .errors import ProtocolError
from .nucleation import MC_BLOCK, StochasticModel, sample_pulse_count, sample_pulse_counts
from .readout import (
    DEFAULT_SIGMA_MEAS_NV,
    MeasurementTrace,
    MtjConfig,
    hall_voltage,
    mtj_activation,
)
from .rng import stream
from .transport import (
    DetectionZone,
    SkyrmionPopulation,
    advance,
    apply_capacity,
    count_in_zone,
    default_capacity,
    field_reset,
    zone_within_track,
)

LINEAR_AHE = "linear_ahe"
MTJ = "mtj"

KINEMATIC = "kinematic"
IDEAL = "ideal"

#: Minimum series-to-track resistance ratio for the uniform-current budget.
MIN_SERIES_RATIO = 50.0


@dataclass(frozen=True)
class CrossbarConfig:
    """Geometry, weights and read circuit of an M x L crossbar.

    weights            (M, L) skyrmions/pulse, non-negative
    zones              nested (M, L) grid of DetectionZone, one per crossing
    track_resistances  Ohm per track
    series_resistance  Ohm, calibrated resistor at each end of each track
    readout_mode       'linear_ahe' or 'mtj'
    transport_mode     'kinematic' (full particle motion) or 'ideal'
                       (every nucleated skyrmion reaches its zone)
    """

    weights: np.ndarray
    zones: tuple
    track_resistances: tuple
    series_resistance: float = 12000.0
    readout_mode: str = LINEAR_AHE
    mtj: MtjConfig | None = None
    transport_mode: str = KINEMATIC
    enforce_capacity: bool = True

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "weights", w)
        m, l = w.shape
        zones = tuple(tuple(row) for row in self.zones)
        if len(zones) != m or any(len(row) != l for row in zones):
            raise ValueError("zones grid must match the weight matrix shape")
        object.__setattr__(self, "zones", zones)
        res = tuple(float(r) for r in self.track_resistances)
        if len(res) != m:
            raise ValueError("one track resistance per track required")
        if any(r <= 0 for r in res):
            raise ValueError("track resistances must be positive")
        if self.series_resistance < MIN_SERIES_RATIO * max(res):
            raise ValueError(
                f"series_resistance must be >= {MIN_SERIES_RATIO} x the "
                "largest track resistance")
        object.__setattr__(self, "track_resistances", res)
        if self.readout_mode not in (LINEAR_AHE, MTJ):
            raise ValueError("readout_mode must be 'linear_ahe' or 'mtj'")
        if self.readout_mode == MTJ and self.mtj is None:
            raise ValueError("mtj readout requires an MtjConfig")
        if self.transport_mode not in (KINEMATIC, IDEAL):
            raise ValueError("transport_mode must be 'kinematic' or 'ideal'")

    @property
    def m_tracks(self) -> int:
        return self.weights.shape[0]

    @property
    def l_columns(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class InputVector:
    """One pulse train per track; the pulse count encodes the input value."""

    pulses_per_track: tuple

    def __post_init__(self):
        pulses = tuple(self.pulses_per_track)
        for p in pulses:
            if not isinstance(p, PulseTrain):
                raise ValueError("inputs must be PulseTrain instances")
            if p.polarity != FORWARD:
                raise ValueError("input pulses must be forward polarity")
        object.__setattr__(self, "pulses_per_track", pulses)

    def __len__(self) -> int:
        return len(self.pulses_per_track)


def build_crossbar(cal: DeviceCalibration, weights, *,
                   track_resistances=None, series_resistance: float = 12000.0,
                   readout_mode: str = LINEAR_AHE, mtj: MtjConfig | None = None,
                   zone_start_x: float = 5.0, zone_pitch: float = 10.0,
                   zone_side: float = 6.0, capacity: int | None = None,
                   transport_mode: str = KINEMATIC,
                   enforce_capacity: bool = True) -> CrossbarConfig:
    """Lay out a crossbar with evenly pitched detection zones.

    Column j's zone starts at ``zone_start_x + j * zone_pitch`` (its left
    edge doubles as the nucleation site) and is centred on the track.
    """
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    m, l = w.shape
    if capacity is None:
        capacity = default_capacity(zone_side, cal.skyrmion_diameter)
    zones = []
    for _ in range(m):
        row = []
        for j in range(l):
            zone = DetectionZone(
                center_x=zone_start_x + j * zone_pitch + zone_side / 2.0,
                center_y=cal.track_width / 2.0,
                side=zone_side,
                capacity=capacity,
            )
            if not zone_within_track(zone, cal):
                raise ValueError(
                    f"zone for column {j} falls outside the track")
            row.append(zone)
        zones.append(tuple(row))
    if track_resistances is None:
        track_resistances = (130.0, 120.0) if m == 2 else (125.0,) * m
    return CrossbarConfig(
        weights=w,
        zones=tuple(zones),
        track_resistances=track_resistances,
        series_resistance=series_resistance,
        readout_mode=readout_mode,
        mtj=mtj,
        transport_mode=transport_mode,
        enforce_capacity=enforce_capacity,
    )


def expected_sums(config: CrossbarConfig, input_vector: InputVector) -> np.ndarray:
    """Deterministic expectation per column: sum_i w_ij N_pulse_i."""
    if len(input_vector) != config.m_tracks:
        raise ValueError(
            f"input length {len(input_vector)} does not match "
            f"{config.m_tracks} tracks")
    counts = np.array([p.count for p in input_vector.pulses_per_track],
                      dtype=float)
    return counts @ config.weights


def expected_sum(config: CrossbarConfig, input_vector: InputVector,
                 column: int) -> float:
    """Expected skyrmion total for one column, ignoring stochasticity,
    capacity and edge losses."""
    return float(expected_sums(config, input_vector)[column])


def simulate_track_counts(config: CrossbarConfig, cal: DeviceCalibration,
                          track: int, pulse: PulseTrain,
                          stochastic: StochasticModel,
                          rng: np.random.Generator) -> np.ndarray:
    """In-zone counts per column after running one track's pulse train.

    Kinematic mode moves the whole track population each pulse and injects
    fresh skyrmions at each column's site; counts are taken as a snapshot
    after the full train (crowding applied per zone).  Ideal mode skips the
    particle motion and delivers every nucleated skyrmion to its zone.
    """
    weights_row = config.weights[track]
    zones_row = config.zones[track]
    l = config.l_columns
    if config.transport_mode == IDEAL:
        counts = np.empty(l, dtype=np.int64)
        for j in range(l):
            samples = sample_pulse_counts(weights_row[j], stochastic, rng,
                                          (pulse.count,))
            total = int(samples.sum())
            if config.enforce_capacity:
                total = min(total, zones_row[j].capacity)
            counts[j] = total
        return counts

    single = PulseTrain(1, pulse.current_density, pulse.duration)
    notches = [(zone.bounds[0], cal.notch_y) for zone in zones_row]
    pop = SkyrmionPopulation.empty(track_id=track)
    for _ in range(pulse.count):
        pop = advance(pop, single, cal)
        for j in range(l):
            created = sample_pulse_count(weights_row[j], stochastic, rng)
            if created:
                pop = pop.spawn(created, *notches[j])
    if config.enforce_capacity:
        for zone in zones_row:
            pop = apply_capacity(pop, zone)
    return np.array([count_in_zone(pop, zone) for zone in zones_row],
                    dtype=np.int64)


@dataclass(frozen=True)
class WeightedSumResult:
    """Outcome of one stochastic weighted-sum evaluation.

    output is in nV for linear readout, mV for MTJ readout.
    """

    n_detec: np.ndarray       # (L,) summed in-zone counts
    output: np.ndarray        # (L,) column readout
    per_track: np.ndarray     # (M, L) in-zone counts per crossing
    expected: np.ndarray      # (L,) deterministic expectation
    seed: int


def run_weighted_sum(config: CrossbarConfig, input_vector: InputVector,
                     stochastic: StochasticModel, cal: DeviceCalibration,
                     seed: int = 0, noise: bool = False,
                     sigma_meas: float = DEFAULT_SIGMA_MEAS_NV) -> WeightedSumResult:
    """Evaluate the weighted sum once: nucleate, transport, count, read out.

    Each track draws from its own derived stream, so a track's counts do
    not depend on which other tracks are present (linear-mode outputs are
    therefore exactly additive across tracks when noise is off).
    """
    expected = expected_sums(config, input_vector)
    m, l = config.m_tracks, config.l_columns
    per_track = np.zeros((m, l), dtype=np.int64)
    for i in range(m):
        rng = stream(seed, "track", i)
        per_track[i] = simulate_track_counts(
            config, cal, i, input_vector.pulses_per_track[i], stochastic, rng)
    n_detec = per_track.sum(axis=0)

    output = np.empty(l, dtype=float)
    if config.readout_mode == LINEAR_AHE:
        meas_rng = stream(seed, "readout") if noise else None
        for j in range(l):
            output[j] = sum(
                hall_voltage(int(per_track[i, j]), cal, noise=noise,
                             rng=meas_rng, sigma_meas=sigma_meas)
                for i in range(m))
    else:
        for j in range(l):
            output[j] = mtj_activation(int(n_detec[j]), config.mtj, cal)
    return WeightedSumResult(n_detec=n_detec, output=output,
                             per_track=per_track, expected=expected,
                             seed=seed)


def monte_carlo_column_counts(config: CrossbarConfig, input_vector: InputVector,
                              stochastic: StochasticModel, trials: int,
                              seed: int) -> np.ndarray:
    """(trials, L) matrix of summed column counts under ideal transport.

    Vectorised across trials for Monte Carlo convergence checks; capacity
    is applied per crossing when the config enforces it.
    """
    m, l = config.m_tracks, config.l_columns
    totals = np.zeros((trials, l), dtype=np.int64)
    for i in range(m):
        n_pulses = input_vector.pulses_per_track[i].count
        for j in range(l):
            g = stream(seed, "mc", i, j)
            counts = sample_pulse_counts(
                config.weights[i, j], stochastic, g, (trials, n_pulses),
                dtype=np.float32).sum(axis=1)
            if config.enforce_capacity:
                np.minimum(counts, config.zones[i][j].capacity, out=counts)
            totals[:, j] += counts
    return totals


def current_uniformity(track_resistances, series_resistance: float) -> float:
    """Largest relative deviation of the per-track read currents.

    Each track sees I_k proportional to 1 / (R_k + 2 R_series); the value
    returned is max |I_k / mean(I) - 1|.
    """
    r = np.asarray(track_resistances, dtype=float)
    currents = 1.0 / (r + 2.0 * series_resistance)
    return float(np.max(np.abs(currents / currents.mean() - 1.0)))


def check_current_uniformity(config: CrossbarConfig) -> float:
    return current_uniformity(config.track_resistances,
                              config.series_resistance)


def run_fig4_protocol(config: CrossbarConfig, per_track_pulse_specs,
                      cal: DeviceCalibration, stochastic: StochasticModel,
                      seed: int = 0, noise: bool = False,
                      sigma_meas: float = DEFAULT_SIGMA_MEAS_NV,
                      baseline: int = 20, hold: int = 20,
                      post: int = 10) -> MeasurementTrace:
    """Two-track demonstration sequence.

    Phases: ``baseline`` samples, track-1 pulsing (one sample per pulse), a
    ``hold`` stability block, track-2 pulsing, a second hold block, field
    reset, ``post`` samples.  The voltage is the summed Hall signal of both
    tracks throughout.
    """
    if config.m_tracks != 2:
        raise ProtocolError("the two-track protocol needs exactly 2 tracks")
    if config.l_columns != 1:
        raise ProtocolError("the two-track protocol reads a single column")
    specs = list(per_track_pulse_specs)
    if len(specs) != 2:
        raise ProtocolError("need one pulse spec per track")

    track_rngs = [stream(seed, "track", i) for i in range(2)]
    meas_rng = stream(seed, "meas")
    pops = [SkyrmionPopulation.empty(track_id=i) for i in range(2)]
    zones = [config.zones[i][0] for i in range(2)]
    notches = [(zones[i].bounds[0], cal.notch_y) for i in range(2)]

    idx, phases, volts, counts = [], [], [], []
    i_sample = 0

    def record(phase: str):
        nonlocal i_sample
        i_sample += 1
        n_tot = sum(count_in_zone(pops[t], zones[t]) for t in range(2))
        v = hall_voltage(n_tot, cal, noise=noise, rng=meas_rng,
                         sigma_meas=sigma_meas)
        idx.append(i_sample)
        phases.append(phase)
        volts.append(v)
        counts.append(n_tot)

    def pulse_track(t: int):
        spec = specs[t]
        single = PulseTrain(1, spec.current_density, spec.duration)
        w = config.weights[t, 0]
        for _ in range(spec.count):
            created = sample_pulse_count(w, stochastic, track_rngs[t])
            pops[t] = advance(pops[t], single, cal, nucleated=created,
                              notch=notches[t])
            if config.enforce_capacity:
                pops[t] = apply_capacity(pops[t], zones[t])
            record("pulsing")

    for _ in range(baseline):
        record("baseline")
    pulse_track(0)
    for _ in range(hold):
        record("hold")
    pulse_track(1)
    for _ in range(hold):
        record("hold")
    pops = [field_reset(p) for p in pops]
    record("reset")
    for _ in range(post):
        record("post")

    return MeasurementTrace(
        index=np.asarray(idx, dtype=np.int64),
        phase=tuple(phases),
        delta_v=np.asarray(volts, dtype=float),
        n_detec=np.asarray(counts, dtype=np.int64),
    )


def monte_carlo_sum_relative_std(m: int, n_pulse: int,
                                 model: StochasticModel, trials: int,
                                 seed: int, w: float = 1.0,
                                 path: tuple = ()) -> float:
    """Relative std of an M-synapse sum over seeded Monte Carlo trials.

    Every synapse receives ``n_pulse`` pulses at weight ``w``; the sum of
    all counts is normalised by its expectation M * N * w.  For w = 1 this
    converges to sqrt(p_bar / N) / sqrt(M).
    """
    if trials < 1000:
        raise ValueError("trials must be >= 1000")
    totals = np.zeros(trials, dtype=np.int64)
    for i in range(m):
        done = 0
        block = 0
        while done < trials:
            nb = min(MC_BLOCK, trials - done)
            g = stream(seed, "sum-sigma", *path, i, block)
            counts = sample_pulse_counts(w, model, g, (nb, n_pulse),
                                         dtype=np.float32)
            totals[done:done + nb] += counts.sum(axis=1)
            done += nb
            block += 1
    norm = totals / (m * n_pulse * w)
    return float(norm.std(ddof=1))

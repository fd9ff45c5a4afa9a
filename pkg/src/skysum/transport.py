"""Kinematic motion of discrete skyrmions along a track.

Skyrmions are treated as labelled points.  Forward pulses translate every
live skyrmion by ``dx = v(J) t`` along the track and ``dy = dx tan(theta_H)``
across it (the skyrmion Hall deflection); reaching the far edge annihilates
a skyrmion.  Reverse pulses retrace the same oblique path back towards the
nucleation notch, where skyrmions are usually annihilated but occasionally
pin as residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .device import (
    DEFAULT_NOTCH_X_UM,
    FORWARD,
    REVERSE,
    DeviceCalibration,
    PulseTrain,
    step_displacement,
)

#: How far past the downstream zone boundary crowded-out skyrmions are
#: parked (um).  The detection box is closed, so any positive offset is
#: "just beyond".
CAPACITY_DISPLACEMENT_UM = 1e-3


@dataclass(frozen=True)
class SkyrmionPopulation:
    """Positions of the discrete skyrmions on one track.

    ``pinned`` marks skyrmions parked at the notch by an incomplete reverse
    erase; they stay put under further reverse pulses and are released by
    the next forward pulse.
    """

    ids: np.ndarray
    x: np.ndarray
    y: np.ndarray
    alive: np.ndarray
    pinned: np.ndarray
    track_id: int = 0

    def __post_init__(self):
        n = len(self.ids)
        for name in ("x", "y", "alive", "pinned"):
            if len(getattr(self, name)) != n:
                raise ValueError("population arrays must have equal length")
        if len(np.unique(self.ids)) != n:
            raise ValueError("skyrmion ids must be unique")

    @classmethod
    def empty(cls, track_id: int = 0) -> "SkyrmionPopulation":
        return cls(
            ids=np.empty(0, dtype=np.int64),
            x=np.empty(0, dtype=float),
            y=np.empty(0, dtype=float),
            alive=np.empty(0, dtype=bool),
            pinned=np.empty(0, dtype=bool),
            track_id=track_id,
        )

    @classmethod
    def at_positions(cls, xy, track_id: int = 0) -> "SkyrmionPopulation":
        """Population with live skyrmions at the given (x, y) pairs."""
        arr = np.atleast_2d(np.asarray(xy, dtype=float))
        n = arr.shape[0]
        return cls(
            ids=np.arange(n, dtype=np.int64),
            x=arr[:, 0].copy(),
            y=arr[:, 1].copy(),
            alive=np.ones(n, dtype=bool),
            pinned=np.zeros(n, dtype=bool),
            track_id=track_id,
        )

    @property
    def n_alive(self) -> int:
        return int(np.count_nonzero(self.alive))

    def spawn(self, n: int, x: float, y: float) -> "SkyrmionPopulation":
        """Append ``n`` live skyrmions at (x, y) with fresh ids."""
        if n <= 0:
            return self
        next_id = int(self.ids.max()) + 1 if self.ids.size else 0
        return SkyrmionPopulation(
            ids=np.concatenate([self.ids, np.arange(next_id, next_id + n)]),
            x=np.concatenate([self.x, np.full(n, float(x))]),
            y=np.concatenate([self.y, np.full(n, float(y))]),
            alive=np.concatenate([self.alive, np.ones(n, dtype=bool)]),
            pinned=np.concatenate([self.pinned, np.zeros(n, dtype=bool)]),
            track_id=self.track_id,
        )

    def to_rows(self, pulse_index: int = 0):
        """Rows (pulse_index, id, x, y, alive) for trajectory CSV export."""
        return [
            (pulse_index, int(i), float(xx), float(yy), bool(a))
            for i, xx, yy, a in zip(self.ids, self.x, self.y, self.alive)
        ]


@dataclass(frozen=True)
class DetectionZone:
    """Square detection box around a Hall cross (closed on its boundary).

    ``capacity`` is the crowding limit: how many skyrmions fit before the
    box saturates and newcomers are crowded out downstream.
    """

    center_x: float
    center_y: float
    side: float = 6.0
    capacity: int = 81

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("side must be positive")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        h = self.side / 2.0
        return (self.center_x - h, self.center_x + h,
                self.center_y - h, self.center_y + h)

    @property
    def area_um2(self) -> float:
        return self.side * self.side

    def contains(self, x, y):
        x0, x1, y0, y1 = self.bounds
        return (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)


def default_capacity(side_um: float, diameter_nm: float) -> int:
    """Crowding limit from a 3-diameter spacing heuristic."""
    return int(math.floor((side_um / (3.0 * diameter_nm * 1e-3)) ** 2))


def zone_within_track(zone: DetectionZone, cal: DeviceCalibration) -> bool:
    x0, x1, y0, y1 = zone.bounds
    return (x0 >= 0 and x1 <= cal.track_length
            and y0 >= 0 and y1 <= cal.track_width)


def notch_position(cal: DeviceCalibration,
                   x: float = DEFAULT_NOTCH_X_UM) -> tuple[float, float]:
    """Coordinates where new skyrmions enter the track."""
    return (x, cal.notch_y)


def advance(pop: SkyrmionPopulation, pulse: PulseTrain,
            cal: DeviceCalibration, nucleated: int = 0,
            notch: tuple[float, float] | None = None) -> SkyrmionPopulation:
    """Apply one forward pulse: move every live skyrmion, then inject
    ``nucleated`` fresh skyrmions at the notch.

    Skyrmions whose deflection carries them to the far track edge, or past
    the end of the track, are annihilated.  Forward motion releases any
    notch-pinned residuals.
    """
    if pulse.polarity != FORWARD:
        raise ValueError("advance requires a forward pulse")
    if pulse.count != 1:
        raise ValueError("advance applies exactly one pulse (count = 1)")
    dx, dy = step_displacement(cal, pulse)
    x = np.where(pop.alive, pop.x + dx, pop.x)
    y = np.where(pop.alive, pop.y + dy, pop.y)
    survived = pop.alive & (y < cal.track_width) & (x <= cal.track_length)
    out = SkyrmionPopulation(
        ids=pop.ids,
        x=x,
        y=y,
        alive=survived,
        pinned=np.zeros_like(pop.pinned),
        track_id=pop.track_id,
    )
    if nucleated:
        nx, ny = notch if notch is not None else notch_position(cal)
        out = out.spawn(nucleated, nx, ny)
    return out


def reverse_erase(pop: SkyrmionPopulation, pulses: PulseTrain,
                  cal: DeviceCalibration, residual_prob: float,
                  rng: np.random.Generator,
                  notch: tuple[float, float] | None = None) -> SkyrmionPopulation:
    """Apply reverse pulses that retrace skyrmions back towards the notch.

    A skyrmion arriving at the notch (x falling to or below the notch
    position) is annihilated with probability ``1 - residual_prob``,
    otherwise it pins there as a residual.  Each skyrmion is rolled once,
    on arrival.
    """
    if pulses.polarity != REVERSE:
        raise ValueError("reverse_erase requires reverse polarity")
    if not 0.0 <= residual_prob <= 1.0:
        raise ValueError("residual_prob must lie in [0, 1]")
    forward_like = PulseTrain(1, pulses.current_density, pulses.duration)
    dx, dy = step_displacement(cal, forward_like)
    nx, ny = notch if notch is not None else notch_position(cal)

    x = pop.x.copy()
    y = pop.y.copy()
    alive = pop.alive.copy()
    pinned = pop.pinned.copy()
    for _ in range(pulses.count):
        moving = alive & ~pinned
        if not moving.any():
            break
        x_new = np.where(moving, x - dx, x)
        y_new = np.where(moving, y - dy, y)
        arrived = moving & (x_new <= nx)
        if arrived.any():
            n_arr = int(np.count_nonzero(arrived))
            survive = rng.random(n_arr) < residual_prob
            idx = np.flatnonzero(arrived)
            alive[idx] = survive
            pinned[idx[survive]] = True
            x_new[idx] = nx
            y_new[idx] = ny
        x, y = x_new, y_new
    return SkyrmionPopulation(ids=pop.ids, x=x, y=y, alive=alive,
                              pinned=pinned, track_id=pop.track_id)


def field_reset(pop: SkyrmionPopulation) -> SkyrmionPopulation:
    """Saturating out-of-plane field: every skyrmion is erased."""
    return SkyrmionPopulation.empty(pop.track_id)


def count_in_zone(pop: SkyrmionPopulation, zone: DetectionZone) -> int:
    """Live skyrmions whose centre lies inside the closed detection box."""
    if pop.ids.size == 0:
        return 0
    return int(np.count_nonzero(pop.alive & zone.contains(pop.x, pop.y)))


def apply_capacity(pop: SkyrmionPopulation, zone: DetectionZone) -> SkyrmionPopulation:
    """Crowd out skyrmions beyond the zone capacity.

    The most recently arrived skyrmions (highest ids) are displaced just
    past the downstream zone boundary so the in-zone count never exceeds
    ``zone.capacity``.
    """
    if pop.ids.size == 0:
        return pop
    inside = pop.alive & zone.contains(pop.x, pop.y)
    excess = int(np.count_nonzero(inside)) - zone.capacity
    if excess <= 0:
        return pop
    inside_idx = np.flatnonzero(inside)
    order = inside_idx[np.argsort(pop.ids[inside_idx])]
    displaced = order[-excess:]
    x = pop.x.copy()
    x[displaced] = zone.bounds[1] + CAPACITY_DISPLACEMENT_UM
    return replace(pop, x=x)

"""Mapping trained weight matrices onto crossbar programming.

Signed network weights are split into non-negative (positive, negative)
parts carried by differential column pairs; each part is quantised onto a
uniform grid of ``states`` levels, converted to a device weight in
skyrmions/pulse and finally to the out-of-plane field that programs it.
Inference encodes inputs as pulse counts and reads the difference of the
paired column outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crossbar import IDEAL, InputVector, build_crossbar, monte_carlo_column_counts
from .device import (
    DeviceCalibration,
    FieldSetting,
    PulseTrain,
    paper2024,
    weight_from_field,
)
from .errors import OutOfRange
from .nucleation import StochasticModel
from .readout import MtjConfig, mtj_activation

IDENTITY = "identity"
LINEAR_AHE = "linear_ahe"
MTJ = "mtj"


def field_for_weight(w_target: float, cal: DeviceCalibration) -> FieldSetting:
    """Field (mT) that programs a device weight of ``w_target`` sk/pulse.

    Inverts the linear field law; refuses targets above the weight ceiling
    at the minimum operating field.
    """
    if w_target < 0:
        raise OutOfRange("weight targets must be >= 0")
    ceiling = weight_from_field(cal, cal.field_min)
    if w_target > ceiling:
        raise OutOfRange(
            f"weight {w_target} exceeds the ceiling {ceiling} at "
            f"{cal.field_min} mT")
    return FieldSetting(cal.field_max - w_target / abs(cal.weight_field_slope))


@dataclass(frozen=True)
class QuantizedLayer:
    """A weight matrix quantised and mapped to device programming.

    weight_matrix  original weights
    quantized      signed quantised weights (network units)
    w_pos, w_neg   device weights (skyrmions/pulse) of the differential
                   column pair carrying each entry
    scale          network weight units per skyrmion/pulse
    field_pos/neg  programming fields (mT) per site
    """

    weight_matrix: np.ndarray
    quantized: np.ndarray
    w_pos: np.ndarray
    w_neg: np.ndarray
    states: int
    scale: float
    field_pos: np.ndarray
    field_neg: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.weight_matrix.shape

    def field_assignments(self):
        """(positive, negative) FieldSetting pair per matrix entry."""
        m, l = self.shape
        return [
            [(FieldSetting(self.field_pos[i, j]),
              FieldSetting(self.field_neg[i, j])) for j in range(l)]
            for i in range(m)
        ]

    def programming_schedule(self) -> list[dict]:
        """JSON-ready site list: field and polarity column per entry."""
        rows = []
        m, l = self.shape
        for i in range(m):
            for j in range(l):
                for polarity, h in (("positive", self.field_pos[i, j]),
                                    ("negative", self.field_neg[i, j])):
                    rows.append({
                        "track": i,
                        "column": j,
                        "polarity_column": polarity,
                        "h_z_mT": float(h),
                    })
        return rows


def quantize(weights, states: int = 15,
             cal: DeviceCalibration | None = None,
             scale: float | None = None) -> QuantizedLayer:
    """Quantise a real matrix onto ``states`` uniform non-negative levels
    per differential column.

    Each part (positive, negative) lands on the grid
    {k * w_max / (states - 1)}, so the absolute quantisation error is at
    most half a level spacing.  ``scale`` fixes the network-to-device
    conversion; by default the largest magnitude maps to the weight ceiling
    of the calibration.
    """
    if states < 2:
        raise ValueError("states must be >= 2")
    if cal is None:
        cal = paper2024()
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    w_max = float(np.max(np.abs(w))) if w.size else 0.0
    ceiling = weight_from_field(cal, cal.field_min)

    if w_max == 0.0:
        q_pos = np.zeros_like(w)
        q_neg = np.zeros_like(w)
        scale = 1.0 if scale is None else scale
    else:
        spacing = w_max / (states - 1)
        q_pos = np.round(np.maximum(w, 0.0) / spacing) * spacing
        q_neg = np.round(np.maximum(-w, 0.0) / spacing) * spacing
        if scale is None:
            scale = w_max / ceiling
    if scale <= 0:
        raise ValueError("scale must be positive")

    w_pos_dev = q_pos / scale
    w_neg_dev = q_neg / scale
    if np.max(w_pos_dev, initial=0.0) > ceiling + 1e-12 \
            or np.max(w_neg_dev, initial=0.0) > ceiling + 1e-12:
        raise OutOfRange("scale maps some weights above the device ceiling")
    w_pos_dev = np.minimum(w_pos_dev, ceiling)
    w_neg_dev = np.minimum(w_neg_dev, ceiling)

    slope = abs(cal.weight_field_slope)
    field_pos = cal.field_max - w_pos_dev / slope
    field_neg = cal.field_max - w_neg_dev / slope
    return QuantizedLayer(
        weight_matrix=w,
        quantized=q_pos - q_neg,
        w_pos=w_pos_dev,
        w_neg=w_neg_dev,
        states=states,
        scale=float(scale),
        field_pos=field_pos,
        field_neg=field_neg,
    )


def _readout(counts: np.ndarray, readout: str, scale: float,
             cal: DeviceCalibration, mtj: MtjConfig | None) -> np.ndarray:
    """Apply the column transfer function f to (possibly fractional)
    count sums."""
    if readout == IDENTITY:
        return counts * scale
    if readout == LINEAR_AHE:
        return counts * cal.per_skyrmion_voltage_mean
    if readout == MTJ:
        if mtj is None:
            raise ValueError("mtj readout requires an MtjConfig")
        f = np.vectorize(lambda n: mtj_activation(n, mtj, cal))
        return f(counts)
    raise ValueError(f"unknown readout {readout!r}")


def infer(layer: QuantizedLayer, input_vector, mode: str = "expected",
          readout: str = IDENTITY, cal: DeviceCalibration | None = None,
          stochastic: StochasticModel | None = None, seed: int = 0,
          trials: int = 1, mtj: MtjConfig | None = None,
          capacity: int | None = None) -> np.ndarray:
    """Run an input through the mapped layer.

    Expected mode evaluates f(sum w+ x) - f(sum w- x) per differential
    pair; with the identity readout this is exactly the quantised
    matrix-vector product.  Stochastic mode samples nucleation per pulse
    through the crossbar (ideal transport) and returns one row per trial
    (shape (trials, L); a single trial returns shape (L,)).
    """
    x = np.asarray(input_vector, dtype=np.int64)
    m, l = layer.shape
    if x.shape != (m,):
        raise ValueError(f"input length {x.size} does not match {m} tracks")
    if np.any(x < 0):
        raise ValueError("pulse counts must be >= 0")
    if cal is None:
        cal = paper2024()

    if mode == "expected":
        pos = x @ layer.w_pos
        neg = x @ layer.w_neg
        return (_readout(pos, readout, layer.scale, cal, mtj)
                - _readout(neg, readout, layer.scale, cal, mtj))
    if mode != "stochastic":
        raise ValueError("mode must be 'expected' or 'stochastic'")
    if stochastic is None:
        raise ValueError("stochastic mode needs a StochasticModel")

    # Differential pairs as a 2L-column ideal-transport crossbar.
    weights = np.concatenate([layer.w_pos, layer.w_neg], axis=1)
    config = build_crossbar(
        cal, weights,
        zone_pitch=0.0, zone_start_x=5.0,   # geometry unused in ideal mode
        transport_mode=IDEAL,
        enforce_capacity=capacity is not None,
        capacity=capacity if capacity is not None else 1,
    )
    pulses = InputVector(tuple(
        PulseTrain(int(n), cal.current_ref, cal.duration_ref) if n > 0
        else PulseTrain(0, cal.current_ref, cal.duration_ref)
        for n in x))
    counts = monte_carlo_column_counts(config, pulses, stochastic,
                                       trials, seed)
    pos, neg = counts[:, :l].astype(float), counts[:, l:].astype(float)
    out = (_readout(pos, readout, layer.scale, cal, mtj)
           - _readout(neg, readout, layer.scale, cal, mtj))
    return out[0] if trials == 1 else out

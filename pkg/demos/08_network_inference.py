"""From a trained weight matrix to device programming and inference.

Signed weights are split across differential column pairs, quantised to
15 levels, and converted to per-site programming fields.  Inference
encodes inputs as pulse counts; expected mode gives the clean quantised
product, stochastic mode samples the physical nucleation process.
"""

import numpy as np

from skysum import StochasticModel, infer, paper2024, quantize

rng = np.random.default_rng(0)
weights = np.round(rng.uniform(-1, 1, size=(4, 3)), 2)
cal = paper2024()

print("== the layer to map ==")
print(weights)

layer = quantize(weights, states=15, cal=cal)
print(f"\nquantised to {layer.states} levels per polarity, "
      f"max error {np.max(np.abs(layer.quantized - weights)):.4f} "
      f"(bound {np.max(np.abs(weights)) / 14 / 2:.4f})")
print(f"scale: {layer.scale:.4f} weight units per skyrmion/pulse")

print("\n== programming schedule (first sites) ==")
for entry in layer.programming_schedule()[:6]:
    print(f"  track {entry['track']} column {entry['column']} "
          f"{entry['polarity_column']:>8} column: "
          f"H_z = {entry['h_z_mT']:.2f} mT")

x = np.array([12, 5, 9, 7])
expected = infer(layer, x)
print(f"\n== inference with pulse-count inputs {x.tolist()} ==")
print(f"  quantised matrix-vector product: {np.round(expected, 3)}")
print(f"  float reference:                 {np.round(x @ weights, 3)}")

outs = infer(layer, x, mode="stochastic", stochastic=StochasticModel(0.4),
             seed=9, trials=2000)
print(f"  stochastic mean over 2000 runs:  "
      f"{np.round(outs.mean(axis=0), 3)}")
print(f"  stochastic std:                  "
      f"{np.round(outs.std(axis=0, ddof=1), 3)}")
print("\nthe device noise averages out across trials; single-shot reads "
      "carry the sqrt(p_bar/N) fluctuation per synapse")

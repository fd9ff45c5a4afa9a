"""What precision costs: energy of the weighted sum per nucleation scheme.

Precision improves as 1 - sqrt(p_bar / (M N)) while energy grows as
M N E_sk, so each nucleation technology traces its own trade-off curve.
The four presets span the measured thermal device down to the
thermodynamic limit of roughly 500 kT per skyrmion.
"""

from skysum import ENERGY_PRESETS, EnergyModel, pareto_curve, sum_precision

M = 10        # synapses in the sum
P_BAR = 0.4   # prototype deviation probability


def si(energy):
    for unit, scale in (("nJ", 1e-9), ("pJ", 1e-12), ("fJ", 1e-15),
                        ("aJ", 1e-18)):
        if energy >= scale:
            return f"{energy / scale:7.2f} {unit}"
    return f"{energy:.2e} J"


print(f"== precision of a {M}-synapse sum vs pulse budget ==")
print(f"  {'N':>5} {'precision':>10}")
for n in (1, 2, 5, 10, 25, 50, 100):
    print(f"  {n:>5} {sum_precision(M, n, P_BAR):>10.4f}")

print("\n== energy to reach a target precision, per nucleation scheme ==")
targets = (0.90, 0.95, 0.98, 0.99)
print(f"  {'scheme':>18} " + " ".join(f"{t:>11.0%}" for t in targets))
for name in ("thermal_measured", "thermal_optimized", "vcma",
             "barrier_limit"):
    model = EnergyModel.from_preset(name)
    curve = pareto_curve(M, P_BAR, model, range(1, 5001))
    cells = []
    for target in targets:
        energy = next(e for p, e in curve if p >= target)
        cells.append(si(energy))
    print(f"  {name:>18} " + " ".join(f"{c:>11}" for c in cells))

barrier = EnergyModel.from_preset("barrier_limit")
per_op = [n * barrier.e_per_skyrmion for n in (1, 10, 50)]
print("\nat the stability limit a single synaptic operation costs "
      + ", ".join(si(e) for e in per_op)
      + " for 1, 10, 50 pulses: the 1-100 aJ regime of biology-class "
        "efficiency")
print(f"\npresets (J/skyrmion): {ENERGY_PRESETS}")

#!/usr/bin/env python3
"""Search a better controller matrix with the genetic algorithm.

The conventional controller wires every chain to three random control
bits, ignoring which chains the workload actually uses. The search keeps
the same fan-in budget but learns where the taps should go, trading a
fixed random structure for one tuned to the cube distribution.

Takes a minute or two at these sizes.
"""

import numpy as np

from xorscan import (
    GaConfig,
    UsageProfile,
    conventional_xornet,
    evaluate_xornet,
    generate_cubes,
    run_ga,
)

# 32 chains, 4 of them hot; 600 cubes.
probs = np.full(32, 0.06)
probs[:4] = 0.8
cubes = generate_cubes(UsageProfile(probs, 600), rng=42)

cfg = GaConfig(
    size_pop=40,
    size_parents=5,
    size_children=25,
    size_gen=12,
    mutation_ratio=0.05,
    lam=100.0,
    sca_limit=0.5,
    taps_init=3,
    stall_window=12,
    master_seed=1,
)
result = run_ga(cubes, n_control=10, cfg=cfg)

print("generation  best_fitness  best_ue  best_mean_sca")
for rec in result.trace.records:
    print(f"{rec.generation:10d}  {rec.best_fitness:12.3f}  {rec.best_ue:7d}  "
          f"{rec.best_mean_sca:13.4f}")

baseline = conventional_xornet(32, 10, 3)
ga_report = evaluate_xornet(result.best, cubes, 0.5, rng=99)
base_report = evaluate_xornet(baseline, cubes, 0.5, rng=99)
print(f"\nsearched net: ue={ga_report.ue:4d} mean_sca={ga_report.mean_sca:.3f}")
print(f"conventional: ue={base_report.ue:4d} mean_sca={base_report.mean_sca:.3f}")

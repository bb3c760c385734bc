#!/usr/bin/env python3
"""Pack cubes into patterns and translate pattern counts into test time.

Cubes that can share one control word are merged into a single test
pattern, as long as the merged pattern still encodes and stays under the
activated-chain budget. Fewer patterns means fewer tester cycles; the
cycle model at the bottom does that conversion for a given setup cost.
"""

import numpy as np

from xorscan import (
    CycleModel,
    GaConfig,
    UsageProfile,
    conventional_xornet,
    generate_cubes,
    incremental_merge,
    run_ga,
    total_cycles,
)

probs = np.full(24, 0.07)
probs[:3] = 0.75
cubes = generate_cubes(UsageProfile(probs, 400), rng=3)

baseline = conventional_xornet(24, 8, 3)
merged = incremental_merge(baseline, cubes, sca_limit=0.5, rng=17)
print(f"conventional net: {merged.pattern_count} patterns, "
      f"{len(merged.dropped)} cubes dropped")
sizes = sorted((len(p.members) for p in merged.patterns), reverse=True)
print(f"largest patterns hold {sizes[:5]} cubes")

cfg = GaConfig(size_pop=30, size_parents=5, size_children=25, size_gen=10,
               sca_limit=0.5, stall_window=10, master_seed=2)
searched = run_ga(cubes, n_control=8, cfg=cfg).best
merged_ga = incremental_merge(searched, cubes, sca_limit=0.5, rng=17)
print(f"searched net:     {merged_ga.pattern_count} patterns, "
      f"{len(merged_ga.dropped)} cubes dropped")

# Cycle model: (control bits + decompressor setup) / channels + shift depth,
# times the number of patterns.
for name, report in [("conventional", merged), ("searched", merged_ga)]:
    model = CycleModel(cbc=8, d=10, c_in=1, n_cell=40, pattern_count=report.pattern_count)
    print(f"{name}: {total_cycles(model):,} testing cycles")

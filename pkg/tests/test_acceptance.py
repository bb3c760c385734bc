"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

The genetic searches on the reference workload dominate the runtime
(tens of minutes); they are computed once per session and shared across
criteria. Run with ``pytest tests/test_acceptance.py -v -s`` to watch the
per-criterion lines as they complete.
"""

import json

import numpy as np
import pytest

from xorscan.cli import ExperimentConfig, run_sweep
from xorscan.cubes import CubeSet, UsageProfile, generate_cubes, save_cubes
from xorscan.ga import GaConfig, run_ga
from xorscan.gf2 import BitMatrix, BitVec, SolveStatus, gf2_solve, matvec_gf2
from xorscan.merge import incremental_merge
from xorscan.metrics import CycleModel, evaluate_xornet, total_cycles, transition_rate
from xorscan.seeds import derived_seed, stream_seed
from xorscan.xornet import EncodeStatus, XorNet, conventional_xornet, encode_usage

from oracles import brute_encodable, brute_solutions

# Reference workload: 64 chains with a handful of hot ones, 2000 cubes.
N_CHAINS = 64
N_CONTROL = 12
CUBE_COUNT = 2000
HOT_CHAINS = 6
HOT_PROB = 0.85
COLD_PROB = 0.05
WORKLOAD_SEED = 42
MASTER_SEEDS = list(range(1, 11))
SCA_LIMIT = 0.5


def _report(num: int, desc: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {desc}"
    if detail:
        line += f" ({detail})"
    print(line)


def _ga_config(master_seed: int) -> GaConfig:
    return GaConfig(
        size_pop=40,
        size_parents=5,
        size_children=25,
        size_gen=20,
        mutation_ratio=0.05,
        lam=100.0,
        sca_limit=SCA_LIMIT,
        taps_init=3,
        stall_window=20,
        master_seed=master_seed,
    )


@pytest.fixture(scope="module")
def workload() -> CubeSet:
    probs = np.full(N_CHAINS, COLD_PROB)
    probs[:HOT_CHAINS] = HOT_PROB
    return generate_cubes(UsageProfile(probs, CUBE_COUNT), WORKLOAD_SEED)


@pytest.fixture(scope="module")
def baseline_net() -> XorNet:
    return conventional_xornet(N_CHAINS, N_CONTROL, 3)


@pytest.fixture(scope="module")
def ga_nets(workload):
    nets = {}
    for seed in MASTER_SEEDS:
        nets[seed] = run_ga(workload, N_CONTROL, _ga_config(seed))
        print(f"  [ga] seed {seed}: best fitness {nets[seed].best_fitness.value:.2f}")
    return nets


def test_c01_transition_rate_worked_example():
    rate = transition_rate([[0, 0, 1, 1, 0]], [[0, 1, 1, 0, 1]])
    ok = rate == 0.6
    _report(1, "single-shift transition rate equals 0.6 exactly", ok, f"got {rate}")
    assert ok


# Reference deployments of the conventional controller: control bits,
# longest chain, pattern count and total cycles at two shift-power limits.
REFERENCE_DEPLOYMENTS = [
    # (design, power limit %, cbc, n_cell, pattern_count, cycles)
    ("C1", 50, 9, 328, 1_263, 440_787),
    ("C2", 50, 11, 358, 2_260, 861_060),
    ("C3", 50, 20, 329, 10_893, 3_954_159),
    ("C4", 50, 25, 360, 5_171, 2_073_571),
    ("C5", 50, 25, 328, 1_393, 526_554),
    ("C6", 50, 76, 40, 3_850, 739_200),
    ("C7", 50, 80, 31, 2_471, 471_961),
    ("C8", 50, 82, 330, 661, 327_195),
    ("C9", 50, 100, 25, 2_451, 551_475),
    ("C10", 50, 114, 20, 3_952, 980_096),
    ("C1", 30, 16, 328, 1_323, 470_988),
    ("C2", 30, 23, 358, 2_539, 997_827),
    ("C3", 30, 40, 329, 13_426, 5_142_158),
    ("C4", 30, 50, 360, 2_027, 863_502),
    ("C5", 30, 64, 328, 1_154, 481_218),
    ("C6", 30, 190, 40, 3_876, 1_186_056),
    ("C7", 30, 200, 31, 2_540, 789_940),
    ("C8", 30, 82, 330, 656, 324_720),
    ("C9", 30, 250, 25, 2_558, 959_250),
    ("C10", 30, 152, 20, 3_952, 1_130_272),
]


def test_c02_cycle_model_reproduces_reference_deployments():
    failures = []
    for design, limit, cbc, n_cell, pc, cycles in REFERENCE_DEPLOYMENTS:
        per_pattern, rem = divmod(cycles, pc)
        d = per_pattern - n_cell - cbc
        if rem != 0 or d < 0:
            failures.append(f"{design}@{limit}: no valid configuration-bit count")
            continue
        got = total_cycles(CycleModel(cbc=cbc, d=d, c_in=1, n_cell=n_cell, pattern_count=pc))
        if got != cycles:
            failures.append(f"{design}@{limit}: {got} != {cycles}")
    ok = not failures
    _report(2, "cycle model reproduces all 20 reference totals bit-exactly", ok,
            "; ".join(failures) or f"{len(REFERENCE_DEPLOYMENTS)} rows")
    assert ok, failures


def test_c03_solver_agrees_with_enumeration():
    rng = np.random.default_rng(1003)
    mismatches = 0
    unsatisfied = 0
    for trial in range(1000):
        cols = int(rng.integers(1, 13))
        rows = int(rng.integers(0, 2 * cols + 2))
        mat = rng.integers(0, 2, size=(rows, cols)).astype(np.uint8)
        rhs = rng.integers(0, 2, size=rows).astype(np.uint8)
        packed = BitMatrix(
            rows, cols, tuple(int(sum(int(b) << j for j, b in enumerate(r))) for r in mat)
        )
        sol = gf2_solve(
            packed, BitVec(rows, int(sum(int(b) << i for i, b in enumerate(rhs)))), trial
        )
        solvable = len(brute_solutions(mat, rhs)) > 0
        if solvable != (sol.status is not SolveStatus.INCONSISTENT):
            mismatches += 1
        elif solvable:
            lhs = matvec_gf2(packed, sol.assignment)
            if lhs.bits() != [int(b) for b in rhs]:
                unsatisfied += 1
    ok = mismatches == 0 and unsatisfied == 0
    _report(3, "solver matches exhaustive enumeration on 1000 systems", ok,
            f"mismatches={mismatches}, unsatisfied={unsatisfied}")
    assert ok


def test_c04_encode_verdicts_match_brute_force():
    rng = np.random.default_rng(1004)
    bad_verdicts = 0
    uncovered = 0
    for trial in range(500):
        n = int(rng.integers(2, 16))
        m = int(rng.integers(2, 13))
        levels = 2 if trial % 3 == 0 else 1

        def matrix():
            rows = []
            for _ in range(n):
                row = 0
                while row == 0:
                    row = int(rng.integers(1, 2**m))
                rows.append(row)
            return BitMatrix(n, m, tuple(rows))

        net = XorNet(n, m, matrix(), matrix() if levels == 2 else None)
        usage = rng.integers(0, 2, size=n)
        res = encode_usage(net, BitVec.from_bits(usage.tolist()), trial)
        expected = brute_encodable(
            net.level1.to_lists(),
            net.level2.to_lists() if net.level2 is not None else None,
            usage,
        )
        if (res.status is EncodeStatus.ENCODED) != expected:
            bad_verdicts += 1
        elif res.status is EncodeStatus.ENCODED:
            if any(res.gating[i] != 1 for i in np.flatnonzero(usage)):
                uncovered += 1
    ok = bad_verdicts == 0 and uncovered == 0
    _report(4, "encode verdicts match brute force on 500 (net, cube) pairs", ok,
            f"bad_verdicts={bad_verdicts}, uncovered={uncovered}")
    assert ok


def test_c05_odd_weight_nets_never_fail_encoding():
    rng = np.random.default_rng(1005)
    total_uns = 0
    for trial in range(200):
        n = int(rng.integers(2, 24))
        m = int(rng.integers(3, 13))
        rows = []
        for _ in range(n):
            w = int(rng.choice([w for w in (1, 3, 5, 7) if w <= m]))
            row = 0
            for col in rng.choice(m, size=w, replace=False):
                row |= 1 << int(col)
            rows.append(row)
        net = XorNet.from_matrices(BitMatrix(n, m, tuple(rows)))
        cubes = CubeSet.from_usages(
            ["".join(str(b) for b in rng.integers(0, 2, n)) for _ in range(20)]
        )
        total_uns += evaluate_xornet(net, cubes, 1.0, trial).uns
    ok = total_uns == 0
    _report(5, "all-odd-weight one-level nets encode every cube (200 nets)", ok,
            f"uns={total_uns}")
    assert ok


def test_c06_ga_invariants_on_reference_workload(workload, ga_nets):
    first = ga_nets[MASTER_SEEDS[0]]
    rerun = run_ga(workload, N_CONTROL, _ga_config(MASTER_SEEDS[0]))

    series = first.trace.best_fitness_series()
    nonincreasing = all(x >= y for x, y in zip(series, series[1:]))
    sizes_ok = (
        len(first.trace.records) == 20
        and len(first.trace.records[0].population_fitness) == 40
        and all(len(r.population_fitness) == 30 for r in first.trace.records[1:])
    )
    reproducible = (
        rerun.best == first.best and rerun.trace.records == first.trace.records
    )
    ok = nonincreasing and sizes_ok and reproducible
    _report(6, "GA trace nonincreasing, sizes stable, run bit-reproducible", ok,
            f"nonincreasing={nonincreasing}, sizes={sizes_ok}, reproducible={reproducible}")
    assert ok


def test_c07_ga_beats_baseline_on_ue(workload, baseline_net, ga_nets):
    wins = 0
    ga_ues = []
    base_ues = []
    for seed in MASTER_SEEDS:
        fill = derived_seed(stream_seed(seed, "encode-fill"), "evaluate")
        ga_ue = evaluate_xornet(ga_nets[seed].best, workload, SCA_LIMIT, fill).ue
        base_ue = evaluate_xornet(baseline_net, workload, SCA_LIMIT, fill).ue
        ga_ues.append(ga_ue)
        base_ues.append(base_ue)
        wins += ga_ue <= base_ue
    mean_ga = sum(ga_ues) / len(ga_ues)
    mean_base = sum(base_ues) / len(base_ues)
    ok = wins >= 9 and mean_ga < mean_base
    _report(7, "GA UE beats conventional UE across seeds", ok,
            f"wins={wins}/10, mean {mean_ga:.1f} vs {mean_base:.1f}")
    assert ok


def test_c08_ga_merges_into_fewer_patterns(workload, baseline_net, ga_nets):
    wins = 0
    pairs = []
    for seed in MASTER_SEEDS:
        fill = derived_seed(stream_seed(seed, "encode-fill"), "merge")
        ga_pc = incremental_merge(ga_nets[seed].best, workload, SCA_LIMIT, fill).pattern_count
        base_pc = incremental_merge(baseline_net, workload, SCA_LIMIT, fill).pattern_count
        pairs.append((ga_pc, base_pc))
        wins += ga_pc <= base_pc
    ok = wins >= 8
    _report(8, "GA net needs no more merged patterns than baseline", ok,
            f"wins={wins}/10, pairs={pairs}")
    assert ok


def test_c09_ue_identity_fuzz():
    rng = np.random.default_rng(1009)
    violations = 0
    for trial in range(10_000):
        n = int(rng.integers(2, 10))
        m = int(rng.integers(2, 7))
        rows = tuple(int(rng.integers(1, 2**m)) for _ in range(n))
        net = XorNet(n, m, BitMatrix(n, m, rows))
        cubes = CubeSet.from_usages(
            ["".join(str(b) for b in rng.integers(0, 2, n)) for _ in range(int(rng.integers(1, 6)))]
        )
        report = evaluate_xornet(net, cubes, float(rng.uniform(0.2, 1.0)), trial)
        if report.ue != report.uns + report.scae:
            violations += 1
    ok = violations == 0
    _report(9, "ue == uns + scae on 10,000 fuzzed evaluations", ok,
            f"violations={violations}")
    assert ok


def test_c10_cbc_sweep_rows_recompute_exactly(workload, tmp_path):
    cubes_file = tmp_path / "workload.txt"
    save_cubes(workload, cubes_file)
    config = {
        "n_chains": N_CHAINS,
        "n_control": N_CONTROL,
        "taps": 3,
        "levels": 1,
        "sca_limit": SCA_LIMIT,
        "cycle": {"d": 12, "c_in": 1, "n_cell": 328},
        "ga": {
            "size_pop": 40,
            "size_parents": 5,
            "size_children": 25,
            "size_gen": 20,
            "mutation_ratio": 0.05,
            "lam": 100.0,
            "stall_window": 20,
        },
        "workload": {"cubes": str(cubes_file)},
        "master_seed": 1,
        "out_dir": str(tmp_path / "out"),
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))
    cfg = ExperimentConfig.load(str(cfg_path))
    rows = run_sweep(cfg, [8, 10, 12, 16, 20])
    failures = []
    for row in rows:
        expected = total_cycles(
            CycleModel(row["cbc"], cfg.d, cfg.c_in, cfg.n_cell, row["pattern_count"])
        )
        if row["total_cycles"] != expected:
            failures.append(f"cbc={row['cbc']}: {row['total_cycles']} != {expected}")
    ok = len(rows) == 5 and not failures
    _report(10, "CBC sweep cycle totals recompute exactly from their rows", ok,
            "; ".join(failures) or f"cycles={[r['total_cycles'] for r in rows]}")
    assert ok

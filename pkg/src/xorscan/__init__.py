"""Testability-aware XOR-network scan-gating controllers.

Library for modeling XOR-network low-power scan controllers, measuring
their encodability and switching metrics on test-cube workloads, and
searching better controller matrices with a genetic algorithm.
"""

from .cubes import (
    CubeSet,
    TestCube,
    UsageProfile,
    generate_cubes,
    load_cubes,
    load_profile,
    profile_from_cubes,
    save_cubes,
    save_profile,
    skewed_profile,
)
from .ga import (
    GaConfig,
    GaResult,
    GaTrace,
    Individual,
    crossover,
    fitness,
    init_population,
    mutate,
    run_ga,
    select_parents,
    write_trace_csv,
)
from .gf2 import BitMatrix, BitVec, Gf2Solution, SolveStatus, gf2_solve, matvec_gf2
from .merge import MergedPattern, MergeReport, incremental_merge, save_merge_report
from .metrics import (
    CycleModel,
    EvalReport,
    evaluate_xornet,
    save_report,
    shift_transition_trace,
    total_cycles,
    transition_rate,
    write_per_cube_csv,
)
from .seeds import derived_seed, fill_word, stream_seed
from .xornet import (
    EncodeResult,
    EncodeStatus,
    XorNet,
    conventional_xornet,
    decode,
    encode,
    encode_usage,
    load_xornet,
    save_xornet,
)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "BitVec",
    "CubeSet",
    "CycleModel",
    "EncodeResult",
    "EncodeStatus",
    "EvalReport",
    "GaConfig",
    "GaResult",
    "GaTrace",
    "Gf2Solution",
    "Individual",
    "MergeReport",
    "MergedPattern",
    "SolveStatus",
    "TestCube",
    "UsageProfile",
    "XorNet",
    "conventional_xornet",
    "crossover",
    "decode",
    "derived_seed",
    "encode",
    "encode_usage",
    "evaluate_xornet",
    "fill_word",
    "fitness",
    "generate_cubes",
    "gf2_solve",
    "incremental_merge",
    "init_population",
    "load_cubes",
    "load_profile",
    "load_xornet",
    "matvec_gf2",
    "mutate",
    "profile_from_cubes",
    "run_ga",
    "save_cubes",
    "save_merge_report",
    "save_profile",
    "save_report",
    "save_xornet",
    "select_parents",
    "shift_transition_trace",
    "skewed_profile",
    "stream_seed",
    "total_cycles",
    "transition_rate",
    "write_per_cube_csv",
    "write_trace_csv",
]

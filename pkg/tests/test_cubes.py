"""Workload synthesis, profiling and cube file round-trips."""

import numpy as np
import pytest

from xorscan.cubes import (
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
from xorscan.gf2 import BitVec


def test_cube_cell_consistency():
    TestCube(BitVec.from_string("10"), ("01X", "XXX"))
    with pytest.raises(ValueError):
        TestCube(BitVec.from_string("10"), ("XXX", "XXX"))
    with pytest.raises(ValueError):
        TestCube(BitVec.from_string("01"), ("01X", "XXX"))
    with pytest.raises(ValueError):
        TestCube(BitVec.from_string("10"), ("012", "XXX"))
    with pytest.raises(ValueError):
        TestCube(BitVec.from_string("10"), ("01X",))


def test_cubeset_requires_consistent_chains():
    with pytest.raises(ValueError):
        CubeSet((TestCube(BitVec.from_string("10")), TestCube(BitVec.from_string("100"))), 2)


def test_generate_all_ones_profile():
    cubes = generate_cubes(UsageProfile(np.ones(6), 5), 0)
    assert len(cubes) == 5
    assert all(cube.usage == BitVec.ones(6) for cube in cubes)
    assert cubes.provenance == "synthetic"


def test_generate_single_hot_chain():
    probs = np.zeros(8)
    probs[0] = 1.0
    cubes = generate_cubes(UsageProfile(probs, 3), 0)
    assert all(cube.usage.to01() == "10000000" for cube in cubes)


def test_generate_rejects_degenerate_profiles():
    with pytest.raises(ValueError):
        generate_cubes(UsageProfile(np.zeros(4), 3), 0)
    with pytest.raises(ValueError):
        generate_cubes(UsageProfile(np.ones(4), 0), 0)


def test_generate_never_emits_all_zero_usage():
    probs = np.full(10, 0.02)
    cubes = generate_cubes(UsageProfile(probs, 500), 123)
    assert all(cube.usage.weight() > 0 for cube in cubes)


def test_generate_is_deterministic():
    prof = skewed_profile(16, 50)
    a = generate_cubes(prof, 7)
    b = generate_cubes(prof, 7)
    assert [c.usage for c in a] == [c.usage for c in b]


def _conditional_probs(probs: np.ndarray) -> np.ndarray:
    # all-zero draws are redrawn, so chain i lands with p_i / P(any chain set)
    return probs / (1.0 - np.prod(1.0 - probs))


def test_generated_frequencies_match_binomial_bounds():
    probs = np.full(16, 0.01)
    probs[2] = 0.16
    probs[3] = 0.16
    n = 10_000
    cubes = generate_cubes(UsageProfile(probs, n), 99)
    freq = profile_from_cubes(cubes).per_chain_prob
    expected = _conditional_probs(probs)
    sigma = np.sqrt(expected * (1 - expected) / n)
    assert (np.abs(freq - expected) <= 3 * sigma).all()


def test_profile_from_cubes_counts():
    cubes = CubeSet.from_usages(["10", "10", "01", "00"])
    prof = profile_from_cubes(cubes)
    assert prof.per_chain_prob.tolist() == [0.5, 0.25]
    assert prof.cube_count == 4

    single = profile_from_cubes(CubeSet.from_usages(["10"]))
    assert single.per_chain_prob.tolist() == [1.0, 0.0]


def test_profile_round_trip_statistics():
    prof = skewed_profile(12, 10_000, peak=0.5, floor=0.05, decay=4.0)
    recovered = profile_from_cubes(generate_cubes(prof, 5)).per_chain_prob
    expected = _conditional_probs(prof.per_chain_prob)
    sigma = np.sqrt(expected * (1 - expected) / 10_000)
    assert (np.abs(recovered - expected) <= 3 * sigma).all()


def test_profile_validation():
    with pytest.raises(ValueError):
        UsageProfile(np.array([0.5, 1.5]), 10)
    with pytest.raises(ValueError):
        UsageProfile(np.array([]), 10)


def test_profile_json_round_trip(tmp_path):
    prof = skewed_profile(8, 100)
    path = tmp_path / "profile.json"
    save_profile(prof, path)
    loaded = load_profile(path)
    assert loaded.cube_count == 100
    assert np.allclose(loaded.per_chain_prob, prof.per_chain_prob)


def test_cube_file_round_trip(tmp_path):
    cubes = CubeSet(
        (
            TestCube(BitVec.from_string("110"), ("01", "1X", "XX")),
            TestCube(BitVec.from_string("011")),
        ),
        3,
        provenance="file",
    )
    path = tmp_path / "cubes.txt"
    save_cubes(cubes, path)
    assert load_cubes(path) == cubes


def test_cube_file_round_trip_large(tmp_path):
    cubes = generate_cubes(skewed_profile(32, 1000), 3)
    path = tmp_path / "cubes.txt"
    save_cubes(cubes, path)
    loaded = load_cubes(path)
    assert loaded == cubes  # provenance tags differ but do not compare


def test_cube_file_parsing(tmp_path):
    path = tmp_path / "cubes.txt"
    path.write_text("# header\n110\n011\n")
    cubes = load_cubes(path)
    assert len(cubes) == 2
    assert cubes[0].usage.to01() == "110"

    path.write_text("")
    with pytest.raises(ValueError, match="no cubes"):
        load_cubes(path)

    path.write_text("110\n01x\n")
    with pytest.raises(ValueError, match=":2"):
        load_cubes(path)

    path.write_text("110\n0110\n")
    with pytest.raises(ValueError, match=":2"):
        load_cubes(path)

    path.write_text("10|XXX,XXX\n")
    with pytest.raises(ValueError, match=":1"):
        load_cubes(path)

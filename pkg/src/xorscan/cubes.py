"""Test-cube workloads: synthetic generation and file ingestion.

A test cube is reduced to its scan-chain usage vector (which chains carry
specified bits and must be enabled), optionally annotated with per-chain
cell values for transition-rate simulation. Real pattern generation is out
of scope; workloads are either synthesized from a per-chain usage profile
or loaded from a text file.

Cube file format, one cube per line::

    0110        usage bitstring, character i = chain i
    0110|XX,01,1X,XX   optional per-chain cells over {0,1,X}, comma separated

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .gf2 import BitVec
from .seeds import as_generator

_CELL_CHARS = {"0", "1", "X"}


@dataclass(frozen=True)
class TestCube:
    """Per-pattern scan-chain usage, optionally with cell values.

    When ``cell_values`` is present, a chain with any specified (non-X)
    cell must be marked used and an all-X chain must not be.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    usage: BitVec
    cell_values: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.cell_values is None:
            return
        if len(self.cell_values) != self.usage.length:
            raise ValueError(
                f"{len(self.cell_values)} cell strings for {self.usage.length} chains"
            )
        for i, cells in enumerate(self.cell_values):
            if set(cells) - _CELL_CHARS:
                raise ValueError(f"chain {i} cells contain characters outside 0/1/X")
            specified = any(c != "X" for c in cells)
            if specified != bool(self.usage[i]):
                raise ValueError(
                    f"chain {i}: usage bit {self.usage[i]} inconsistent with cells {cells!r}"
                )

    @property
    def n_chains(self) -> int:
        return self.usage.length


@dataclass(frozen=True)
class CubeSet:
    """Ordered collection of cubes sharing one chain count.

    ``provenance`` is a free-text origin tag and does not participate in
    equality, so a set survives a save/load round trip intact.
    """

    cubes: tuple[TestCube, ...]
    n_chains: int
    provenance: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        for i, cube in enumerate(self.cubes):
            if cube.n_chains != self.n_chains:
                raise ValueError(
                    f"cube {i} has {cube.n_chains} chains, expected {self.n_chains}"
                )

    @classmethod
    def from_usages(cls, usages, provenance: str = "") -> "CubeSet":
        cubes = tuple(
            TestCube(u if isinstance(u, BitVec) else BitVec.from_string(u))
            for u in usages
        )
        if not cubes:
            raise ValueError("no cubes")
        return cls(cubes, cubes[0].n_chains, provenance)

    def __len__(self) -> int:
        return len(self.cubes)

    def __iter__(self) -> Iterator[TestCube]:
        return iter(self.cubes)

    def __getitem__(self, i: int) -> TestCube:
        return self.cubes[i]

    def usage_ints(self) -> list[int]:
        return [cube.usage.value for cube in self.cubes]


@dataclass
class UsageProfile:
    """Per-chain specification probabilities plus a cube budget."""

    per_chain_prob: np.ndarray
    cube_count: int

    def __post_init__(self) -> None:
        self.per_chain_prob = np.asarray(self.per_chain_prob, dtype=np.float64)
        if self.per_chain_prob.ndim != 1 or self.per_chain_prob.size == 0:
            raise ValueError("per_chain_prob must be a nonempty 1-D array")
        if ((self.per_chain_prob < 0.0) | (self.per_chain_prob > 1.0)).any():
            raise ValueError("probabilities must lie in [0, 1]")
        if self.cube_count < 0:
            raise ValueError("cube_count must be nonnegative")

    @property
    def n_chains(self) -> int:
        return int(self.per_chain_prob.size)


def skewed_profile(
    n_chains: int,
    cube_count: int,
    peak: float = 0.45,
    floor: float = 0.01,
    decay: float = 6.0,
) -> UsageProfile:
    """Long-tailed usage profile: a few hot chains, many barely-used ones.

    Chain ``i`` is specified with probability ``floor + peak * exp(-i/decay)``,
    mimicking the uneven chain usage real designs exhibit.
    """
    i = np.arange(n_chains, dtype=np.float64)
    probs = floor + peak * np.exp(-i / decay)
    return UsageProfile(np.clip(probs, 0.0, 1.0), cube_count)


def generate_cubes(profile: UsageProfile, rng: int | np.random.Generator) -> CubeSet:
    """Draw usage vectors chain-independently from the profile.

    All-zero draws are rejected and redrawn: a cube specifying no chain
    detects nothing. A profile whose probabilities are all zero is
    therefore rejected outright.
    """
    if profile.cube_count < 1:
        raise ValueError("cube_count must be at least 1")
    if not (profile.per_chain_prob > 0.0).any():
        raise ValueError("all per-chain probabilities are zero; cubes would be empty")
    rng = as_generator(rng)
    probs = profile.per_chain_prob
    n = profile.n_chains
    cubes = []
    for _ in range(profile.cube_count):
        while True:
            draw = rng.random(n) < probs
            if draw.any():
                break
        value = int.from_bytes(np.packbits(draw, bitorder="little").tobytes(), "little")
        cubes.append(TestCube(BitVec(n, value)))
    return CubeSet(tuple(cubes), n, provenance="synthetic")


def profile_from_cubes(cubes: CubeSet) -> UsageProfile:
    """Empirical per-chain specification frequencies of a cube set."""
    if len(cubes) == 0:
        raise ValueError("empty cube set")
    counts = np.zeros(cubes.n_chains, dtype=np.int64)
    for cube in cubes:
        for i in cube.usage.indices():
            counts[i] += 1
    return UsageProfile(counts / len(cubes), len(cubes))


def save_profile(profile: UsageProfile, path: str | Path) -> None:
    d = {"per_chain_prob": profile.per_chain_prob.tolist(), "cube_count": profile.cube_count}
    Path(path).write_text(json.dumps(d, indent=2) + "\n")


def load_profile(path: str | Path) -> UsageProfile:
    d = json.loads(Path(path).read_text())
    return UsageProfile(np.asarray(d["per_chain_prob"], dtype=np.float64), int(d["cube_count"]))


def _format_cube(cube: TestCube) -> str:
    line = cube.usage.to01()
    if cube.cell_values is not None:
        line += "|" + ",".join(cube.cell_values)
    return line


def save_cubes(cube_set: CubeSet, path: str | Path) -> None:
    """Write the cube text format; loading it back is bit-exact."""
    lines = [_format_cube(cube) for cube in cube_set]
    Path(path).write_text("\n".join(lines) + "\n")


def load_cubes(path: str | Path, provenance: str = "file") -> CubeSet:
    """Parse the cube text format; errors name the offending line."""
    path = Path(path)
    cubes: list[TestCube] = []
    n_chains = -1
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        usage_part, sep, cells_part = line.partition("|")
        try:
            usage = BitVec.from_string(usage_part)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad usage bitstring: {exc}") from None
        cell_values = None
        if sep:
            cell_values = tuple(cells_part.split(","))
        if n_chains < 0:
            n_chains = usage.length
        elif usage.length != n_chains:
            raise ValueError(
                f"{path}:{lineno}: cube has {usage.length} chains, expected {n_chains}"
            )
        try:
            cubes.append(TestCube(usage, cell_values))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not cubes:
        raise ValueError(f"{path}: no cubes")
    return CubeSet(tuple(cubes), n_chains, provenance=provenance)

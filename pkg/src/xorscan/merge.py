"""Incremental merging of test cubes into test patterns.

Cubes are packed greedily, first fit in input order: each cube is tried
against the open patterns in creation order and joins the first one whose
merged usage still encodes within the activated-chain limit. A cube that
fits nowhere opens a new pattern if it encodes alone, otherwise it is
dropped. Fewer patterns means fewer tester cycles for the same cube set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cubes import CubeSet
from .gf2 import BitVec
from .seeds import fill_base, fill_word
from .xornet import XorNet, _encode_packed


@dataclass(frozen=True)
class MergedPattern:
    """One emitted pattern: member cubes, their OR-ed usage, and the
    control word (with its activated fraction) that encodes it."""

    members: tuple[int, ...]
    usage: BitVec
    control_word: BitVec
    sca: float


@dataclass(frozen=True)
class MergeReport:
    pattern_count: int
    patterns: tuple[MergedPattern, ...]
    dropped: tuple[int, ...]


def incremental_merge(
    net: XorNet,
    cubes: CubeSet,
    sca_limit: float,
    rng: int | np.random.Generator,
) -> MergeReport:
    """Greedy first-fit merging under encodability and the SCA limit.

    Every candidate merge is re-encoded from scratch; an accepted merge
    replaces the pattern's control word with the fresh solution. The fill
    bits of attempt ``k`` derive from ``(rng, k)``, making the whole run
    deterministic for a fixed seed.
    """
    if cubes.n_chains != net.n_chains:
        raise ValueError(
            f"cube set has {cubes.n_chains} chains, net has {net.n_chains}"
        )
    if not 0.0 < sca_limit <= 1.0:
        raise ValueError("sca_limit must lie in (0, 1]")
    base = fill_base(rng)
    rows1 = net.level1.data
    rows2 = net.level2.data if net.level2 is not None else None
    n = net.n_chains
    m = net.n_control

    # usage, members, control word, sca
    open_patterns: list[list] = []
    dropped: list[int] = []
    attempt = 0

    def try_encode(usage: int):
        nonlocal attempt
        # The gating must cover the usage, so the usage weight already
        # bounds the achievable SCA from below; skip hopeless solves.
        if usage.bit_count() / n > sca_limit:
            return None
        packed = _encode_packed(rows1, rows2, n, m, usage, fill_word(base, attempt, m))
        attempt += 1
        if packed is None or packed[2] > sca_limit:
            return None
        return packed

    for idx, cube in enumerate(cubes):
        u = cube.usage.value
        placed = False
        for pat in open_patterns:
            candidate = pat[0] | u
            packed = try_encode(candidate)
            if packed is not None:
                pat[0] = candidate
                pat[1].append(idx)
                pat[2], _, pat[3] = packed
                placed = True
                break
        if placed:
            continue
        packed = try_encode(u)
        if packed is None:
            dropped.append(idx)
        else:
            open_patterns.append([u, [idx], packed[0], packed[2]])

    patterns = tuple(
        MergedPattern(
            members=tuple(members),
            usage=BitVec(n, usage),
            control_word=BitVec(m, z),
            sca=sca,
        )
        for usage, members, z, sca in open_patterns
    )
    return MergeReport(
        pattern_count=len(patterns), patterns=patterns, dropped=tuple(dropped)
    )


def merge_report_to_dict(report: MergeReport) -> dict:
    return {
        "pattern_count": report.pattern_count,
        "dropped": list(report.dropped),
        "patterns": [
            {
                "members": list(p.members),
                "usage": p.usage.to01(),
                "control_word": p.control_word.to01(),
                "sca": p.sca,
            }
            for p in report.patterns
        ],
    }


def save_merge_report(
    report: MergeReport, path: str | Path, extra: dict | None = None
) -> None:
    d = merge_report_to_dict(report)
    if extra:
        d.update(extra)
    Path(path).write_text(json.dumps(d, indent=2) + "\n")

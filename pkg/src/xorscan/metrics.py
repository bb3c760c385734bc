"""Encodability and power metrics for gating controllers.

For a cube set and a controller, the headline counts are:

* ``uns``: cubes whose gating constraints form an inconsistent system,
* ``scae``: encoded cubes whose activated-chain fraction exceeds the limit,
* ``ue = uns + scae``: cubes that fail encoding one way or the other,
* ``mean_sca``: average activated-chain fraction over encoded cubes.

Shift-power is estimated per clock as the fraction of scan cells that
toggle; the total-testing-cycle model converts a pattern count into tester
cycles.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .cubes import CubeSet
from .gf2 import BitVec
from .seeds import fill_base, fill_word
from .xornet import EncodeStatus, XorNet, _encode_packed


@dataclass(frozen=True)
class CubeOutcome:
    status: EncodeStatus
    sca: float | None


@dataclass(frozen=True)
class EvalReport:
    """Metric bundle for one controller on one cube set."""

    uns: int
    scae: int
    ue: int
    mean_sca: float
    encoded_count: int
    sca_limit: float
    per_cube: tuple[CubeOutcome, ...] | None = None

    def __post_init__(self) -> None:
        if self.ue != self.uns + self.scae:
            raise ValueError("ue must equal uns + scae")
        if not 0.0 <= self.mean_sca <= 1.0:
            raise ValueError("mean_sca must lie in [0, 1]")
        if self.scae > self.encoded_count:
            raise ValueError("scae cannot exceed the encoded count")


def evaluate_xornet(
    net: XorNet,
    cubes: CubeSet,
    sca_limit: float,
    rng: int | np.random.Generator,
    keep_per_cube: bool = False,
) -> EvalReport:
    """Encode every cube and tally the failure and power counts.

    The fill bits for cube ``i`` derive from ``(rng, i)`` alone, so
    per-cube results do not depend on evaluation order. Solvability never
    depends on the fill, hence ``uns`` is seed-independent.
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
    uns = 0
    scae = 0
    encoded = 0
    sca_sum = 0.0
    outcomes: list[CubeOutcome] | None = [] if keep_per_cube else None
    for i, cube in enumerate(cubes):
        packed = _encode_packed(rows1, rows2, n, m, cube.usage.value, fill_word(base, i, m))
        if packed is None:
            uns += 1
            if outcomes is not None:
                outcomes.append(CubeOutcome(EncodeStatus.UNSOLVABLE, None))
            continue
        sca = packed[2]
        encoded += 1
        sca_sum += sca
        if sca > sca_limit:
            scae += 1
        if outcomes is not None:
            outcomes.append(CubeOutcome(EncodeStatus.ENCODED, sca))
    mean_sca = sca_sum / encoded if encoded else 0.0
    return EvalReport(
        uns=uns,
        scae=scae,
        ue=uns + scae,
        mean_sca=mean_sca,
        encoded_count=encoded,
        sca_limit=sca_limit,
        per_cube=tuple(outcomes) if outcomes is not None else None,
    )


def _norm_cells(cells) -> list[int]:
    out = []
    for c in cells:
        b = int(c) if not isinstance(c, str) else {"0": 0, "1": 1}.get(c, -1)
        if b not in (0, 1):
            raise ValueError(f"cell value {c!r} is not 0 or 1")
        out.append(b)
    return out


def transition_rate(prev_states: Sequence, next_states: Sequence) -> float:
    """Fraction of scan cells whose value changes between two states.

    Both arguments are per-chain cell sequences (strings or int lists)
    with matching shapes and fully specified 0/1 values.
    """
    if len(prev_states) != len(next_states):
        raise ValueError("chain counts differ")
    flips = 0
    total = 0
    for i, (prev, nxt) in enumerate(zip(prev_states, next_states)):
        p = _norm_cells(prev)
        q = _norm_cells(nxt)
        if len(p) != len(q):
            raise ValueError(f"chain {i}: cell counts differ ({len(p)} vs {len(q)})")
        flips += sum(a != b for a, b in zip(p, q))
        total += len(p)
    if total == 0:
        raise ValueError("no cells")
    return flips / total


def shift_transition_trace(
    chain_states: Sequence,
    load_values: Sequence,
    gating: BitVec,
    fill_value: int = 0,
) -> list[float]:
    """Per-shift-cycle transition rates while scanning load values in.

    Every chain is a shift register moving cells toward index 0 with the
    scan input at the last cell. Chains gated off shift the constant
    ``fill_value`` instead of their load sequence. Element ``t`` of the
    trace compares whole-register state ``t+1`` against state ``t``; its
    maximum is what a per-cycle power cap is checked against. Each load
    sequence must match its chain's length; chains whose loads are
    exhausted hold their state.
    """
    if len(chain_states) != len(load_values):
        raise ValueError("chain_states and load_values differ in chain count")
    if gating.length != len(chain_states):
        raise ValueError("gating length does not match chain count")
    if fill_value not in (0, 1):
        raise ValueError("fill_value must be 0 or 1")
    states = [_norm_cells(c) for c in chain_states]
    loads = [_norm_cells(c) for c in load_values]
    for i, (s, l) in enumerate(zip(states, loads)):
        if len(s) != len(l):
            raise ValueError(f"chain {i}: load length {len(l)} != chain length {len(s)}")
    total_cells = sum(len(s) for s in states)
    if total_cells == 0:
        raise ValueError("no cells")
    cycles = max(len(s) for s in states)
    trace = []
    for t in range(cycles):
        flips = 0
        for i, state in enumerate(states):
            if t >= len(state):
                continue
            in_bit = loads[i][t] if gating[i] else fill_value
            new = state[1:] + [in_bit]
            flips += sum(a != b for a, b in zip(state, new))
            states[i] = new
        trace.append(flips / total_cells)
    return trace


@dataclass(frozen=True)
class CycleModel:
    """Tester-cycle model: per-pattern setup plus shift, times pattern count.

    ``cbc`` control bits and ``d`` decompressor configuration bits are
    delivered over ``c_in`` input channels, then ``n_cell`` shift cycles
    load the longest chain.
    """

    cbc: int
    d: int
    c_in: int
    n_cell: int
    pattern_count: int

    def __post_init__(self) -> None:
        if self.c_in < 1:
            raise ValueError("c_in must be at least 1")
        if min(self.cbc, self.d, self.n_cell, self.pattern_count) < 0:
            raise ValueError("counts must be nonnegative")


def total_cycles(model: CycleModel) -> int:
    """Total testing cycles: ``(ceil((cbc + d) / c_in) + n_cell) * patterns``."""
    per_pattern = -(-(model.cbc + model.d) // model.c_in) + model.n_cell
    return per_pattern * model.pattern_count


def report_to_dict(report: EvalReport) -> dict:
    d = {
        "uns": report.uns,
        "scae": report.scae,
        "ue": report.ue,
        "mean_sca": report.mean_sca,
        "encoded_count": report.encoded_count,
        "sca_limit": report.sca_limit,
    }
    if report.per_cube is not None:
        d["per_cube"] = [
            {"status": o.status.value, "sca": o.sca} for o in report.per_cube
        ]
    return d


def save_report(report: EvalReport, path: str | Path, extra: dict | None = None) -> None:
    d = report_to_dict(report)
    if extra:
        d.update(extra)
    Path(path).write_text(json.dumps(d, indent=2) + "\n")


def write_per_cube_csv(report: EvalReport, path: str | Path) -> None:
    if report.per_cube is None:
        raise ValueError("report was built without per-cube outcomes")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cube_index", "status", "sca"])
        for i, o in enumerate(report.per_cube):
            writer.writerow([i, o.status.value, "" if o.sca is None else f"{o.sca:.6f}"])

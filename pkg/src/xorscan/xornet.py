"""XOR-network gating controllers.

A controller expands an M-bit control word into one gating signal per
scan chain. Level 1 is a binary matrix whose row ``i`` selects the
control bits XORed together for chain ``i``; an optional level-2 matrix
ANDs a second XOR output onto each gating signal for stricter power
budgets. Encoding a test cube means solving for a control word that
drives every specified chain's gating signal to 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, BitVec, _solve_packed
from .seeds import fill_base, fill_word


@dataclass(frozen=True)
class XorNet:
    """Gating controller with N chains driven from M control bits."""

    n_chains: int
    n_control: int
    level1: BitMatrix
    level2: BitMatrix | None = None

    def __post_init__(self) -> None:
        if self.n_chains < 1 or self.n_control < 1:
            raise ValueError("need at least one chain and one control bit")
        if (self.level1.n_rows, self.level1.n_cols) != (self.n_chains, self.n_control):
            raise ValueError(
                f"level1 is {self.level1.n_rows}x{self.level1.n_cols}, "
                f"expected {self.n_chains}x{self.n_control}"
            )
        for i, row in enumerate(self.level1.data):
            if row == 0:
                raise ValueError(f"level1 row {i} is all-zero; chain {i} could never be enabled")
        if self.level2 is not None:
            if (self.level2.n_rows, self.level2.n_cols) != (self.n_chains, self.n_control):
                raise ValueError(
                    f"level2 is {self.level2.n_rows}x{self.level2.n_cols}, "
                    f"expected {self.n_chains}x{self.n_control}"
                )

    @classmethod
    def from_matrices(cls, level1: BitMatrix, level2: BitMatrix | None = None) -> "XorNet":
        return cls(level1.n_rows, level1.n_cols, level1, level2)

    @property
    def levels(self) -> int:
        return 1 if self.level2 is None else 2


class EncodeStatus(Enum):
    ENCODED = "encoded"
    UNSOLVABLE = "unsolvable"


@dataclass(frozen=True)
class EncodeResult:
    """Outcome of encoding one cube: control word, gating vector and the
    fraction of chains the gating enables (``sca``)."""

    status: EncodeStatus
    control_word: BitVec | None = None
    gating: BitVec | None = None
    sca: float | None = None

    @property
    def encoded(self) -> bool:
        return self.status is EncodeStatus.ENCODED


def _random_taps_matrix(n_rows: int, n_cols: int, taps: int, seed: int) -> BitMatrix:
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_rows):
        value = 0
        for col in rng.choice(n_cols, size=taps, replace=False):
            value |= 1 << int(col)
        rows.append(value)
    return BitMatrix(n_rows, n_cols, tuple(rows))


def conventional_xornet(
    n_chains: int, n_control: int, taps_per_chain: int = 3, levels: int = 1
) -> XorNet:
    """Industry-style random controller.

    Each chain is fed by exactly ``taps_per_chain`` distinct control bits
    chosen uniformly. The generator is seeded with the chain count, so two
    designs with equal chain counts share one controller; a two-level net
    draws its second matrix from seed ``n_chains + 1``.
    """
    if not 1 <= taps_per_chain <= n_control:
        raise ValueError(
            f"taps_per_chain must be in 1..{n_control}, got {taps_per_chain}"
        )
    if levels not in (1, 2):
        raise ValueError("levels must be 1 or 2")
    level1 = _random_taps_matrix(n_chains, n_control, taps_per_chain, seed=n_chains)
    level2 = None
    if levels == 2:
        level2 = _random_taps_matrix(n_chains, n_control, taps_per_chain, seed=n_chains + 1)
    return XorNet(n_chains, n_control, level1, level2)


def _decode_packed(rows1: tuple[int, ...], rows2: tuple[int, ...] | None, z: int) -> int:
    gating = 0
    for i, row in enumerate(rows1):
        gating |= ((row & z).bit_count() & 1) << i
    if rows2 is not None:
        mask = 0
        for i, row in enumerate(rows2):
            mask |= ((row & z).bit_count() & 1) << i
        gating &= mask
    return gating


def decode(net: XorNet, control_word: BitVec) -> BitVec:
    """Expand a control word into the per-chain gating vector."""
    if control_word.length != net.n_control:
        raise ValueError(
            f"control word length {control_word.length} does not match "
            f"{net.n_control} control bits"
        )
    rows2 = net.level2.data if net.level2 is not None else None
    return BitVec(net.n_chains, _decode_packed(net.level1.data, rows2, control_word.value))


def _encode_packed(
    rows1: tuple[int, ...],
    rows2: tuple[int, ...] | None,
    n_chains: int,
    n_control: int,
    usage: int,
    fill: int,
) -> tuple[int, int, float] | None:
    """Encode a packed usage vector; returns ``(z, gating, sca)`` or None.

    Builds one constraint row per specified chain (two for two-level nets,
    both XOR outputs must be 1) with duplicate rows dropped, solves it, and
    decodes the full gating vector from the solution.
    """
    rhs_bit = 1 << n_control
    aug: list[int] = []
    seen: set[int] = set()
    u = usage
    while u:
        lsb = u & -u
        i = lsb.bit_length() - 1
        u ^= lsb
        a = rows1[i] | rhs_bit
        if a not in seen:
            seen.add(a)
            aug.append(a)
        if rows2 is not None:
            b = rows2[i] | rhs_bit
            if b not in seen:
                seen.add(b)
                aug.append(b)
    ok, z, _ = _solve_packed(aug, n_control, fill)
    if not ok:
        return None
    gating = _decode_packed(rows1, rows2, z)
    return z, gating, gating.bit_count() / n_chains


def encode_usage(
    net: XorNet, usage: BitVec, rng: int | np.random.Generator
) -> EncodeResult:
    """Encode a usage vector: find a control word enabling every set chain.

    Unspecified chains carry no constraint; whatever their gating signals
    decode to is reflected in ``sca``. Free control bits are random-filled
    from ``rng``. An inconsistent system yields ``UNSOLVABLE``, which is a
    domain outcome rather than an error.
    """
    if usage.length != net.n_chains:
        raise ValueError(
            f"usage length {usage.length} does not match {net.n_chains} chains"
        )
    fill = fill_word(fill_base(rng), 0, net.n_control)
    rows2 = net.level2.data if net.level2 is not None else None
    packed = _encode_packed(
        net.level1.data, rows2, net.n_chains, net.n_control, usage.value, fill
    )
    if packed is None:
        return EncodeResult(EncodeStatus.UNSOLVABLE)
    z, gating, sca = packed
    return EncodeResult(
        EncodeStatus.ENCODED,
        control_word=BitVec(net.n_control, z),
        gating=BitVec(net.n_chains, gating),
        sca=sca,
    )


def encode(net: XorNet, cube, rng: int | np.random.Generator) -> EncodeResult:
    """Encode a test cube (see :func:`encode_usage`)."""
    return encode_usage(net, cube.usage, rng)


def xornet_to_dict(net: XorNet) -> dict:
    out = {
        "n_chains": net.n_chains,
        "n_control": net.n_control,
        "levels": net.levels,
        "level1": [row.to01() for row in net.level1.iter_rows()],
    }
    if net.level2 is not None:
        out["level2"] = [row.to01() for row in net.level2.iter_rows()]
    return out


def xornet_from_dict(d: dict) -> XorNet:
    n_chains = int(d["n_chains"])
    n_control = int(d["n_control"])
    levels = int(d.get("levels", 1))
    level1 = BitMatrix.from_strings(d["level1"])
    level2 = BitMatrix.from_strings(d["level2"]) if levels == 2 else None
    return XorNet(n_chains, n_control, level1, level2)


def save_xornet(net: XorNet, path: str | Path, provenance: dict | None = None) -> None:
    d = xornet_to_dict(net)
    if provenance:
        d["provenance"] = provenance
    Path(path).write_text(json.dumps(d, indent=2) + "\n")


def load_xornet(path: str | Path) -> XorNet:
    return xornet_from_dict(json.loads(Path(path).read_text()))

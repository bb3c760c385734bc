"""Packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers, one bit per
coordinate with bit ``j`` holding coordinate ``j``, so XOR, AND and
popcount run one machine word at a time regardless of width.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

from .seeds import fill_word, fill_base


@dataclass(frozen=True)
class BitVec:
    """Fixed-length bit vector over GF(2).

    ``value`` packs the coordinates little-endian; bits at or beyond
    ``length`` are always zero.
    """

    length: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.value < 0 or self.value >> self.length:
            raise ValueError("value has bits beyond the declared length")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        value = 0
        n = 0
        for n, b in enumerate(bits, start=1):
            if b not in (0, 1):
                raise ValueError(f"bit value {b!r} is not 0 or 1")
            value |= b << (n - 1)
        return cls(n, value)

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        """Parse ``"0110..."``; character ``j`` is coordinate ``j``."""
        if set(s) - {"0", "1"}:
            raise ValueError(f"bit string contains characters other than 0/1: {s!r}")
        return cls(len(s), int(s[::-1], 2) if s else 0)

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVec":
        return cls(length, (1 << length) - 1)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self) -> Iterator[int]:
        v = self.value
        for _ in range(self.length):
            yield v & 1
            v >>= 1

    def _check_same_length(self, other: "BitVec") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.length, self.value ^ other.value)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.length, self.value & other.value)

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check_same_length(other)
        return BitVec(self.length, self.value | other.value)

    def weight(self) -> int:
        """Number of set coordinates."""
        return self.value.bit_count()

    def bits(self) -> list[int]:
        return list(self)

    def indices(self) -> list[int]:
        """Indices of the set coordinates, ascending."""
        out = []
        v = self.value
        while v:
            lsb = v & -v
            out.append(lsb.bit_length() - 1)
            v ^= lsb
        return out

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self)


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix stored as packed integer rows."""

    n_rows: int
    n_cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.data) != self.n_rows:
            raise ValueError(f"expected {self.n_rows} rows, got {len(self.data)}")
        for i, r in enumerate(self.data):
            if r < 0 or r >> self.n_cols:
                raise ValueError(f"row {i} has bits beyond column {self.n_cols - 1}")

    @classmethod
    def from_rows(cls, rows: Iterable[BitVec]) -> "BitMatrix":
        rows = list(rows)
        if not rows:
            raise ValueError("cannot infer column count from zero rows")
        n_cols = rows[0].length
        for i, r in enumerate(rows):
            if r.length != n_cols:
                raise ValueError(f"row {i} has length {r.length}, expected {n_cols}")
        return cls(len(rows), n_cols, tuple(r.value for r in rows))

    @classmethod
    def from_bits(cls, rows: Iterable[Iterable[int]]) -> "BitMatrix":
        return cls.from_rows([BitVec.from_bits(r) for r in rows])

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "BitMatrix":
        return cls.from_rows([BitVec.from_string(r) for r in rows])

    def row(self, i: int) -> BitVec:
        return BitVec(self.n_cols, self.data[i])

    def row_weight(self, i: int) -> int:
        return self.data[i].bit_count()

    def iter_rows(self) -> Iterator[BitVec]:
        for r in self.data:
            yield BitVec(self.n_cols, r)

    def to_lists(self) -> list[list[int]]:
        return [row.bits() for row in self.iter_rows()]

    def to_array(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8).reshape(self.n_rows, self.n_cols)


class SolveStatus(Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class Gf2Solution:
    """Outcome of solving a GF(2) linear system.

    ``assignment`` is present unless the system is inconsistent;
    ``free_var_count`` is the number of non-pivot variables.
    """

    status: SolveStatus
    assignment: BitVec | None
    free_var_count: int


def _solve_packed(aug_rows: list[int], n_cols: int, fill: int) -> tuple[bool, int, int]:
    """Gauss-Jordan elimination on packed augmented rows.

    Bit ``n_cols`` of each row holds the right-hand side. Pivots are chosen
    leftmost column first, topmost remaining row within the column. ``fill``
    supplies the values of free (non-pivot) variables. Returns
    ``(consistent, assignment, free_var_count)``; the assignment is only
    meaningful when consistent.
    """
    rows = list(aug_rows)
    n = len(rows)
    rank = 0
    piv_cols: list[int] = []
    for col in range(n_cols):
        mask = 1 << col
        pivot = -1
        for i in range(rank, n):
            if rows[i] & mask:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for i in range(n):
            if i != rank and rows[i] & mask:
                rows[i] ^= prow
        piv_cols.append(col)
        rank += 1
        if rank == n:
            break

    rhs_bit = 1 << n_cols
    for i in range(rank, n):
        if rows[i] & rhs_bit:
            return False, 0, n_cols - rank

    free_mask = (1 << n_cols) - 1
    for col in piv_cols:
        free_mask ^= 1 << col
    z = fill & free_mask
    # After full elimination each pivot row touches only its own pivot
    # column plus free columns, so back-substitution is order-free.
    for k, col in enumerate(piv_cols):
        row = rows[k]
        bit = ((row >> n_cols) ^ (row & z).bit_count()) & 1
        z |= bit << col
    return True, z, n_cols - rank


def gf2_solve(
    constraints: BitMatrix, rhs: BitVec, rng: int | np.random.Generator
) -> Gf2Solution:
    """Solve ``constraints @ z = rhs`` over GF(2).

    Free variables are filled with uniform random bits drawn from ``rng``
    (one fill word per call), so repeated calls with an identically seeded
    stream return identical assignments. An empty system (zero rows) is
    underdetermined with a fully random assignment.
    """
    if constraints.n_rows != rhs.length:
        raise ValueError(
            f"rhs length {rhs.length} does not match row count {constraints.n_rows}"
        )
    if constraints.n_cols < 1:
        raise ValueError("system must have at least one variable")
    n_cols = constraints.n_cols
    fill = fill_word(fill_base(rng), 0, n_cols)
    aug = [
        row | (((rhs.value >> i) & 1) << n_cols)
        for i, row in enumerate(constraints.data)
    ]
    ok, z, free = _solve_packed(aug, n_cols, fill)
    if not ok:
        return Gf2Solution(SolveStatus.INCONSISTENT, None, free)
    status = SolveStatus.UNIQUE if free == 0 else SolveStatus.UNDERDETERMINED
    return Gf2Solution(status, BitVec(n_cols, z), free)


def matvec_gf2(m: BitMatrix, v: BitVec) -> BitVec:
    """Matrix-vector product over GF(2): ``result[i] = parity(row_i & v)``."""
    if v.length != m.n_cols:
        raise ValueError(f"vector length {v.length} does not match {m.n_cols} columns")
    out = 0
    vv = v.value
    for i, row in enumerate(m.data):
        out |= ((row & vv).bit_count() & 1) << i
    return BitVec(m.n_rows, out)

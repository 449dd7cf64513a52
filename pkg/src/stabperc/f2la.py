"""Bit-packed linear algebra over GF(2): vectors, matrices, rank, kernels.

Rows live in Python integers (bit i = column i). Rank queries go through a
backend kernel: the compiled extension `_f2core` when available, else the
pure-Python `_f2py`. Set STABPERC_PURE=1 to force the fallback. Matrices are
immutable after construction; elimination always works on copies, so values
can be shared freely across threads and Monte-Carlo trials.
"""

from __future__ import annotations

import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._bits import int_to_words, words_needed

if os.environ.get("STABPERC_PURE"):
    from . import _f2py as _backend
else:
    try:
        from . import _f2core as _backend  # type: ignore[no-redef]
    except ImportError:
        from . import _f2py as _backend  # type: ignore[no-redef]

__all__ = [
    "BitVector",
    "BitMatrix",
    "backend_name",
    "rank",
    "rank_masked",
    "kernel_basis",
    "row_space_contains",
    "restrict_columns",
    "mat_vec",
]


def backend_name() -> str:
    """Name of the active rank kernel: 'compiled' or 'pure'."""
    return _backend.BACKEND


@dataclass(frozen=True)
class BitVector:
    """Immutable vector over GF(2), packed into one integer (bit i = entry i)."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("bits outside vector length")

    @classmethod
    def from_bits(cls, entries: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for e in entries:
            if e:
                bits |= 1 << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range")
            bits |= 1 << i
        return cls(n, bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def complement(self) -> "BitVector":
        return BitVector(self.n, self.bits ^ ((1 << self.n) - 1))

    def _check(self, other: "BitVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.bits ^ other.bits)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.bits & other.bits)

    def __or__(self, other: "BitVector") -> "BitVector":
        self._check(other)
        return BitVector(self.n, self.bits | other.bits)

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))


class BitMatrix:
    """Immutable matrix over GF(2); each row is an integer over `cols` bits."""

    def __init__(self, row_ints: Iterable[int], cols: int):
        rows = tuple(int(r) for r in row_ints)
        if cols < 0:
            raise ValueError("negative column count")
        for r in rows:
            if r < 0 or r >> cols:
                raise ValueError("row has bits outside column range")
        self.row_bits = rows
        self.cols = cols

    @classmethod
    def from_rows(cls, vectors: Sequence[BitVector]) -> "BitMatrix":
        if not vectors:
            raise ValueError("cannot infer column count from no rows")
        cols = vectors[0].n
        for v in vectors:
            if v.n != cols:
                raise ValueError("ragged rows")
        return cls((v.bits for v in vectors), cols)

    @classmethod
    def from_supports(cls, cols: int, supports: Iterable[Iterable[int]]) -> "BitMatrix":
        return cls((BitVector.from_indices(cols, s).bits for s in supports), cols)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "BitMatrix":
        return cls((0,) * rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls((1 << i for i in range(n)), n)

    @property
    def rows(self) -> int:
        return len(self.row_bits)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    @cached_property
    def _nwords(self) -> int:
        return words_needed(self.cols)

    @cached_property
    def _packed(self):
        return _backend.pack(self.row_bits, self.cols, self._nwords)

    @cached_property
    def _pivots(self) -> dict[int, int]:
        """Row-space basis keyed by leading (highest) bit, for membership tests."""
        piv: dict[int, int] = {}
        for row in self.row_bits:
            row = _reduce(row, piv)
            if row:
                piv[row.bit_length() - 1] = row
        return piv

    @cached_property
    def column_bits(self) -> tuple[int, ...]:
        """Column j as an integer over row indices (bit i = entry (i, j))."""
        cols = [0] * self.cols
        for i, row in enumerate(self.row_bits):
            bit = 1 << i
            while row:
                j = (row & -row).bit_length() - 1
                cols[j] |= bit
                row &= row - 1
        return tuple(cols)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.row_bits))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _reduce(v: int, pivots: dict[int, int]) -> int:
    while v:
        top = v.bit_length() - 1
        row = pivots.get(top)
        if row is None:
            return v
        v ^= row
    return v


def rank(M: BitMatrix) -> int:
    """Gaussian-elimination rank over GF(2)."""
    return int(_backend.rank(M._packed))


def rank_masked(M: BitMatrix, column_mask: int | BitVector) -> int:
    """Rank of the submatrix of the columns selected by `column_mask`.

    Computed by zeroing the unselected columns, which has the same rank as
    the compacted submatrix; this is the hot path behind every erasure and
    cluster query.
    """
    if isinstance(column_mask, BitVector):
        if column_mask.n != M.cols:
            raise ValueError("mask length mismatch")
        column_mask = column_mask.bits
    return int(_backend.rank_masked(M._packed, int_to_words(column_mask, M._nwords)))


def kernel_basis(M: BitMatrix) -> list[BitVector]:
    """Basis of {v : M v = 0}, ordered by ascending free column."""
    pivcol: dict[int, int] = {}
    for row in M.row_bits:
        for c in list(pivcol):
            if (row >> c) & 1:
                row ^= pivcol[c]
        if row:
            c = row.bit_length() - 1
            for cc in list(pivcol):
                if (pivcol[cc] >> c) & 1:
                    pivcol[cc] ^= row
            pivcol[c] = row
    basis = []
    for f in range(M.cols):
        if f in pivcol:
            continue
        v = 1 << f
        for c, row in pivcol.items():
            if (row >> f) & 1:
                v |= 1 << c
        basis.append(BitVector(M.cols, v))
    return basis


def row_space_contains(M: BitMatrix, v: BitVector) -> bool:
    """True iff v is an F2 combination of the rows of M."""
    if v.n != M.cols:
        raise ValueError("length mismatch")
    return _reduce(v.bits, M._pivots) == 0


def restrict_columns(M: BitMatrix, mask: BitVector) -> BitMatrix:
    """Submatrix of the columns selected by mask, relative order preserved."""
    if mask.n != M.cols:
        raise ValueError("mask length mismatch")
    positions = mask.indices()
    new_rows = []
    for row in M.row_bits:
        bits = 0
        for dst, src in enumerate(positions):
            bits |= ((row >> src) & 1) << dst
        new_rows.append(bits)
    return BitMatrix(new_rows, len(positions))


def mat_vec(M: BitMatrix, v: BitVector) -> BitVector:
    """Matrix-vector product over GF(2): bit i = parity of row_i AND v."""
    if v.n != M.cols:
        raise ValueError("length mismatch")
    bits = 0
    for i, row in enumerate(M.row_bits):
        bits |= ((row & v.bits).bit_count() & 1) << i
    return BitVector(M.rows, bits)

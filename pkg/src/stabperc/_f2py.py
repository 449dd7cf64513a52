"""Pure-Python GF(2) rank kernels over big-integer bit rows.

Fallback backend with the same call surface as the compiled module
`_f2core`; see `f2la` for the selection logic. Rows and masks cross the
boundary as uint64 word arrays, but internally everything is an arbitrary
precision integer, which keeps the elimination loops short and fast enough
for desk-scale inputs.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ._bits import words_to_int

BACKEND = "pure"

__all__ = ["BACKEND", "pack", "rank", "rank_masked", "rank_masked_many", "rank_sums_by_weight"]


class _Packed:
    __slots__ = ("rows", "cols", "nwords")

    def __init__(self, rows: tuple[int, ...], cols: int, nwords: int):
        self.rows = rows
        self.cols = cols
        self.nwords = nwords


def pack(row_ints: Sequence[int], cols: int, nwords: int) -> _Packed:
    """Freeze a row list for repeated rank queries."""
    return _Packed(tuple(row_ints), cols, nwords)


def _rank_ints(rows) -> int:
    basis: list[int] = []
    r = 0
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            r += 1
    return r


def rank(packed: _Packed) -> int:
    return _rank_ints(packed.rows)


def rank_masked(packed: _Packed, mask_words: np.ndarray) -> int:
    mask = words_to_int(mask_words)
    return _rank_ints(row & mask for row in packed.rows)


def rank_masked_many(packed: _Packed, masks: np.ndarray) -> np.ndarray:
    out = np.empty(masks.shape[0], dtype=np.int64)
    rows = packed.rows
    for t in range(masks.shape[0]):
        mask = words_to_int(masks[t])
        out[t] = _rank_ints(row & mask for row in rows)
    return out


def rank_sums_by_weight(packed: _Packed, group_words: np.ndarray) -> np.ndarray:
    """Sum of rank(rows & mask) over all subsets of groups, binned by subset size.

    Groups must be pairwise disjoint column sets, so the running subset mask
    can be maintained by XOR along a Gray-code walk.
    """
    groups = [words_to_int(group_words[i]) for i in range(group_words.shape[0])]
    n = len(groups)
    sums = np.zeros(n + 1, dtype=np.int64)
    rows = packed.rows
    mask = 0
    subset = 0
    weight = 0
    # subset 0 contributes rank 0 to sums[0]
    for i in range(1, 1 << n):
        t = (i & -i).bit_length() - 1
        bit = 1 << t
        subset ^= bit
        mask ^= groups[t]
        weight += 1 if subset & bit else -1
        sums[weight] += _rank_ints(row & mask for row in rows)
    return sums

"""Conversions between Python integers and little-endian uint64 word arrays.

Both rank backends exchange masks and rows in this packed form; everything
else in the package manipulates plain Python integers as bit sets.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

__all__ = ["words_needed", "int_to_words", "words_to_int", "ints_to_words"]


def words_needed(cols: int) -> int:
    """Number of 64-bit words needed for a row of `cols` bits (at least 1)."""
    return max(1, (cols + 63) // 64)


def int_to_words(x: int, nwords: int) -> np.ndarray:
    """Pack a nonnegative integer into `nwords` little-endian uint64 words."""
    return np.frombuffer(x.to_bytes(nwords * 8, "little"), dtype="<u8").copy()


def words_to_int(words: np.ndarray) -> int:
    """Inverse of int_to_words."""
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


def ints_to_words(xs: Sequence[int], nwords: int) -> np.ndarray:
    """Pack a sequence of integers into a C-contiguous (len, nwords) array."""
    buf = b"".join(x.to_bytes(nwords * 8, "little") for x in xs)
    out = np.frombuffer(buf, dtype="<u8").reshape(len(xs), nwords) if xs else np.zeros((0, nwords), dtype="<u8")
    return np.ascontiguousarray(out)

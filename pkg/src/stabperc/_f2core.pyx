# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(2) rank kernels over bit-packed uint64 rows.

Same call surface as the pure-Python fallback `_f2py`; `f2la` picks one at
import time. Masks and rows cross the boundary as little-endian uint64 word
arrays (see `_bits`).
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset

import numpy as np

from ._bits import ints_to_words

ctypedef unsigned long long u64

cdef extern from *:
    """
    #include <stdint.h>
    static inline int f2_ctz64(uint64_t x) { return __builtin_ctzll(x); }
    """
    int f2_ctz64(u64 x) nogil

BACKEND = "compiled"


class _Packed:
    __slots__ = ("words", "cols", "nwords", "rows")

    def __init__(self, words, cols, nwords, rows):
        self.words = words
        self.cols = cols
        self.nwords = nwords
        self.rows = rows


def pack(row_ints, cols, nwords):
    """Freeze a row list into a contiguous word matrix for repeated queries."""
    words = ints_to_words(list(row_ints), nwords)
    return _Packed(words, cols, nwords, len(words))


cdef long _rank_words(const u64* rows, long r, long W, const u64* mask,
                      u64* scratch, long* pw, long* pb) nogil:
    """Forward elimination; returns rank. Rows are ANDed with mask when given."""
    cdef long nb = 0, i, k, w
    cdef u64* cur
    cdef u64 v
    for i in range(r):
        cur = scratch + nb * W
        if mask != NULL:
            for w in range(W):
                cur[w] = rows[i * W + w] & mask[w]
        else:
            memcpy(cur, rows + i * W, W * sizeof(u64))
        for k in range(nb):
            if (cur[pw[k]] >> (<u64> pb[k])) & 1ULL:
                for w in range(W):
                    cur[w] ^= scratch[k * W + w]
        for w in range(W):
            v = cur[w]
            if v:
                pw[nb] = w
                pb[nb] = f2_ctz64(v)
                nb += 1
                break
    return nb


cdef struct _Scratch:
    u64* rows
    long* pw
    long* pb


cdef int _alloc_scratch(_Scratch* s, long r, long W) nogil:
    s.rows = <u64*> malloc(max(r, 1) * W * sizeof(u64))
    s.pw = <long*> malloc(max(r, 1) * sizeof(long))
    s.pb = <long*> malloc(max(r, 1) * sizeof(long))
    return s.rows != NULL and s.pw != NULL and s.pb != NULL


cdef void _free_scratch(_Scratch* s) nogil:
    free(s.rows)
    free(s.pw)
    free(s.pb)


def rank(packed):
    cdef const u64[:, ::1] M = packed.words
    cdef long r = packed.rows, W = packed.nwords
    if r == 0:
        return 0
    cdef _Scratch s
    if not _alloc_scratch(&s, r, W):
        raise MemoryError
    cdef long out
    with nogil:
        out = _rank_words(&M[0, 0], r, W, NULL, s.rows, s.pw, s.pb)
    _free_scratch(&s)
    return out


def rank_masked(packed, mask_words):
    cdef const u64[::1] mask = np.ascontiguousarray(mask_words, dtype=np.uint64)
    cdef const u64[:, ::1] M = packed.words
    cdef long r = packed.rows, W = packed.nwords
    if r == 0:
        return 0
    cdef _Scratch s
    if not _alloc_scratch(&s, r, W):
        raise MemoryError
    cdef long out
    with nogil:
        out = _rank_words(&M[0, 0], r, W, &mask[0], s.rows, s.pw, s.pb)
    _free_scratch(&s)
    return out


def rank_masked_many(packed, masks):
    cdef const u64[:, ::1] Ms = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef const u64[:, ::1] M = packed.words
    cdef long r = packed.rows, W = packed.nwords
    cdef long T = Ms.shape[0], t
    out_arr = np.empty(T, dtype=np.int64)
    cdef long long[::1] out = out_arr
    if r == 0:
        out_arr[:] = 0
        return out_arr
    if T == 0:
        return out_arr
    cdef _Scratch s
    if not _alloc_scratch(&s, r, W):
        raise MemoryError
    with nogil:
        for t in range(T):
            out[t] = _rank_words(&M[0, 0], r, W, &Ms[t, 0], s.rows, s.pw, s.pb)
    _free_scratch(&s)
    return out_arr


def rank_sums_by_weight(packed, group_words):
    """Sum of rank(rows & mask) over all subsets of groups, binned by size.

    Groups must be pairwise disjoint column sets; the running mask follows a
    Gray-code walk over subsets, one group toggled per step.
    """
    cdef const u64[:, ::1] G = np.ascontiguousarray(group_words, dtype=np.uint64)
    cdef const u64[:, ::1] M = packed.words
    cdef long r = packed.rows, W = packed.nwords
    cdef long n = G.shape[0]
    if n > 30:
        raise ValueError("subset enumeration over %d groups is not feasible" % n)
    sums_arr = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] sums = sums_arr
    cdef u64* mask = <u64*> malloc(W * sizeof(u64))
    if mask == NULL:
        raise MemoryError
    cdef _Scratch s
    if not _alloc_scratch(&s, max(r, 1), W):
        free(mask)
        raise MemoryError
    cdef unsigned long long total = 1ULL << n, i, subset = 0
    cdef long t, w, weight = 0
    with nogil:
        memset(mask, 0, W * sizeof(u64))
        for i in range(1, total):
            t = f2_ctz64(i)
            subset ^= 1ULL << t
            for w in range(W):
                mask[w] ^= G[t, w]
            if (subset >> t) & 1ULL:
                weight += 1
            else:
                weight -= 1
            if r > 0:
                sums[weight] += _rank_words(&M[0, 0], r, W, mask, s.rows, s.pw, s.pb)
    _free_scratch(&s)
    free(mask)
    return sums_arr

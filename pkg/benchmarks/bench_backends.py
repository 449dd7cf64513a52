#!/usr/bin/env python3
"""Time the compiled F2 kernels against the pure-Python fallback.

Runs the three hot kernels (single rank, batched masked ranks, and the
full mask-weight rank sweep) on identical inputs through both backends,
checks that the numbers agree, and prints a speedup table.

Usage: python3 benchmarks/bench_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from stabperc import _f2py
from stabperc._bits import ints_to_words, words_needed

try:
    from stabperc import _f2core
except ImportError:
    _f2core = None


def best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def random_rows(rng, rows: int, cols: int) -> tuple[int, ...]:
    return tuple(
        int.from_bytes(rng.bytes((cols + 7) // 8), "little") & ((1 << cols) - 1)
        for _ in range(rows)
    )


def workloads(rng):
    """Yield (name, make) pairs; make(backend) packs once and returns the
    closure to time."""

    # 1. Plain rank on a batch of medium matrices.
    mats = [(random_rows(rng, 64, 128), 128) for _ in range(200)]

    def make_rank(backend):
        packed = [backend.pack(rows, cols, words_needed(cols)) for rows, cols in mats]

        def run():
            return [int(backend.rank(m)) for m in packed]

        return run

    yield "rank (200 x 64x128)", make_rank

    # 2. Batched masked ranks at the scale of the bundled 40-qubit code.
    mm_rows, mm_cols = random_rows(rng, 32, 80), 80
    mm_words = words_needed(mm_cols)
    masks = np.zeros((20_000, mm_words), dtype=np.uint64)
    for t in range(masks.shape[0]):
        bits = int.from_bytes(rng.bytes(5), "little")
        masks[t] = ints_to_words((bits | bits << 40,), mm_words)[0]

    def make_masked(backend):
        packed = backend.pack(mm_rows, mm_cols, mm_words)

        def run():
            return np.asarray(backend.rank_masked_many(packed, masks)).tolist()

        return run

    yield "rank_masked_many (20k masks, 32x80)", make_masked

    # 3. Exact profile sweep: every one of the 2^14 group masks.
    sw_rows, sw_cols = random_rows(rng, 10, 14), 14
    sw_words = words_needed(sw_cols)
    groups = ints_to_words(tuple(1 << j for j in range(sw_cols)), sw_words)

    def make_sums(backend):
        packed = backend.pack(sw_rows, sw_cols, sw_words)

        def run():
            return [int(s) for s in backend.rank_sums_by_weight(packed, groups)]

        return run

    yield "rank_sums_by_weight (2^14 masks, 10x14)", make_sums


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3, help="best-of-N timing")
    args = parser.parse_args()

    if _f2core is None:
        print("compiled backend not built; nothing to compare")
        return 1

    rng = np.random.default_rng(0)
    rows = []
    for name, make in workloads(rng):
        run_compiled = make(_f2core)
        run_pure = make(_f2py)
        if run_compiled() != run_pure():
            raise AssertionError(f"backend mismatch on {name}")
        t_compiled = best_time(run_compiled, args.repeats)
        t_pure = best_time(run_pure, args.repeats)
        rows.append((name, t_compiled, t_pure, t_pure / t_compiled))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'compiled':>10}  {'pure':>10}  {'speedup':>8}")
    for name, t_c, t_p, speedup in rows:
        print(f"{name:<{width}}  {t_c * 1e3:>8.2f}ms  {t_p * 1e3:>8.2f}ms  {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

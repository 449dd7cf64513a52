"""Deterministic counter-based random streams for Monte-Carlo estimators.

Every estimator draws from `substream(seed, stream, trial)`: a Philox
generator keyed by (seed, stream) with the trial index in the counter block.
Distinct (stream, trial) pairs are statistically independent, trials can be
generated in any order or in parallel, and a (seed, stream, trial) triple
always yields the same draws — which is what makes CLI reruns byte-identical.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "substream",
    "STREAM_PHI",
    "STREAM_DELTA",
    "STREAM_PERCOLATION",
    "STREAM_AUGMENT",
    "STREAM_SUBMODULAR",
    "STREAM_FAILURE",
]

_MASK64 = (1 << 64) - 1

# Fixed stream tags so that independent estimators never share a substream.
STREAM_PHI = 1
STREAM_DELTA = 2
STREAM_PERCOLATION = 3
STREAM_AUGMENT = 4
STREAM_SUBMODULAR = 5
STREAM_FAILURE = 6


def substream(seed: int, stream: int, trial: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, stream, trial) cell.

    The trial index sits in the highest counter word, so draws within one
    trial can never run into the next trial's counter block.
    """
    bit_gen = np.random.Philox(
        key=[seed & _MASK64, stream & _MASK64],
        counter=[0, 0, 0, trial & _MASK64],
    )
    return np.random.Generator(bit_gen)

"""Mean rank of randomly column-erased matrices, exactly and by Monte Carlo.

The central object is phi(p) = E[rank of the submatrix kept by a Bernoulli(p)
column mask] / n. For a plain binary matrix the mask ranges over single
columns; for the symplectic form of a stabilizer matrix each masked position
keeps or drops a *pair* of columns (the X and Z halves of one qubit), so both
readings share one implementation parameterized by column groups.

Exact mode enumerates all 2^n masks once, aggregated by mask weight: the sum
of ranks at each weight is independent of p, so a single Gray-code sweep
yields phi at every p afterwards — with exact rational output when p is a
Fraction. Monte-Carlo mode draws per-trial masks from counter-based
substreams and reports a standard error.

The difference delta(p) = phi(1-p) - phi(p) drives the rate bound
1 - 2p - delta(p); the remaining functions check the structural facts the
bound rests on (monotonicity, concavity, submodularity of rank, and a
closed-form lower bound on delta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _bits
from .f2la import BitMatrix, rank
from .rng import STREAM_DELTA, STREAM_PHI, STREAM_SUBMODULAR, substream

__all__ = [
    "ExpectationMode",
    "Estimate",
    "MatrixView",
    "RankProfile",
    "PropertyReport",
    "phi",
    "delta",
    "empirical_rate_bound",
    "compute_profile",
    "check_monotone_concave",
    "delta_lower_bound",
    "check_submodular",
    "EXACT_ENUMERATION_CAP",
]

EXACT_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class ExpectationMode:
    """How to take the expectation over masks: full enumeration or sampling."""

    kind: str  # "exact" | "monte_carlo"
    trials: int = 0
    seed: int = 0
    cap: int = EXACT_ENUMERATION_CAP

    @classmethod
    def exact(cls, cap: int = EXACT_ENUMERATION_CAP) -> "ExpectationMode":
        return cls(kind="exact", cap=cap)

    @classmethod
    def monte_carlo(cls, trials: int, seed: int) -> "ExpectationMode":
        if trials < 1:
            raise ValueError("trials must be >= 1")
        return cls(kind="monte_carlo", trials=trials, seed=seed)


@dataclass(frozen=True)
class Estimate:
    """Sample mean with its standard error."""

    value: float
    stderr: float


class MatrixView:
    """A matrix plus the column groups that one mask position controls."""

    def __init__(self, matrix: BitMatrix, groups: tuple[int, ...]):
        self.matrix = matrix
        self.groups = groups
        self.n = len(groups)

    @classmethod
    def binary(cls, matrix: BitMatrix) -> "MatrixView":
        """Each mask position controls one column."""
        return cls(matrix, tuple(1 << j for j in range(matrix.cols)))

    @classmethod
    def symplectic(cls, matrix: BitMatrix, n_qubits: int) -> "MatrixView":
        """Mask position i controls columns i and n_qubits + i."""
        if matrix.cols != 2 * n_qubits:
            raise ValueError("symplectic view needs a matrix with 2n columns")
        return cls(
            matrix, tuple((1 << i) | (1 << (n_qubits + i)) for i in range(n_qubits))
        )

    @cached_property
    def rank_full(self) -> int:
        return rank(self.matrix)

    @cached_property
    def _group_words(self) -> np.ndarray:
        return _bits.ints_to_words(self.groups, self.matrix._nwords)

    @cached_property
    def rank_sums(self) -> tuple[int, ...]:
        """Sum of submatrix ranks over all masks of each weight (one sweep
        of all 2^n masks; independent of p)."""
        from .f2la import _backend

        sums = _backend.rank_sums_by_weight(self.matrix._packed, self._group_words)
        return tuple(int(s) for s in sums)


def _phi_exact(view: MatrixView, p):
    n = view.n
    if n > 0 and isinstance(p, Fraction):
        q = 1 - p
        total = Fraction(0)
        for w, s in enumerate(view.rank_sums):
            if s:
                total += s * p**w * q ** (n - w)
        return total / n
    if n == 0:
        return 0.0
    p = float(p)
    q = 1.0 - p
    total = 0.0
    for w, s in enumerate(view.rank_sums):
        if s:
            total += s * p**w * q ** (n - w)
    return total / n


def _mask_words_for_trials(
    view: MatrixView, p: float, seed: int, stream: int, trials: int
) -> np.ndarray:
    """Per-trial Bernoulli group masks, packed as little-endian word rows."""
    nwords = view.matrix._nwords
    group_words = view._group_words
    out = np.zeros((trials, nwords), dtype=np.uint64)
    for t in range(trials):
        rng = substream(seed, stream, t)
        keep = rng.random(view.n) < p
        if keep.any():
            out[t] = np.bitwise_or.reduce(group_words[keep], axis=0)
    return out


def _phi_mc(view: MatrixView, p: float, mode: ExpectationMode, stream: int) -> Estimate:
    from .f2la import _backend

    masks = _mask_words_for_trials(view, float(p), mode.seed, stream, mode.trials)
    ranks = np.asarray(_backend.rank_masked_many(view.matrix._packed, masks))
    n = view.n
    mean = float(ranks.mean()) / n
    if mode.trials > 1:
        stderr = float(ranks.std(ddof=1)) / (n * math.sqrt(mode.trials))
    else:
        stderr = 0.0
    return Estimate(mean, stderr)


def phi(view: MatrixView, p, mode: ExpectationMode, _stream: int = STREAM_PHI):
    """Mean rank profile E_p[rank of masked submatrix] / n.

    Exact mode returns a float (or an exact Fraction when p is a Fraction);
    Monte-Carlo mode returns an Estimate with standard error.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    if mode.kind == "exact":
        if view.n > mode.cap:
            raise ValueError(
                f"exact enumeration over {view.n} positions exceeds cap {mode.cap}"
            )
        return _phi_exact(view, p)
    if mode.kind == "monte_carlo":
        return _phi_mc(view, p, mode, _stream)
    raise ValueError(f"unknown mode {mode.kind!r}")


def delta(view: MatrixView, p, mode: ExpectationMode):
    """phi(1-p) - phi(p); in MC mode the two terms use independent streams
    and their errors add in quadrature."""
    if mode.kind == "monte_carlo":
        hi = _phi_mc(view, 1 - float(p), mode, STREAM_DELTA)
        lo = _phi_mc(view, float(p), mode, STREAM_PHI)
        return Estimate(hi.value - lo.value, math.hypot(hi.stderr, lo.stderr))
    return phi(view, 1 - p, mode) - phi(view, p, mode)


def empirical_rate_bound(view: MatrixView, p, mode: ExpectationMode):
    """Rate bound 1 - 2p - delta(p); valid for p <= 1/2."""
    if not 0 <= p <= Fraction(1, 2):
        raise ValueError("p must be in [0, 1/2]")
    d = delta(view, p, mode)
    if isinstance(d, Estimate):
        return Estimate(1 - 2 * float(p) - d.value, d.stderr)
    return 1 - 2 * p - d


@dataclass(frozen=True)
class RankProfile:
    """phi/delta sampled on a probability grid (stderr lists in MC mode)."""

    p_grid: tuple[float, ...]
    phi: tuple[float, ...]
    delta: tuple[float, ...]
    phi_stderr: tuple[float, ...] | None = None
    delta_stderr: tuple[float, ...] | None = None


def compute_profile(view: MatrixView, p_grid, mode: ExpectationMode) -> RankProfile:
    phis = []
    deltas = []
    phi_se = []
    delta_se = []
    for p in p_grid:
        f = phi(view, p, mode)
        d = delta(view, p, mode)
        if isinstance(f, Estimate):
            phis.append(f.value)
            phi_se.append(f.stderr)
        else:
            phis.append(float(f))
            phi_se.append(0.0)
        if isinstance(d, Estimate):
            deltas.append(d.value)
            delta_se.append(d.stderr)
        else:
            deltas.append(float(d))
            delta_se.append(0.0)
    return RankProfile(
        p_grid=tuple(float(p) for p in p_grid),
        phi=tuple(phis),
        delta=tuple(deltas),
        phi_stderr=tuple(phi_se) if mode.kind == "monte_carlo" else None,
        delta_stderr=tuple(delta_se) if mode.kind == "monte_carlo" else None,
    )


@dataclass(frozen=True)
class PropertyReport:
    """Outcome of a property sweep: how many checks, how many failures."""

    checks: int
    violations: int
    max_violation: float
    passed: bool


def check_monotone_concave(view: MatrixView, grid, tol) -> PropertyReport:
    """Exact phi must be nondecreasing on the grid and midpoint-concave on
    every grid-point pair two apart (midpoints evaluated exactly)."""
    mode = ExpectationMode.exact()
    pts = sorted(Fraction(p) for p in grid)
    tol = Fraction(tol)
    values = [phi(view, p, mode) for p in pts]
    checks = 0
    violations = 0
    worst = Fraction(0)
    for i in range(len(pts) - 1):
        checks += 1
        gap = values[i] - values[i + 1]  # positive = violation
        if gap > tol:
            violations += 1
        worst = max(worst, gap)
    for i in range(len(pts) - 2):
        checks += 1
        mid = (pts[i] + pts[i + 2]) / 2
        gap = (values[i] + values[i + 2]) / 2 - phi(view, mid, mode)
        if gap > tol:
            violations += 1
        worst = max(worst, gap)
    return PropertyReport(
        checks=checks,
        violations=violations,
        max_violation=float(max(worst, 0)),
        passed=violations == 0,
    )


def delta_lower_bound(rank_h: int, n: int, p, M):
    """Closed-form floor for delta(p): ((1-2p)/(1-p)) * (rank_h/n - M).

    Exact when p and M are Fractions."""
    if not 0 <= p < 1:
        raise ValueError("p must be in [0, 1)")
    if M < 0:
        raise ValueError("M must be >= 0")
    if isinstance(p, Fraction):
        return (1 - 2 * p) / (1 - p) * (Fraction(rank_h, n) - M)
    p = float(p)
    return (1 - 2 * p) / (1 - p) * (rank_h / n - float(M))


def check_submodular(M: BitMatrix, trials: int, seed: int) -> PropertyReport:
    """Sample random column-set pairs (A, B) and verify
    rank(A&B) + rank(A|B) <= rank(A) + rank(B) every time."""
    from .f2la import _backend

    nwords = M._nwords
    a_rows = np.zeros((trials, nwords), dtype=np.uint64)
    b_rows = np.zeros((trials, nwords), dtype=np.uint64)
    for t in range(trials):
        rng = substream(seed, STREAM_SUBMODULAR, t)
        bits = rng.integers(0, 2, size=2 * M.cols, dtype=np.uint8)
        a = _pack_bool(bits[: M.cols], nwords)
        b = _pack_bool(bits[M.cols :], nwords)
        a_rows[t] = a
        b_rows[t] = b
    handle = M._packed
    r_a = np.asarray(_backend.rank_masked_many(handle, a_rows))
    r_b = np.asarray(_backend.rank_masked_many(handle, b_rows))
    r_and = np.asarray(_backend.rank_masked_many(handle, a_rows & b_rows))
    r_or = np.asarray(_backend.rank_masked_many(handle, a_rows | b_rows))
    excess = (r_and + r_or) - (r_a + r_b)
    violations = int((excess > 0).sum())
    return PropertyReport(
        checks=trials,
        violations=violations,
        max_violation=float(max(excess.max(), 0)) if trials else 0.0,
        passed=violations == 0,
    )


def _pack_bool(bits: np.ndarray, nwords: int) -> np.ndarray:
    packed = np.packbits(bits, bitorder="little")
    padded = np.zeros(nwords * 8, dtype=np.uint8)
    padded[: packed.size] = packed
    return padded.view("<u8")

"""Exact tree-enumeration series and the closed-form rate bounds they feed.

Counting connected rank contributions on large girth-m graphs reduces to
counting subtrees of the infinite m-regular tree. Two exact integer series
do all the work: b_k (subtrees hanging off one fixed root edge, with the
closed form b_k = C(k(m-1), k-1)/k) and a_k (subtrees containing the root,
the z^k coefficient of (1 + T1)^m where T1 is the generating function of the
b_k). The truncated polynomial S_delta(z) = sum a_k z^k/(k+1) then enters
two printable bounds on the achievable rate of erasure-protected codes:

- stab_bound: any row-weight-m stabilizer family,
- css2m_bound: column-weight-2, row-weight-m CSS families,

and solving bound(p) = rate for the smallest p in (0, 1/2] turns either
bound into an erasure threshold / percolation upper bound. All series
arithmetic is exact rational; floats appear only at bound evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "RationalSeries",
    "BoundSpec",
    "EasyBounds",
    "CurvePoint",
    "planted_coeffs",
    "rooted_coeffs",
    "verify_functional_equation",
    "s_poly",
    "stab_bound",
    "mean_rank_upper",
    "css2m_bound",
    "threshold_solve",
    "percolation_upper",
    "easy_bounds",
    "bound_curve",
    "THRESHOLD_GRID_POINTS",
    "THRESHOLD_TOLERANCE",
]

THRESHOLD_GRID_POINTS = 10_000
THRESHOLD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RationalSeries:
    """Truncated power series with exact rational coefficients, index = power."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coefficients", tuple(Fraction(c) for c in self.coefficients)
        )

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def evaluate(self, z: float) -> float:
        """Horner evaluation in floating point."""
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * z + float(c)
        return acc

    def evaluate_exact(self, z: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc


def planted_coeffs(m: int, k_max: int) -> RationalSeries:
    """b_k = C(k(m-1), k-1)/k, the number of k-edge subtrees of the m-regular
    tree planted at one fixed root edge; b_0 = 0. Always integral."""
    if m < 3:
        raise ValueError("m must be >= 3")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    coeffs = [Fraction(0)]
    for k in range(1, k_max + 1):
        coeffs.append(Fraction(math.comb(k * (m - 1), k - 1), k))
    return RationalSeries(tuple(coeffs))


def _truncated_mul(a: list[Fraction], b: list[Fraction], k_max: int) -> list[Fraction]:
    out = [Fraction(0)] * (k_max + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(min(len(b), k_max + 1 - i)):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def _truncated_pow(base: list[Fraction], exponent: int, k_max: int) -> list[Fraction]:
    result = [Fraction(1)] + [Fraction(0)] * k_max
    acc = list(base[: k_max + 1]) + [Fraction(0)] * max(0, k_max + 1 - len(base))
    e = exponent
    while e:
        if e & 1:
            result = _truncated_mul(result, acc, k_max)
        e >>= 1
        if e:
            acc = _truncated_mul(acc, acc, k_max)
    return result


def rooted_coeffs(m: int, k_max: int) -> RationalSeries:
    """a_k = [z^k] (1 + T1(z))^m: k-edge subtrees of the m-regular tree that
    contain the root vertex; a_0 = 1, a_1 = m. Always integral."""
    b = planted_coeffs(m, max(k_max, 1)).coefficients
    one_plus_t1 = [Fraction(1)] + list(b[1 : k_max + 1])
    return RationalSeries(tuple(_truncated_pow(one_plus_t1, m, k_max)))


def verify_functional_equation(m: int, k_max: int) -> bool:
    """Check T1(z) = z * (1 + T1(z))^(m-1) coefficient-wise through z^k_max."""
    b = planted_coeffs(m, k_max).coefficients
    one_plus_t1 = [Fraction(1)] + list(b[1:])
    rhs_shifted = _truncated_pow(one_plus_t1, m - 1, k_max - 1)
    for k in range(k_max + 1):
        rhs_k = rhs_shifted[k - 1] if k >= 1 else Fraction(0)
        if b[k] != rhs_k:
            return False
    return True


def s_poly(m: int, delta: int) -> RationalSeries:
    """S_delta(z) = sum_{k=0}^{delta} a_k z^k / (k+1)."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    a = rooted_coeffs(m, delta) if delta >= 1 else RationalSeries((Fraction(1),))
    return RationalSeries(tuple(a[k] / (k + 1) for k in range(delta + 1)))


def stab_bound(m: int, p: float) -> float:
    """Rate bound (1-2p)(1-(1-p)^(m-1)) / (1-(1-2p)(1-p)^(m-1)) for
    stabilizer families with row weight m; p in (0, 1/2]. As p -> 0+ the
    value tends to (m-1)/(m+1), not 0."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 0 < p <= 0.5:
        raise ValueError("p must be in (0, 1/2]")
    q_pow = (1.0 - p) ** (m - 1)
    return (1.0 - 2.0 * p) * (1.0 - q_pow) / (1.0 - (1.0 - 2.0 * p) * q_pow)


def _stab_bound_limit0(m: int) -> float:
    return (m - 1) / (m + 1)


@lru_cache(maxsize=None)
def _s_poly_floats(m: int, delta: int) -> tuple[float, ...]:
    """Float image of s_poly's coefficients, cached: the threshold solvers
    evaluate the same polynomial tens of thousands of times."""
    return tuple(float(c) for c in s_poly(m, delta).coefficients)


def _horner(coeffs: tuple[float, ...], z: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def mean_rank_upper(m: int, delta: int, p: float) -> float:
    """Upper bound (2/m)(1 - (1-p)^m S_delta(p(1-p)^(m-2))) on the mean rank
    per column of a Bernoulli(p)-column-masked (2,m) incidence matrix with
    girth > delta + 1 (tree-like neighborhoods up to delta edges)."""
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    z = p * (1.0 - p) ** (m - 2)
    return (2.0 / m) * (1.0 - (1.0 - p) ** m * _horner(_s_poly_floats(m, delta), z))


def css2m_bound(m: int, p: float) -> float:
    """Rate bound (1-2p)((4/(mp))(1 - (1-p)^m S_{m-2}(p(1-p)^(m-2))) - 1) for
    (2,m) CSS families; continuity limit 1 at p = 0."""
    if m < 5:
        raise ValueError("m must be >= 5")
    if not 0 <= p <= 0.5:
        raise ValueError("p must be in [0, 1/2]")
    if p == 0:
        return 1.0
    z = p * (1.0 - p) ** (m - 2)
    inner = (4.0 / (m * p)) * (
        1.0 - (1.0 - p) ** m * _horner(_s_poly_floats(m, m - 2), z)
    ) - 1.0
    return (1.0 - 2.0 * p) * inner


@dataclass(frozen=True)
class BoundSpec:
    """Which bound curve to solve against which target rate."""

    kind: str  # "stabilizer_m" | "css_2m"
    m: int
    rate: float

    def __post_init__(self) -> None:
        if self.kind not in ("stabilizer_m", "css_2m"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.kind == "css_2m" and self.m < 5:
            raise ValueError("css_2m bound needs m >= 5")
        if self.kind == "stabilizer_m" and self.m < 2:
            raise ValueError("stabilizer bound needs m >= 2")
        if not 0 <= self.rate <= 1:
            raise ValueError("rate must be in [0, 1]")

    def bound_fn(self):
        if self.kind == "stabilizer_m":
            return lambda p: stab_bound(self.m, p)
        return lambda p: css2m_bound(self.m, p)


def default_rate(m: int) -> float:
    """Design rate 1 - 4/m of a connected proper (2,m) construction."""
    return 1.0 - 4.0 / m


def threshold_solve(spec: BoundSpec, grid_points: int = THRESHOLD_GRID_POINTS) -> float:
    """Smallest p in (0, 1/2] where the bound curve crosses the target rate:
    uniform grid scan for the first sign change, then bisection to 1e-9."""
    fn = spec.bound_fn()
    rate = spec.rate

    def f(p: float) -> float:
        return fn(p) - rate

    step = 0.5 / grid_points
    prev_p = step
    prev_f = f(prev_p)
    if prev_f == 0.0:
        return prev_p
    bracket = None
    for i in range(2, grid_points + 1):
        cur_p = i * step
        cur_f = f(cur_p)
        if cur_f == 0.0:
            return cur_p
        if (prev_f > 0) != (cur_f > 0):
            bracket = (prev_p, prev_f, cur_p)
            break
        prev_p, prev_f = cur_p, cur_f
    if bracket is None:
        raise ValueError(
            f"no crossing of rate {rate} in (0, 1/2] for {spec.kind} m={spec.m}"
        )
    lo, f_lo, hi = bracket
    lo_positive = f_lo > 0
    while hi - lo > THRESHOLD_TOLERANCE:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == lo_positive:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def percolation_upper(m: int) -> float:
    """Upper bound on the bond-percolation threshold of the m-regular,
    m-gon-faced tilings: solve the css_2m bound at the design rate 1-4/m."""
    if m < 5:
        raise ValueError("m must be >= 5")
    return threshold_solve(BoundSpec("css_2m", m, default_rate(m)))


@dataclass(frozen=True)
class EasyBounds:
    """Closed-form percolation bounds: branching lower bound 1/(m-1),
    path-counting upper bound 1-1/(m-1), capacity bound 2/m."""

    lower: float
    upper_path: float
    upper_capacity: float


def easy_bounds(m: int) -> EasyBounds:
    if m < 3:
        raise ValueError("m must be >= 3")
    return EasyBounds(
        lower=1.0 / (m - 1),
        upper_path=1.0 - 1.0 / (m - 1),
        upper_capacity=2.0 / m,
    )


@dataclass(frozen=True)
class CurvePoint:
    """One row of a bound-curve table; css2m is None when m < 5."""

    p: float
    capacity: float
    stab: float
    css2m: float | None
    rate: float


def bound_curve(spec: BoundSpec, p_grid) -> tuple[CurvePoint, ...]:
    """Evaluate capacity 1-2p and both bounds along a grid; the p = 0 entries
    use the continuity limits ((m-1)/(m+1) and 1)."""
    m = spec.m
    rows = []
    for p in p_grid:
        p = float(p)
        stab = _stab_bound_limit0(m) if p == 0 else stab_bound(m, p)
        if m >= 5:
            css = css2m_bound(m, p)
        else:
            css = None
        rows.append(CurvePoint(p=p, capacity=1.0 - 2.0 * p, stab=stab, css2m=css, rate=spec.rate))
    return tuple(rows)

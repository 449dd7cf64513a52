"""Phase-free Pauli operators, stabilizer matrices, and erasure analysis.

An n-qubit Pauli operator is a pair of bit vectors (x_mask, z_mask); qubit i
carries X, Z, or Y when only x, only z, or both bits are set. Phases are
dropped throughout, so products are plain XORs and commutation is the
symplectic inner product. A stabilizer matrix is a list of pairwise-commuting
rows; redundant (dependent) rows are allowed everywhere, all counts use rank.

Erasure correctability on a mask E reduces to three GF(2) ranks: the code can
recover from erasing E exactly when every zero-syndrome operator supported on
E is itself a stabilizer, and the dimensions of those two groups come from
rank(H), rank(H_E), rank(H_Ebar), where H_E keeps both symplectic halves of
the erased columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import rank_profile
from .f2la import BitMatrix, BitVector, rank, rank_masked, row_space_contains

__all__ = [
    "PauliOperator",
    "StabilizerMatrix",
    "ErasureAnalysis",
    "CoveredCounts",
    "commutes",
    "syndrome",
    "to_symplectic",
    "validate",
    "num_logical",
    "analyze_erasure",
    "enumerate_covered",
    "fano_lower_bound",
    "parse_stabilizer_text",
    "format_stabilizer_text",
    "COVERED_ENUMERATION_CAP",
]

_PAULI_FROM_CHAR = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_CHAR_FROM_PAULI = {v: k for k, v in _PAULI_FROM_CHAR.items()}

# 4^|E| operators are enumerated; 4^11 ~ 4.2M keeps runs at desk scale.
COVERED_ENUMERATION_CAP = 11


@dataclass(frozen=True)
class PauliOperator:
    """Pauli operator modulo phase: per-qubit X and Z bit masks."""

    n: int
    x_mask: BitVector
    z_mask: BitVector

    def __post_init__(self) -> None:
        if self.x_mask.n != self.n or self.z_mask.n != self.n:
            raise ValueError("mask length does not match qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, BitVector(n), BitVector(n))

    @classmethod
    def from_string(cls, s: str) -> "PauliOperator":
        x = 0
        z = 0
        for i, ch in enumerate(s):
            try:
                xb, zb = _PAULI_FROM_CHAR[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r}") from None
            x |= xb << i
            z |= zb << i
        n = len(s)
        return cls(n, BitVector(n, x), BitVector(n, z))

    @classmethod
    def from_masks(cls, n: int, x_bits: int, z_bits: int) -> "PauliOperator":
        return cls(n, BitVector(n, x_bits), BitVector(n, z_bits))

    def support(self) -> BitVector:
        """Mask of qubits acted on non-trivially."""
        return self.x_mask | self.z_mask

    def weight(self) -> int:
        return self.support().weight()

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        return PauliOperator(self.n, self.x_mask ^ other.x_mask, self.z_mask ^ other.z_mask)

    def __str__(self) -> str:
        return "".join(
            _CHAR_FROM_PAULI[(self.x_mask[i], self.z_mask[i])] for i in range(self.n)
        )


def commutes(P: PauliOperator, Q: PauliOperator) -> bool:
    """Symplectic inner product is zero: X/Z overlaps cancel in pairs."""
    if P.n != Q.n:
        raise ValueError("qubit count mismatch")
    a = (P.x_mask.bits & Q.z_mask.bits).bit_count()
    b = (P.z_mask.bits & Q.x_mask.bits).bit_count()
    return (a + b) % 2 == 0


@dataclass(frozen=True)
class StabilizerMatrix:
    """Rows of a stabilizer group; may be redundant (rank < row count)."""

    n: int
    rows: tuple[PauliOperator, ...]

    def __init__(self, n: int, rows) -> None:
        rows = tuple(rows)
        for P in rows:
            if P.n != n:
                raise ValueError("row qubit count mismatch")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    @property
    def r(self) -> int:
        return len(self.rows)

    @cached_property
    def symplectic(self) -> BitMatrix:
        """r x 2n binary matrix: row i = (x half | z half << n)."""
        n = self.n
        return BitMatrix(
            (P.x_mask.bits | (P.z_mask.bits << n) for P in self.rows), 2 * n
        )

    @cached_property
    def symplectic_rank(self) -> int:
        return rank(self.symplectic)

    @cached_property
    def is_valid(self) -> bool:
        rows = self.rows
        return all(
            commutes(rows[i], rows[j])
            for i in range(len(rows))
            for j in range(i + 1, len(rows))
        )


def to_symplectic(H: StabilizerMatrix) -> BitMatrix:
    """Binary image of the rows: (x | z) concatenated, r x 2n."""
    return H.symplectic


def syndrome(H: StabilizerMatrix, E: PauliOperator) -> BitVector:
    """Bit i is 1 iff E anti-commutes with row i; linear in E."""
    if E.n != H.n:
        raise ValueError("qubit count mismatch")
    bits = 0
    ex, ez = E.x_mask.bits, E.z_mask.bits
    for i, row in enumerate(H.rows):
        a = (ex & row.z_mask.bits).bit_count() + (ez & row.x_mask.bits).bit_count()
        bits |= (a & 1) << i
    return BitVector(H.r, bits)


def validate(H: StabilizerMatrix) -> bool:
    """True iff all row pairs commute."""
    return H.is_valid


def _require_valid(H: StabilizerMatrix) -> None:
    if not H.is_valid:
        for i in range(H.r):
            for j in range(i + 1, H.r):
                if not commutes(H.rows[i], H.rows[j]):
                    raise ValueError(f"rows {i} and {j} anti-commute")
        raise ValueError("rows do not pairwise commute")


def num_logical(H: StabilizerMatrix) -> int:
    """Logical qubit count k = n - rank of the symplectic matrix."""
    _require_valid(H)
    return H.n - H.symplectic_rank


@dataclass(frozen=True)
class ErasureAnalysis:
    """Dimension counts for one erasure mask.

    dim_nse: log2 of the group of zero-syndrome operators supported on the
    erased qubits ("no syndrome effect"). dim_se: log2 of the subgroup of
    those that are stabilizers. The erasure is correctable exactly when the
    two agree, and their gap is the decoder's residual uncertainty in bits.
    """

    dim_nse: int
    dim_se: int
    correctable: bool
    cond_entropy_bits: int


def _symplectic_mask(mask_bits: int, n: int) -> int:
    """Erasing qubit i selects both symplectic columns i and n+i."""
    return mask_bits | (mask_bits << n)


def analyze_erasure(H: StabilizerMatrix, E: BitVector) -> ErasureAnalysis:
    """Rank-based correctability test for erasing the qubits in E."""
    _require_valid(H)
    if E.n != H.n:
        raise ValueError("mask length mismatch")
    n = H.n
    sym = H.symplectic
    rank_h = H.symplectic_rank
    rank_e = rank_masked(sym, _symplectic_mask(E.bits, n))
    comp = E.bits ^ ((1 << n) - 1)
    rank_ebar = rank_masked(sym, _symplectic_mask(comp, n))
    dim_nse = 2 * E.weight() - rank_e
    dim_se = rank_h - rank_ebar
    return ErasureAnalysis(
        dim_nse=dim_nse,
        dim_se=dim_se,
        correctable=(dim_nse == dim_se),
        cond_entropy_bits=dim_nse - dim_se,
    )


@dataclass(frozen=True)
class CoveredCounts:
    """Exhaustive statistics over all 4^|E| operators supported on a mask."""

    zero_syndrome: int
    stabilizers: int
    per_syndrome_histogram: dict[int, int]


def enumerate_covered(H: StabilizerMatrix, E: BitVector) -> CoveredCounts:
    """Walk all 4^|E| covered operators, tallying syndromes by brute force.

    Deliberately avoids the rank formulas of analyze_erasure so the two
    paths can check each other. Histogram keys are syndrome bit patterns
    (bit i = anti-commutes with row i). Membership in the stabilizer group
    is tested against the row space of the symplectic matrix.
    """
    if E.n != H.n:
        raise ValueError("mask length mismatch")
    w = E.weight()
    if w > COVERED_ENUMERATION_CAP:
        raise ValueError(
            f"mask weight {w} exceeds enumeration cap {COVERED_ENUMERATION_CAP}"
        )
    n = H.n
    positions = E.indices()
    # Toggle tables for the 2|E| elementary moves: flip X or Z on one qubit.
    toggle_vec: list[int] = []
    toggle_syn: list[int] = []
    for q in positions:
        for half_shift in (0, n):  # x half, then z half
            vec_bit = 1 << (q + half_shift)
            syn = 0
            for i, row in enumerate(H.rows):
                # Flipping the x bit of qubit q flips syndrome bits where the
                # row has Z there, and symmetrically for the z bit.
                other = row.z_mask.bits if half_shift == 0 else row.x_mask.bits
                syn |= ((other >> q) & 1) << i
            toggle_vec.append(vec_bit)
            toggle_syn.append(syn)

    sym = H.symplectic
    histogram: dict[int, int] = {}
    zero_syndrome = 0
    stabilizers = 0
    vec = 0
    syn = 0
    total = 1 << (2 * w)
    for step in range(total):
        if step:
            t = (step & -step).bit_length() - 1
            vec ^= toggle_vec[t]
            syn ^= toggle_syn[t]
        histogram[syn] = histogram.get(syn, 0) + 1
        if syn == 0:
            zero_syndrome += 1
            if row_space_contains(sym, BitVector(2 * n, vec)):
                stabilizers += 1
    return CoveredCounts(zero_syndrome, stabilizers, histogram)


def fano_lower_bound(H: StabilizerMatrix, p, mode: "rank_profile.ExpectationMode"):
    """Information-theoretic lower bound on decoding failure probability.

    (2np - rank H + n*(phi(1-p) - phi(p)) - 1) / (2n), where phi is the
    mean-rank profile of the symplectic matrix under qubit erasure. May be
    negative (vacuous) for small p. Exact with Fraction p in exact mode.
    """
    _require_valid(H)
    n = H.n
    view = rank_profile.MatrixView.symplectic(H.symplectic, n)
    d = rank_profile.delta(view, p, mode)
    delta_val = d.value if isinstance(d, rank_profile.Estimate) else d
    rank_h = H.symplectic_rank
    if isinstance(p, Fraction) and isinstance(delta_val, Fraction):
        return (2 * n * p - rank_h + n * delta_val - 1) / (2 * n)
    return (2 * n * p - rank_h + n * float(delta_val) - 1) / (2 * n)


def parse_stabilizer_text(text: str) -> StabilizerMatrix:
    """Parse the text format: header `stab n r`, then r rows over I,X,Y,Z."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty stabilizer text")
    header = lines[0].split()
    if len(header) != 3 or header[0] != "stab":
        raise ValueError(f"bad header {lines[0]!r}: expected 'stab n r'")
    n, r = int(header[1]), int(header[2])
    if len(lines) - 1 != r:
        raise ValueError(f"expected {r} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        if len(ln) != n:
            raise ValueError(f"row {ln!r} has length {len(ln)}, expected {n}")
        rows.append(PauliOperator.from_string(ln))
    return StabilizerMatrix(n, rows)


def format_stabilizer_text(H: StabilizerMatrix) -> str:
    lines = [f"stab {H.n} {H.r}"]
    lines.extend(str(P) for P in H.rows)
    return "\n".join(lines) + "\n"

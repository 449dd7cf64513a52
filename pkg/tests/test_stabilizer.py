import itertools
import math
import random
from fractions import Fraction

import pytest

from stabperc.f2la import BitVector
from stabperc.rank_profile import ExpectationMode
from stabperc.stabilizer import (
    COVERED_ENUMERATION_CAP,
    PauliOperator,
    StabilizerMatrix,
    analyze_erasure,
    commutes,
    enumerate_covered,
    fano_lower_bound,
    format_stabilizer_text,
    num_logical,
    parse_stabilizer_text,
    syndrome,
    to_symplectic,
    validate,
)

from _oracles import naive_rank

WORKED_TEXT = "stab 5 3\nIXZYZ\nZZXIZ\nIYYYZ\n"


@pytest.fixture()
def worked() -> StabilizerMatrix:
    return parse_stabilizer_text(WORKED_TEXT)


class TestPauliOperator:
    def test_string_roundtrip(self):
        P = PauliOperator.from_string("IXZYZ")
        assert str(P) == "IXZYZ"
        assert P.x_mask.bits == 0b01010  # X on qubit 1, Y on qubit 3
        assert P.z_mask.bits == 0b11100  # Z on 2 and 4, Y on 3

    def test_support_weight(self):
        P = PauliOperator.from_string("IXZYZ")
        assert P.support().indices() == (1, 2, 3, 4)
        assert P.weight() == 4
        assert PauliOperator.identity(4).weight() == 0

    def test_product_is_xor(self):
        a = PauliOperator.from_string("XXI")
        b = PauliOperator.from_string("IXZ")
        assert str(a * b) == "XIZ"

    def test_bad_letter(self):
        with pytest.raises(ValueError):
            PauliOperator.from_string("AXZ")

    def test_commutes(self):
        X = PauliOperator.from_string("X")
        Z = PauliOperator.from_string("Z")
        Y = PauliOperator.from_string("Y")
        assert not commutes(X, Z)
        assert not commutes(X, Y)
        assert commutes(X, X)
        # two anti-commuting pairs cancel
        assert commutes(PauliOperator.from_string("XX"), PauliOperator.from_string("ZZ"))

    def test_commutes_is_symmetric_on_randoms(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randrange(1, 8)
            a = PauliOperator.from_masks(n, rng.getrandbits(n), rng.getrandbits(n))
            b = PauliOperator.from_masks(n, rng.getrandbits(n), rng.getrandbits(n))
            assert commutes(a, b) == commutes(b, a)


class TestStabilizerMatrix:
    def test_worked_example_is_valid(self, worked):
        assert validate(worked)
        assert worked.n == 5 and worked.r == 3
        assert num_logical(worked) == 2  # rank 3 -> k = 5 - 3

    def test_symplectic_layout(self, worked):
        sym = to_symplectic(worked)
        assert sym.rows == 3 and sym.cols == 10
        row0 = worked.rows[0]
        assert sym.row(0).bits == row0.x_mask.bits | (row0.z_mask.bits << 5)

    def test_invalid_pair_detected(self):
        H = StabilizerMatrix(
            2, [PauliOperator.from_string("XI"), PauliOperator.from_string("ZI")]
        )
        assert not validate(H)
        with pytest.raises(ValueError, match="anti-commute"):
            analyze_erasure(H, BitVector(2, 0b01))

    def test_redundant_rows_allowed(self, worked):
        rows = list(worked.rows) + [worked.rows[0] * worked.rows[1]]
        H = StabilizerMatrix(5, rows)
        assert validate(H)
        assert num_logical(H) == 2  # rank unchanged

    def test_num_logical_of_empty_group(self):
        H = StabilizerMatrix(3, [])
        assert num_logical(H) == 3


class TestSyndrome:
    def test_stabilizer_rows_have_zero_syndrome(self, worked):
        for P in worked.rows:
            assert syndrome(worked, P).bits == 0

    def test_linearity(self, worked):
        rng = random.Random(5)
        for _ in range(40):
            a = PauliOperator.from_masks(5, rng.getrandbits(5), rng.getrandbits(5))
            b = PauliOperator.from_masks(5, rng.getrandbits(5), rng.getrandbits(5))
            assert syndrome(worked, a * b).bits == (
                syndrome(worked, a).bits ^ syndrome(worked, b).bits
            )

    def test_known_single_qubit(self, worked):
        # X on qubit 2: row0 has Z there (hit), row1 has X (miss), row2 Y (hit)
        s = syndrome(worked, PauliOperator.from_string("IIXII"))
        assert [s[i] for i in range(3)] == [1, 0, 1]


class TestErasureWorkedExample:
    """The 3x5 example with erased qubits {1, 2} (mask 0,1,1,0,0)."""

    def test_analysis_values(self, worked):
        a = analyze_erasure(worked, BitVector(5, 0b00110))
        assert a.dim_nse == 2
        assert a.dim_se == 1
        assert a.correctable is False
        assert a.cond_entropy_bits == 1

    def test_restricted_ranks(self, worked):
        # independent check of the two restricted ranks via the naive oracle
        sym_rows = [r.bits for r in (to_symplectic(worked).row(i) for i in range(3))]
        mask_e = 0b00110 | (0b00110 << 5)
        mask_ebar = 0b11001 | (0b11001 << 5)
        assert naive_rank([r & mask_e for r in sym_rows]) == 2
        assert naive_rank([r & mask_ebar for r in sym_rows]) == 2

    def test_covered_counts(self, worked):
        cov = enumerate_covered(worked, BitVector(5, 0b00110))
        assert cov.zero_syndrome == 4  # 2^dim_nse
        assert cov.stabilizers == 2  # 2^dim_se
        assert sum(cov.per_syndrome_histogram.values()) == 16  # 4^|E|
        assert len(cov.per_syndrome_histogram) == 4
        assert set(cov.per_syndrome_histogram.values()) == {4}  # uniform

    def test_full_and_empty_masks(self, worked):
        empty = analyze_erasure(worked, BitVector(5, 0))
        assert empty.dim_nse == 0 and empty.dim_se == 0 and empty.correctable
        full = analyze_erasure(worked, BitVector(5, 0b11111))
        assert full.dim_nse == 2 * 5 - 3
        assert full.dim_se == 3
        assert not full.correctable


def test_enumerate_covered_matches_analysis_on_random_codes():
    """Exhaustive agreement between the two independent paths, small codes."""
    from stabperc.verify import random_stabilizer_code
    from stabperc.rng import substream

    rng = substream(12345, 101)
    for _ in range(25):
        H = random_stabilizer_code(rng, int(rng.integers(2, 6)))
        n = H.n
        for bits in range(1 << n):
            E = BitVector(n, bits)
            a = analyze_erasure(H, E)
            cov = enumerate_covered(H, E)
            assert cov.zero_syndrome == 1 << a.dim_nse
            assert cov.stabilizers == 1 << a.dim_se
            assert a.correctable == (cov.zero_syndrome == cov.stabilizers)


def test_enumerate_covered_cap():
    H = StabilizerMatrix(12, [])
    with pytest.raises(ValueError, match="cap"):
        enumerate_covered(H, BitVector(12, (1 << (COVERED_ENUMERATION_CAP + 1)) - 1))


class TestFanoLowerBound:
    def test_exact_endpoints(self, worked):
        mode = ExpectationMode.exact()
        # p=0: (0 - 3 + 5*(rank/5) - 1) / 10 = -1/10
        assert fano_lower_bound(worked, Fraction(0), mode) == Fraction(-1, 10)
        # p=1: (10 - 3 - 3 - 1) / 10 = 3/10
        assert fano_lower_bound(worked, Fraction(1), mode) == Fraction(3, 10)

    def test_against_direct_enumeration(self, worked):
        """Independent route: expected ranks from the 32-mask sum with naive
        elimination and exact binomial weights."""
        mode = ExpectationMode.exact()
        p = Fraction(2, 5)
        sym_rows = [worked.symplectic.row(i).bits for i in range(3)]
        n = 5

        def expected_rank(prob):
            total = Fraction(0)
            for bits in range(1 << n):
                w = bits.bit_count()
                mask = bits | (bits << n)
                weight = prob**w * (1 - prob) ** (n - w)
                total += weight * naive_rank([r & mask for r in sym_rows])
            return total

        expected = (
            2 * n * p - 3 + (expected_rank(1 - p) - expected_rank(p)) - 1
        ) / (2 * n)
        assert fano_lower_bound(worked, p, mode) == expected

    def test_float_and_mc_paths_agree(self, worked):
        exact = fano_lower_bound(worked, 0.3, ExpectationMode.exact())
        mc = fano_lower_bound(worked, 0.3, ExpectationMode.monte_carlo(4000, 7))
        assert math.isclose(exact, float(mc), abs_tol=0.02)


class TestTextFormat:
    def test_roundtrip(self, worked):
        assert parse_stabilizer_text(format_stabilizer_text(worked)) == worked

    def test_bad_header(self):
        with pytest.raises(ValueError, match="header"):
            parse_stabilizer_text("stob 5 3\nIIIII\n")

    def test_row_count_mismatch(self):
        with pytest.raises(ValueError, match="expected 2 rows"):
            parse_stabilizer_text("stab 5 2\nIIIII\n")

    def test_row_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            parse_stabilizer_text("stab 5 1\nIIII\n")


def test_syndrome_histogram_is_coset_uniform(worked_masks=(0b00110, 0b10101, 0b01111)):
    H = parse_stabilizer_text(WORKED_TEXT)
    for bits in worked_masks:
        cov = enumerate_covered(H, BitVector(5, bits))
        counts = set(cov.per_syndrome_histogram.values())
        assert len(counts) == 1  # all syndrome classes equally populated
        (count,) = counts
        assert count * len(cov.per_syndrome_histogram) == 4 ** BitVector(5, bits).weight()
        assert math.log2(count) == round(math.log2(count))

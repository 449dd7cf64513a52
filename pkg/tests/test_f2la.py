import random

import pytest

from stabperc.f2la import (
    BitMatrix,
    BitVector,
    kernel_basis,
    mat_vec,
    rank,
    rank_masked,
    restrict_columns,
    row_space_contains,
)

from _oracles import naive_rank, naive_rank_masked, random_rows


class TestBitVector:
    def test_roundtrip_indices(self):
        v = BitVector.from_indices(10, [0, 3, 9])
        assert v.indices() == (0, 3, 9)
        assert v.weight() == 3
        assert v.bits == 0b1000001001

    def test_getitem_and_str(self):
        v = BitVector(4, 0b0101)
        assert [v[i] for i in range(4)] == [1, 0, 1, 0]
        assert str(v) == "1010"

    def test_ops(self):
        a = BitVector(5, 0b10110)
        b = BitVector(5, 0b01100)
        assert (a ^ b).bits == 0b11010
        assert (a & b).bits == 0b00100
        assert (a | b).bits == 0b11110
        assert a.complement().bits == 0b01001

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            _ = BitVector(5, 0) ^ BitVector(4, 0)

    def test_bits_out_of_range(self):
        with pytest.raises(ValueError):
            BitVector(3, 0b1000)
        with pytest.raises(ValueError):
            BitVector(-1, 0)

    def test_from_bits(self):
        assert BitVector.from_bits([1, 0, 1]).bits == 0b101


class TestBitMatrix:
    def test_from_supports(self):
        M = BitMatrix.from_supports(5, [(0, 2), (1,), ()])
        assert M.rows == 3 and M.cols == 5
        assert M.row(0).indices() == (0, 2)
        assert M.row(2).weight() == 0

    def test_identity_and_zero(self):
        assert rank(BitMatrix.identity(7)) == 7
        assert rank(BitMatrix.zero(3, 9)) == 0

    def test_eq_hash(self):
        a = BitMatrix([0b11, 0b01], 2)
        b = BitMatrix.from_supports(2, [(0, 1), (0,)])
        assert a == b and hash(a) == hash(b)
        assert a != BitMatrix([0b11, 0b01], 3)

    def test_column_bits(self):
        M = BitMatrix([0b101, 0b011], 3)
        # column j packed over rows: bit i = row i has column j
        assert M.column_bits == (0b11, 0b10, 0b01)

    def test_row_out_of_range(self):
        with pytest.raises(IndexError):
            BitMatrix([0b1], 1).row(1)


@pytest.mark.parametrize("cols", [1, 7, 63, 64, 65, 127, 128, 129])
def test_rank_matches_naive_across_word_boundaries(cols):
    rng = random.Random(cols)
    for _ in range(25):
        r = rng.randrange(0, 12)
        rows = random_rows(rng, r, cols)
        M = BitMatrix(rows, cols)
        assert rank(M) == naive_rank(rows)


def test_rank_masked_matches_naive_and_restriction():
    rng = random.Random(7)
    for _ in range(150):
        cols = rng.randrange(1, 90)
        rows = random_rows(rng, rng.randrange(0, 10), cols)
        M = BitMatrix(rows, cols)
        mask = rng.getrandbits(cols)
        expected = naive_rank_masked(rows, mask)
        assert rank_masked(M, mask) == expected
        assert rank_masked(M, BitVector(cols, mask)) == expected
        assert rank(restrict_columns(M, BitVector(cols, mask))) == expected


def test_rank_masked_trivial_masks():
    M = BitMatrix([0b110, 0b011], 3)
    assert rank_masked(M, 0) == 0
    assert rank_masked(M, 0b111) == 2


def test_restrict_columns_compacts_in_order():
    M = BitMatrix([0b1101, 0b0110], 4)
    R = restrict_columns(M, BitVector(4, 0b1010))  # keep columns 1 and 3
    assert R.cols == 2
    # column 1 -> new 0, column 3 -> new 1
    assert R.row(0).bits == 0b10  # row0 had cols {0,2,3} -> keeps {3}
    assert R.row(1).bits == 0b01  # row1 had cols {1,2} -> keeps {1}


def test_kernel_basis_properties():
    rng = random.Random(11)
    for _ in range(80):
        cols = rng.randrange(1, 40)
        rows = random_rows(rng, rng.randrange(0, 8), cols)
        M = BitMatrix(rows, cols)
        basis = kernel_basis(M)
        assert len(basis) == cols - rank(M)
        for v in basis:
            assert mat_vec(M, v).bits == 0
        # independence
        assert naive_rank([v.bits for v in basis]) == len(basis)


def test_kernel_of_identity_is_trivial():
    assert kernel_basis(BitMatrix.identity(6)) == []


def test_row_space_contains():
    rng = random.Random(13)
    for _ in range(60):
        cols = rng.randrange(1, 30)
        rows = random_rows(rng, rng.randrange(1, 6), cols)
        M = BitMatrix(rows, cols)
        combo = 0
        for r in rows:
            if rng.random() < 0.5:
                combo ^= r
        assert row_space_contains(M, BitVector(cols, combo))
        probe = rng.getrandbits(cols)
        expected = naive_rank(rows + [probe]) == naive_rank(rows)
        assert row_space_contains(M, BitVector(cols, probe)) == expected


def test_mat_vec():
    M = BitMatrix([0b011, 0b110], 3)
    assert mat_vec(M, BitVector(3, 0b001)).bits == 0b01
    assert mat_vec(M, BitVector(3, 0b010)).bits == 0b11
    assert mat_vec(M, BitVector(3, 0b111)).bits == 0b00


def test_empty_matrix():
    M = BitMatrix([], 5)
    assert rank(M) == 0
    assert len(kernel_basis(M)) == 5

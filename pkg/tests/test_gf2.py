"""Bit-packed GF(2) linear algebra against independent dense oracles."""

import random

import numpy as np
import pytest

from cosetcode.gf2 import (
    BitMatrix,
    BitVector,
    GF2Error,
    read_alist,
    read_matrix_market,
    row_space_equal,
    weight_and_star,
    write_alist,
    write_matrix_market,
)


def _rank_oracle(int_rows, cols):
    """Plain-integer Gaussian elimination, independent of BitMatrix."""
    rows = list(int_rows)
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if (rows[i] >> c) & 1), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and (rows[i] >> c) & 1:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def _random_matrix(rng, rows, cols):
    ints = [rng.getrandbits(cols) for _ in range(rows)]
    return BitMatrix.from_int_rows(ints, cols), ints


def test_dense_roundtrip():
    rng = random.Random(11)
    for rows, cols in [(1, 1), (3, 65), (10, 64), (7, 130)]:
        m, ints = _random_matrix(rng, rows, cols)
        d = m.to_dense()
        assert d.shape == (rows, cols)
        assert BitMatrix.from_dense(d).int_rows() == ints


def test_from_dense_accepts_noncontiguous_views():
    rng = np.random.default_rng(5)
    d = (rng.integers(0, 2, size=(40, 70)).astype(np.uint8)).T
    m = BitMatrix.from_dense(d)
    assert (m.to_dense() == d).all()


def test_rank_matches_oracle():
    rng = random.Random(23)
    for rows, cols in [(5, 5), (20, 64), (30, 100), (64, 30)]:
        m, ints = _random_matrix(rng, rows, cols)
        assert m.rank() == _rank_oracle(ints, cols)


def test_rref_preserves_row_space_and_is_idempotent():
    rng = random.Random(3)
    m, _ = _random_matrix(rng, 12, 40)
    r, pivots = m.rref()
    assert row_space_equal(m, r)
    assert len(pivots) == m.rank()
    again, _ = r.rref()
    assert again.int_rows() == r.int_rows()


def test_kernel_basis_annihilates_and_has_full_conullity():
    rng = random.Random(7)
    m, _ = _random_matrix(rng, 15, 48)
    k = m.kernel_basis()
    assert m.matmul(k.transpose()).is_zero()
    assert m.rank() + k.rows == m.cols
    assert k.rank() == k.rows


def test_solve_consistent_and_inconsistent():
    rng = random.Random(19)
    a, _ = _random_matrix(rng, 20, 16)
    x = BitMatrix.from_int_rows([rng.getrandbits(16) for _ in range(3)], 16)
    b = a.matmul(x.transpose())
    sol = a.solve(b)
    assert sol is not None
    assert a.matmul(sol) == b
    # a vector outside the column space has no solution
    full = a.transpose().rank()
    if full < a.rows:
        outside = a.transpose().kernel_basis().row(0)
        target = BitMatrix.from_int_rows([0] * a.rows, 1)
        for i in outside.support():
            target.set_bits(i, [0])
        assert a.solve(target) is None


def test_solve_vec_roundtrip():
    rng = random.Random(2)
    a, _ = _random_matrix(rng, 18, 12)
    x = BitVector(12, rng.getrandbits(12))
    b = a.matvec(x)
    sol = a.solve_vec(b)
    assert sol is not None
    assert a.matvec(sol) == b


def test_matmul_and_transpose_match_numpy():
    rng = random.Random(31)
    a, _ = _random_matrix(rng, 9, 33)
    b, _ = _random_matrix(rng, 33, 21)
    prod = a.matmul(b).to_dense()
    ref = (a.to_dense().astype(int) @ b.to_dense().astype(int)) % 2
    assert (prod == ref).all()
    assert (a.transpose().to_dense() == a.to_dense().T).all()


def test_stack_and_take():
    rng = random.Random(41)
    a, ra = _random_matrix(rng, 4, 20)
    b, rb = _random_matrix(rng, 3, 20)
    v = a.vstack(b)
    assert v.int_rows() == ra + rb
    assert v.take_rows([1, 5]).int_rows() == [ra[1], rb[1]]
    cols = [0, 7, 19]
    taken = v.take_cols(cols).to_dense()
    assert (taken == v.to_dense()[:, cols]).all()


def test_in_row_space():
    m = BitMatrix.from_int_rows([0b0011, 0b0110], 4)
    assert m.in_row_space(BitVector(4, 0b0101))
    assert not m.in_row_space(BitVector(4, 0b1000))


def test_row_space_equal_detects_difference():
    a = BitMatrix.from_int_rows([0b01, 0b10], 2)
    b = BitMatrix.from_int_rows([0b11, 0b01], 2)
    c = BitMatrix.from_int_rows([0b01], 2)
    assert row_space_equal(a, b)
    assert not row_space_equal(a, c)


def test_bitvector_basics():
    v = BitVector(6, 0b101001)
    assert v.weight() == 3
    assert v.support() == [0, 3, 5]
    assert v.bit(3) and not v.bit(1)
    assert (v ^ BitVector(6, 0b000001)).value == 0b101000
    assert v.with_bit(1, 1).value == 0b101011
    assert v.with_bit(0, 0).value == 0b101000
    assert weight_and_star([v, BitVector(6, 0b001001)]) == 2


def test_length_mismatch_raises():
    m = BitMatrix.from_int_rows([0b1], 1)
    with pytest.raises(GF2Error):
        m.matvec(BitVector(2, 0))


def test_matrix_market_roundtrip(tmp_path):
    rng = random.Random(13)
    m, _ = _random_matrix(rng, 6, 70)
    path = str(tmp_path / "m.mtx")
    write_matrix_market(m, path)
    back = read_matrix_market(path)
    assert back.int_rows() == m.int_rows()


def test_alist_roundtrip(tmp_path):
    rng = random.Random(17)
    m, _ = _random_matrix(rng, 8, 25)
    path = str(tmp_path / "m.alist")
    write_alist(m, path)
    back = read_alist(path)
    assert back.int_rows() == m.int_rows()

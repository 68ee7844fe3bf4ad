import random

import numpy as np
import pytest

from mahowald.f2linalg import (
    BitMatrix,
    BitVector,
    EchelonSpan,
    kernel_basis,
    rank,
    rref,
    solve,
    solve_many,
)


def rand_matrix(rng, nrows, ncols, density=0.5):
    m = BitMatrix.zeros(nrows, ncols)
    for i in range(nrows):
        for j in range(ncols):
            if rng.random() < density:
                m.set(i, j, 1)
    return m


def rand_vector(rng, n, density=0.5):
    return BitVector(n, sum(1 << i for i in range(n) if rng.random() < density))


# ---------------------------------------------------------------- BitVector


def test_bitvector_string_roundtrip():
    v = BitVector.from_string("10110")
    assert v.support() == (0, 2, 3)
    assert v.to_string() == "10110"
    assert BitVector.from_string(v.to_string()) == v


def test_bitvector_xor_self_is_zero():
    v = BitVector.from_support(9, [1, 3, 8])
    assert (v ^ v).is_zero()
    assert v ^ BitVector.zeros(9) == v


def test_bitvector_rejects_out_of_range_bits():
    with pytest.raises(ValueError):
        BitVector(3, 0b1000)


def test_bitvector_unit_and_getitem():
    v = BitVector.unit(5, 3)
    assert [v[i] for i in range(5)] == [0, 0, 0, 1, 0]
    assert v.popcount() == 1


# ---------------------------------------------------------------- rref


def test_rref_identity():
    m = BitMatrix.identity(3)
    red, pivots, rk = rref(m)
    assert red == m
    assert pivots == (0, 1, 2)
    assert rk == 3


def test_rref_zero_matrix():
    m = BitMatrix.zeros(2, 4)
    red, pivots, rk = rref(m)
    assert red == m
    assert pivots == ()
    assert rk == 0


def test_rref_dependent_rows():
    # third row is the XOR of the first two
    m = BitMatrix.from_rows(
        [BitVector.from_string("1100"),
         BitVector.from_string("0110"),
         BitVector.from_string("1010")]
    )
    _, pivots, rk = rref(m)
    assert rk == 2
    assert pivots == (0, 1)


def test_rref_idempotent():
    rng = random.Random(0xF2)
    for _ in range(25):
        m = rand_matrix(rng, rng.randint(0, 12), rng.randint(0, 12))
        red, _, _ = rref(m)
        red2, _, _ = rref(red)
        assert red2 == red


def test_rref_shape_properties():
    rng = random.Random(1789)
    for _ in range(40):
        m = rand_matrix(rng, rng.randint(1, 20), rng.randint(1, 20))
        red, pivots, rk = rref(m)
        assert list(pivots) == sorted(pivots)
        assert rk == len(pivots)
        # each pivot column contains exactly one 1, in the pivot row
        for r, c in enumerate(pivots):
            assert red.get(r, c) == 1
            assert red.column(c).popcount() == 1
        # row space is preserved: mutual containment plus equal dimension
        a, b = EchelonSpan(m.ncols), EchelonSpan(m.ncols)
        for i in range(m.nrows):
            a.add(m.row_bits(i))
            b.add(red.row_bits(i))
        assert a.dim == b.dim
        for i in range(m.nrows):
            assert b.contains(m.row_bits(i))
            assert a.contains(red.row_bits(i))


def test_rank_crosschecked_against_dense_elimination():
    rng = random.Random(42)
    for _ in range(20):
        m = rand_matrix(rng, rng.randint(1, 30), rng.randint(1, 30))
        dense = m.to_dense().astype(np.int64)
        # plain dense Gaussian elimination mod 2 as an independent check
        a = dense.copy() % 2
        rk = 0
        for c in range(a.shape[1]):
            piv = None
            for r in range(rk, a.shape[0]):
                if a[r, c]:
                    piv = r
                    break
            if piv is None:
                continue
            a[[rk, piv]] = a[[piv, rk]]
            for r in range(a.shape[0]):
                if r != rk and a[r, c]:
                    a[r] = (a[r] + a[rk]) % 2
            rk += 1
        assert rank(m) == rk


# ---------------------------------------------------------------- solve


def test_solve_identity():
    m = BitMatrix.identity(6)
    rng = random.Random(7)
    b = rand_vector(rng, 6)
    assert solve(m, b) == b


def test_solve_zero_matrix_inconsistent():
    m = BitMatrix.zeros(3, 2)
    assert solve(m, BitVector.unit(3, 1)) is None
    assert solve(m, BitVector.zeros(3)) == BitVector.zeros(2)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(BitMatrix.zeros(3, 2), BitVector.zeros(4))


def test_solve_free_variables_zeroed():
    # x0 + x1 = 1 has two solutions; the deterministic one zeroes x1
    m = BitMatrix.from_rows([BitVector.from_string("11")])
    x = solve(m, BitVector(1, 1))
    assert x == BitVector.from_string("10")


def test_solve_full_rank_roundtrip():
    rng = random.Random(0xAB)
    n = 20
    while True:
        m = rand_matrix(rng, n, n)
        if m.rank() == n:
            break
    for _ in range(10):
        x0 = rand_vector(rng, n)
        b = m.mul_vec(x0)
        assert solve(m, b) == x0


def test_solve_roundtrip_property():
    rng = random.Random(0xCD)
    for _ in range(40):
        m = rand_matrix(rng, rng.randint(1, 16), rng.randint(1, 16))
        x0 = rand_vector(rng, m.ncols)
        b = m.mul_vec(x0)
        x = solve(m, b)
        assert x is not None
        assert m.mul_vec(x) == b


def test_solve_many_matches_single_solves():
    rng = random.Random(0xEF)
    m = rand_matrix(rng, 12, 9)
    bs = [rand_vector(rng, 12) for _ in range(30)]
    batch = solve_many(m, bs)
    for b, x in zip(bs, batch):
        assert x == solve(m, b)


# ---------------------------------------------------------------- kernel


def test_kernel_identity_empty():
    assert kernel_basis(BitMatrix.identity(4)) == []


def test_kernel_zero_1x3_full():
    ker = kernel_basis(BitMatrix.zeros(1, 3))
    assert ker == [BitVector.unit(3, 0), BitVector.unit(3, 1), BitVector.unit(3, 2)]


def test_kernel_hand_example():
    # rows 110, 011: the only nonzero kernel vector among all 8 is 111
    m = BitMatrix.from_rows(
        [BitVector.from_string("110"), BitVector.from_string("011")]
    )
    assert kernel_basis(m) == [BitVector.from_string("111")]


def test_kernel_vectors_are_in_kernel_and_independent():
    rng = random.Random(99)
    for _ in range(30):
        m = rand_matrix(rng, rng.randint(1, 18), rng.randint(1, 18))
        ker = kernel_basis(m)
        span = EchelonSpan(m.ncols)
        for v in ker:
            assert m.mul_vec(v).is_zero()
            assert span.add(v.bits)  # independent


def test_rank_nullity():
    rng = random.Random(0x64)
    for _ in range(30):
        r, c = rng.randint(0, 64), rng.randint(0, 64)
        m = rand_matrix(rng, r, c, density=rng.choice([0.1, 0.5, 0.9]))
        assert m.rank() + len(m.kernel_basis()) == c


# ---------------------------------------------------------------- products


def test_matmul_against_dense():
    rng = random.Random(0x11)
    for _ in range(20):
        a = rand_matrix(rng, rng.randint(1, 10), rng.randint(1, 10))
        b = rand_matrix(rng, a.ncols, rng.randint(1, 10))
        want = (a.to_dense().astype(int) @ b.to_dense().astype(int)) % 2
        assert np.array_equal((a @ b).to_dense(), want.astype(np.uint8))


def test_mul_vec_matches_matmul():
    rng = random.Random(0x12)
    a = rand_matrix(rng, 9, 7)
    x = rand_vector(rng, 7)
    col = BitMatrix.from_cols([x], 7)
    assert (a @ col).column(0) == a.mul_vec(x)


def test_transpose_involution_and_dense_roundtrip():
    rng = random.Random(0x13)
    for _ in range(10):
        m = rand_matrix(rng, rng.randint(0, 70), rng.randint(0, 70))
        assert m.transpose().transpose() == m
        assert BitMatrix.from_dense(m.to_dense()) == m


def test_augment_stack():
    a = BitMatrix.from_rows([0b1, 0b0], 1)
    b = BitMatrix.from_rows([0b10, 0b01], 2)
    aug = a.augment(b)
    assert aug.nrows == 2 and aug.ncols == 3
    assert aug.row(0) == BitVector.from_string("101")
    assert aug.row(1) == BitVector.from_string("010")
    st = b.stack(b)
    assert st.nrows == 4 and st.row(2) == b.row(0)


# ---------------------------------------------------------------- spans


def test_echelon_span_membership_bruteforce():
    rng = random.Random(0x21)
    for _ in range(15):
        n = rng.randint(1, 8)
        vecs = [rng.randrange(1 << n) for _ in range(rng.randint(0, 5))]
        span = EchelonSpan(n)
        for v in vecs:
            span.add(v)
        # brute-force span of the generators
        full = {0}
        for v in vecs:
            full |= {x ^ v for x in full}
        for cand in range(1 << n):
            assert span.contains(cand) == (cand in full)
        assert span.dim == (len(full).bit_length() - 1)


def test_empty_matrix_edges():
    assert rank(BitMatrix.zeros(0, 5)) == 0
    assert kernel_basis(BitMatrix.zeros(0, 3)) == [
        BitVector.unit(3, i) for i in range(3)
    ]
    assert rank(BitMatrix.zeros(4, 0)) == 0
    assert kernel_basis(BitMatrix.zeros(4, 0)) == []
    # 0-column solve: only the zero rhs is consistent
    m = BitMatrix.zeros(2, 0)
    assert solve(m, BitVector.zeros(2)) == BitVector(0, 0)
    assert solve(m, BitVector.unit(2, 0)) is None

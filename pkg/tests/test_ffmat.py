import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ffverify.ffmat import (
    F2, F3, F5, BudgetExceeded, MatF, SingularMatrixError, check_budget, det,
    enumerate_gl, gf2_gl_rows, gf2_rank_bits, gl_order, image_basis, inverse,
    kernel_basis, rank, _rank_generic,
)
from ffverify.groups import GL2_LIST


def M(rows, p=2):
    return MatF.from_rows(rows, p)


def all_matrices(n, p):
    for ent in itertools.product(range(p), repeat=n * n):
        yield MatF.from_flat(n, n, ent, p)


def slow_det(A):
    """Leibniz expansion, independent of elimination."""
    n, p = A.rows, A.p
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1) ** inversions
        for i in range(n):
            term *= A[i, perm[i]]
        total += term
    return total % p


def matrices(n, p):
    return st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
        lambda e: MatF.from_flat(n, n, e, p))


@pytest.mark.parametrize("A, expected", [
    (MatF.zero(3), 0),
    (M([[1, 1], [0, 1]]), 2),
    (M([[1, 1], [0, 0]]), 1),
])
def test_rank_examples(A, expected):
    assert rank(A) == expected


def test_det_examples():
    assert all(det(A) == 1 for A in GL2_LIST)
    assert det(M([[1, 0], [0, 0]])) == 0
    assert det(M([[1, 1], [1, 2]], 3)) == 1


def test_inverse_examples():
    assert inverse(MatF.identity(3, 5)) == MatF.identity(3, 5)
    swap = M([[0, 1], [1, 0]])
    assert inverse(swap) == swap
    assert inverse(M([[1, 1], [0, 1]], 3)) == M([[1, 2], [0, 1]], 3)


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrixError):
        inverse(M([[1, 1], [1, 1]]))
    with pytest.raises(SingularMatrixError):
        M([[1, 2], [2, 1]], 3).inverse()


def test_kernel_examples():
    assert kernel_basis(MatF.identity(2)) == []
    assert len(kernel_basis(MatF.zero(2))) == 2
    assert kernel_basis(M([[1, 1], [0, 0]])) == [(1, 1)]


@pytest.mark.parametrize("n", [2, 3])
def test_packed_rank_matches_generic_exhaustively(n):
    for bits in range(1 << (n * n)):
        A = MatF.from_bits(n, n, bits)
        r = _rank_generic(A)
        assert rank(A) == r == gf2_rank_bits(bits, n, n)
        assert det(A) == slow_det(A) == int(r == n)
        assert len(kernel_basis(A)) == n - r
        assert len(image_basis(A)) == r


@pytest.mark.parametrize("p", [3, 5])
def test_det_matches_leibniz_2x2(p):
    for A in all_matrices(2, p):
        assert det(A) == slow_det(A)


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 5), (3, 5)])
def test_det_multiplicative_on_random_pairs(n, p):
    rng = random.Random(n * 10 + p)
    for _ in range(1000):
        A = MatF.from_flat(n, n, [rng.randrange(p) for _ in range(n * n)], p)
        B = MatF.from_flat(n, n, [rng.randrange(p) for _ in range(n * n)], p)
        assert det(A @ B) == det(A) * det(B) % p


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: matrices(3, p)))
def test_rank_of_transpose(A):
    assert rank(A) == rank(A.T)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: matrices(3, p)))
def test_inverse_roundtrip(A):
    if det(A) == 0:
        with pytest.raises(SingularMatrixError):
            inverse(A)
    else:
        assert A @ inverse(A) == MatF.identity(3, A.p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: matrices(3, p)))
def test_kernel_vectors_are_annihilated(A):
    for v in kernel_basis(A):
        assert A.apply(v) == (0,) * 3


@pytest.mark.parametrize("n,p,expected", [(1, 2, 1), (2, 2, 6), (2, 3, 48), (3, 2, 168), (4, 2, 20160), (2, 5, 480)])
def test_gl_counts(n, p, expected):
    mats = list(enumerate_gl(n, p))
    assert len(mats) == len(set(mats)) == gl_order(n, p) == expected
    assert all(det(A) != 0 for A in mats)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_gl_matches_determinant_filter(n, p):
    brute = {A for A in all_matrices(n, p) if slow_det(A) != 0}
    assert set(enumerate_gl(n, p)) == brute


def test_gl2_f2_enumeration_is_the_listed_six():
    assert set(enumerate_gl(2, 2)) == set(GL2_LIST)


def test_gf2_fast_path_matches_generic_order():
    assert [A.packed_rows() for A in enumerate_gl(3, 2)] == [list(r) for r in gf2_gl_rows(3)]


def test_gl_budget_refusal():
    with pytest.raises(BudgetExceeded):
        list(enumerate_gl(4, 2, budget=1000))
    with pytest.raises(BudgetExceeded):
        check_budget(11, "x", budget=10)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
        lambda e: MatF.from_flat(rc[0], rc[1], e, p)))))
def test_text_roundtrip(A):
    assert MatF.from_text(A.to_text()) == A


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 9), st.data())
def test_hex_roundtrip(r, c, data):
    bits = data.draw(st.integers(0, (1 << (r * c)) - 1))
    A = MatF.from_bits(r, c, bits)
    assert A.bits() == bits
    assert MatF.from_hex_rows(A.to_hex_rows(), c) == A


def test_field_validation():
    with pytest.raises(ValueError):
        MatF.from_rows([[1]], 4)
    with pytest.raises(ValueError):
        MatF(1, 1, F3, (3,))
    with pytest.raises(ValueError):
        M([[1, 0]]) @ M([[1, 0]])
    assert F5.inv(2) == 3 and F2.inv(1) == 1

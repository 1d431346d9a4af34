import itertools
import math
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from ffverify import _kernels
from ffverify._kernels import _pykernels
from ffverify.ffmat import F2, F3, BudgetExceeded, MatF, SingularMatrixError, enumerate_gl, rank
from ffverify.subspace import (
    AffineSubspace, SubspaceClass, _sweep_generic, act, canonicalize, classify,
    column_space, common_image, common_kernel, elements, enumerate_affine_subspaces,
    exceptional_plane, gaussian_binomial, max_rank, pivot_patterns, row_space,
    subspace_count, sweep_bounded_rank, unipotent_space,
)


def M(rows, p=2):
    return MatF.from_rows(rows, p)


E11, E12, E21, E22 = (MatF.elementary(2, 2, i, j) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
I2 = MatF.identity(2)


def point_set(S):
    return frozenset(elements(S))


def full_space(n, p=2):
    dirs = [MatF.elementary(n, n, i, j, p) for i in range(n) for j in range(n)]
    return AffineSubspace(n, n, F2 if p == 2 else F3, MatF.zero(n, p=p), tuple(dirs))


def product_formula(d, k, q):
    num = math.prod(q ** (d - i) - 1 for i in range(k))
    den = math.prod(q ** (k - i) - 1 for i in range(k))
    return num // den


def echelon_profile_count(d, k, q):
    total = 0
    for piv in itertools.combinations(range(d), k):
        free = sum(sum(1 for c in range(p + 1, d) if c not in piv) for p in piv)
        total += q ** free
    return total


# canonical forms


def test_canonicalize_moves_base_into_span():
    S = canonicalize(AffineSubspace(2, 2, F2, I2, (I2,)))
    assert S.base.is_zero() and S.directions == (I2,) and S.is_linear


def test_canonicalize_is_idempotent_on_echelon_input():
    S = AffineSubspace(2, 2, F2, MatF.zero(2), (E11, E22))
    assert canonicalize(S) == S


def test_two_presentations_agree():
    a = AffineSubspace(2, 2, F2, M([[0, 0], [0, 1]]), (E11, E12))
    b = AffineSubspace(2, 2, F2, M([[1, 1], [0, 1]]), (E11 + E12, E12))
    assert point_set(a) == point_set(b)
    assert len(point_set(a)) == 4
    assert canonicalize(a) == canonicalize(b)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=3, max_size=3), st.lists(st.integers(0, 15), min_size=2, max_size=2))
def test_canonical_form_decides_point_set_equality(mats, other):
    base, *dirs = (MatF.from_bits(2, 2, b) for b in mats)
    try:
        S = AffineSubspace(2, 2, F2, base, tuple(dirs))
    except ValueError:
        return
    # re-present S with a different base point and shuffled basis
    shift = next(iter(elements(S)))
    T = AffineSubspace(2, 2, F2, shift, (dirs[0] + dirs[1], dirs[1]))
    assert canonicalize(S) == canonicalize(T)
    assert canonicalize(canonicalize(S)) == canonicalize(S)
    U = canonicalize(AffineSubspace(2, 2, F2, MatF.from_bits(2, 2, other[0]), (MatF.from_bits(2, 2, other[1]),))
                     if other[1] else AffineSubspace(2, 2, F2, MatF.from_bits(2, 2, other[0])))
    assert (point_set(U) == point_set(S)) == (U == canonicalize(S))


def test_dependent_directions_rejected():
    with pytest.raises(ValueError):
        AffineSubspace(2, 2, F2, MatF.zero(2), (E11, E11))


def test_json_roundtrip():
    S = canonicalize(exceptional_plane())
    assert AffineSubspace.from_json(S.to_json()) == S


# elements and ranks


def test_elements_examples():
    assert list(elements(AffineSubspace(2, 2, F2, I2))) == [I2]
    plane = list(elements(exceptional_plane()))
    assert len(plane) == 4 and all(rank(A) == 1 for A in plane)
    c1 = list(elements(column_space(2, 1)))
    assert len(c1) == 4 and all(A.column(1) == (0, 0) for A in c1)


def test_elements_budget():
    with pytest.raises(BudgetExceeded):
        list(elements(full_space(3), budget=100))


def test_max_rank_examples():
    assert max_rank(exceptional_plane()) == 1
    for n, r in ((2, 1), (3, 1), (3, 2), (4, 2)):
        assert max_rank(column_space(n, r)) == r
    assert max_rank(column_space(3, 2, 3)) == 2
    assert max_rank(full_space(2)) == 2


# action


def test_act_examples():
    C1 = canonicalize(column_space(2, 1))
    assert act(I2, I2, C1) == C1
    swap = M([[0, 1], [1, 0]])
    moved = act(I2, swap, C1)
    assert moved != C1
    assert all(A.column(0) == (0, 0) for A in elements(moved))


def test_act_rejects_singular():
    C1 = column_space(2, 1)
    with pytest.raises(SingularMatrixError):
        act(E11, I2, C1)
    with pytest.raises(SingularMatrixError):
        act(I2, E11, C1)


def test_action_law_over_gl2():
    gl = list(enumerate_gl(2, 2))
    S = canonicalize(exceptional_plane())
    for P1, Q1, P2, Q2 in itertools.product(gl, repeat=4):
        assert act(P1, Q1, act(P2, Q2, S)) == act(P1 @ P2, Q1 @ Q2, S)


# common kernel and image, classification


def test_common_kernel_and_image_examples():
    ker = common_kernel(column_space(3, 1))
    assert len(ker) == 2 and all(v[0] == 0 for v in ker)
    assert len(common_image(column_space(3, 1))) == 3
    assert common_kernel(exceptional_plane()) == []
    assert common_kernel(full_space(2)) == []
    assert len(common_image(full_space(2))) == 2


def test_classify_examples():
    assert classify(column_space(2, 1), 1) is SubspaceClass.COLUMN
    assert classify(row_space(2, 1), 1) is SubspaceClass.ROW
    assert classify(exceptional_plane(), 1) is SubspaceClass.EXCEPTIONAL
    assert classify(column_space(3, 2, 3), 2) is SubspaceClass.COLUMN


def test_classify_validates_input():
    with pytest.raises(ValueError):
        classify(full_space(2), 1)
    with pytest.raises(ValueError):
        classify(AffineSubspace(2, 2, F2, MatF.zero(2), (E11,)), 1)


def test_unipotent_spaces_are_invertible():
    for n in (2, 3, 4):
        S = unipotent_space(n)
        assert all(rank(A) == n for A in elements(S))
    assert all(rank(A) == 3 for A in elements(unipotent_space(3, 3)))


# enumeration


@pytest.mark.parametrize("d,k,q", [(4, 2, 2), (4, 1, 3), (5, 3, 2), (9, 6, 2), (9, 7, 2), (4, 3, 3)])
def test_gaussian_binomial_oracles(d, k, q):
    g = gaussian_binomial(d, k, q)
    assert g == product_formula(d, k, q) == echelon_profile_count(d, k, q)


def test_named_counts():
    assert gaussian_binomial(9, 6, 2) == 788_035
    assert subspace_count(4, 2, 2, True) == 35
    assert subspace_count(4, 2, 2, False) == 140


@pytest.mark.parametrize("d,k,q,linear,expected", [
    (4, 2, 2, True, 35), (4, 2, 2, False, 140), (4, 3, 2, False, 30), (4, 3, 3, False, 120), (3, 0, 2, False, 8),
])
def test_enumeration_is_complete_and_distinct(d, k, q, linear, expected):
    spaces = list(enumerate_affine_subspaces(d, k, q, linear_only=linear, shape=(2, 2) if d == 4 else None))
    assert len(spaces) == expected
    assert len({point_set(S) for S in spaces}) == expected
    assert all(canonicalize(S) == S for S in spaces)


def test_linear_census_at_scale():
    pop, low = sweep_bounded_rank(3, 3, 2, 6, 0, affine=False)
    assert pop == 788_035 and low == []


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        next(enumerate_affine_subspaces(9, 6, 2, budget=10 ** 6))


# sweeps


@pytest.mark.parametrize("rows,cols,k,threshold,affine", [
    (2, 2, 2, 2, True), (2, 2, 2, 2, False), (2, 2, 3, 2, True), (3, 2, 3, 2, True), (2, 3, 2, 2, True),
])
def test_generic_sweep_matches_packed_kernel(rows, cols, k, threshold, affine):
    d = rows * cols
    patterns = pivot_patterns(d, k)
    table = _pykernels.rank_table(rows, cols)
    pop, raw = _pykernels.sweep_gf2(d, k, patterns, table, threshold, affine)
    gpop, graw = _sweep_generic(rows, cols, F2, k, patterns, threshold, affine)
    assert pop == gpop
    as_bits = [(key, sum(b << i for i, b in enumerate(rep)),
                tuple(sum(b << i for i, b in enumerate(r)) for r in rows_))
               for key, rep, rows_ in graw]
    assert raw == as_bits


@pytest.mark.skipif(_kernels.BACKEND != "cython", reason="compiled kernels not built")
@pytest.mark.parametrize("rows,cols,k,threshold,affine", [
    (2, 2, 2, 2, True), (2, 2, 3, 2, True), (3, 2, 3, 2, True), (3, 3, 7, 3, True), (3, 3, 6, 3, False),
])
def test_backends_agree(rows, cols, k, threshold, affine):
    from ffverify._kernels import _ckernels

    d = rows * cols
    patterns = pivot_patterns(d, k)
    assert _ckernels.rank_table(rows, cols) == _pykernels.rank_table(rows, cols)
    table = _pykernels.rank_table(rows, cols)
    assert (_ckernels.sweep_gf2(d, k, patterns, table, threshold, affine)
            == _pykernels.sweep_gf2(d, k, patterns, table, threshold, affine))


def test_sweep_brute_force_oracle():
    spaces = enumerate_affine_subspaces(4, 2, 2, shape=(2, 2))
    expected = [S for S in spaces if all(rank(A) <= 1 for A in elements(S))]
    pop, low = sweep_bounded_rank(2, 2, 2, 2, 2)
    assert pop == 140 and low == expected


def test_sweep_workers_are_deterministic():
    one = sweep_bounded_rank(3, 2, 2, 3, 2, workers=1)
    many = sweep_bounded_rank(3, 2, 2, 3, 2, workers=3)
    assert one == many


def test_sweep_output_is_canonical():
    _, low = sweep_bounded_rank(2, 2, 3, 2, 2)
    assert low and all(canonicalize(S) == S for S in low)
    assert all(canonicalize(canonicalize(S)) == canonicalize(S) for S in low)


def test_pure_python_fallback_selected(cli):
    proc = cli("verify", "flanders", "--n", "2", "--q", "2", env={"FFVERIFY_PURE_PYTHON": "1"})
    assert proc.returncode == 0
    probe = subprocess.run([sys.executable, "-c", "from ffverify import _kernels; print(_kernels.BACKEND)"],
                           capture_output=True, text=True, env={**os.environ, "FFVERIFY_PURE_PYTHON": "1"})
    assert probe.stdout.strip() == "python"

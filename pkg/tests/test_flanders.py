import itertools
import random

import pytest

from ffverify import flanders
from ffverify.ffmat import F2, F3, BudgetExceeded, MatF, enumerate_gl, rank
from ffverify.subspace import (
    SubspaceClass, act, canonicalize, classify, column_space, elements,
    exceptional_plane, row_space, sweep_bounded_rank,
)


def test_rank_bound_small():
    a = flanders.verify_rank_bound(2, 2, 1)
    b = flanders.verify_rank_bound(2, 3, 1)
    assert a.passed and a.population == 30 and a.census == {"exceeds_r": 30, "bounded_by_r": 0}
    assert b.passed and b.population == 120
    assert a.consistent() and b.consistent()


def test_rank_bound_linear_mode():
    rep = flanders.verify_rank_bound(2, 2, 1, "linear")
    assert rep.passed and rep.population == 15


def test_bad_mode():
    with pytest.raises(ValueError):
        flanders.verify_rank_bound(2, 2, 1, "projective")


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        flanders.verify_rank_bound(3, 3, 2, budget=1000)


def test_classify_affine_has_exceptional():
    rep = flanders.classify_maximal(2, 2, 1, "affine")
    assert rep.passed and rep.consistent()
    assert rep.census == {"ColumnType": 3, "RowType": 3, "Exceptional": 9, "Unclassified": 0}
    assert rep.notes["reference_plane_present"]


@pytest.mark.parametrize("q,mode,counts,pop", [
    (2, "linear", (3, 3), 35),
    (3, "affine", (4, 4), 1170),
    (3, "linear", (4, 4), 130),
])
def test_classify_without_exception(q, mode, counts, pop):
    rep = flanders.classify_maximal(2, q, 1, mode)
    assert rep.passed and rep.population == pop
    assert (rep.census["ColumnType"], rep.census["RowType"]) == counts
    assert rep.census["Exceptional"] == rep.census["Unclassified"] == 0


def test_exceptional_census_frozen_counts():
    rep = flanders.exceptional_census()
    assert rep.passed and rep.population == 140 and rep.consistent()
    assert rep.census == {"linear:ColumnType": 3, "linear:RowType": 3, "nonlinear:Exceptional": 9}
    assert rep.notes["reference_plane_present"] and rep.notes["transpose_present"]


def test_exceptional_census_brute_force_oracle():
    """Affine planes as point sets, built from triples of points."""
    pts = [MatF.from_bits(2, 2, b) for b in range(16)]
    planes = set()
    for a, u, v in itertools.product(pts, repeat=3):
        if u.is_zero() or v.is_zero() or u == v:
            continue
        planes.add(frozenset((a, a + u, a + v, a + u + v)))
    assert len(planes) == 140
    singular = [P for P in planes if all(rank(A) <= 1 for A in P)]
    nonlinear = [P for P in singular if MatF.zero(2) not in P]
    assert (len(singular), len(nonlinear)) == (15, 9)
    _, low = sweep_bounded_rank(2, 2, 2, 2, 2)
    assert {frozenset(elements(S)) for S in low} == set(singular)


def test_exceptional_planes_form_one_orbit_pair():
    gl = list(enumerate_gl(2, 2))
    plane = canonicalize(exceptional_plane())
    orbit = {act(P, Q, S) for P in gl for Q in gl for S in (plane, canonicalize(plane.transpose()))}
    _, low = sweep_bounded_rank(2, 2, 2, 2, 2)
    assert orbit == {S for S in low if not S.is_linear}


def test_orbit_oracle_agrees_with_classify():
    orbits = flanders.orbit_classes(2, 2, 1)
    assert len(orbits["ColumnType"]) == len(orbits["RowType"]) == 3
    for tag, members in orbits.items():
        assert all(classify(S, 1).value == tag for S in members)
    _, low = sweep_bounded_rank(2, 2, 2, 2, 2, affine=False)
    assert set(low) == orbits["ColumnType"] | orbits["RowType"]


def test_transposition_symmetry():
    _, low = sweep_bounded_rank(2, 2, 3, 2, 2)
    survivors = set(low)
    swap = {SubspaceClass.COLUMN: SubspaceClass.ROW, SubspaceClass.ROW: SubspaceClass.COLUMN}
    for S in low:
        T = canonicalize(S.transpose())
        assert T in survivors
        assert classify(T, 1) is swap[classify(S, 1)]


def test_classes_invariant_under_equivalence():
    _, low = sweep_bounded_rank(2, 2, 2, 2, 2)
    gl = list(enumerate_gl(2, 2))
    for S in low:
        cls = classify(S, 1)
        assert all(classify(act(P, Q, S), 1) is cls for P in gl for Q in gl)
    rng = random.Random(7)
    gl3 = list(enumerate_gl(3, 2))
    for S in (canonicalize(column_space(3, 2)), canonicalize(row_space(3, 2))):
        cls = classify(S, 2)
        for _ in range(100):
            P, Q = rng.choice(gl3), rng.choice(gl3)
            assert classify(act(P, Q, S), 2) is cls


def test_no_singular_space_above_the_bound():
    for k in (3, 4):
        _, low = sweep_bounded_rank(2, 2, 2, k, 2)
        assert low == []


def test_split_lemma_f2():
    rep = flanders.split_lemma_check(1, 1, 2)
    assert rep.passed and rep.notes["diagonal_found"]
    assert rep.census == {"factor_L": 1, "factor_C": 1, "exceptional": 1, "other": 0}


def test_split_lemma_f3():
    rep = flanders.split_lemma_check(1, 1, 3)
    assert rep.passed and rep.population == 4
    assert rep.census == {"factor_L": 1, "factor_C": 1, "exceptional": 0, "other": 0}


def test_split_lemma_rectangular_blocks():
    rep = flanders.split_lemma_check(1, 2, 2)
    assert rep.passed and rep.population == 35 and rep.consistent()
    assert rep.census["other"] == rep.census["exceptional"] == 0


def test_diagonal_line_satisfies_hypothesis():
    one = MatF.identity(1)
    assert (one @ one @ one + one @ one @ one).is_zero()


def test_rank_one_examples():
    E11, E12, E22 = (MatF.elementary(2, 2, i, j) for i, j in ((0, 0), (0, 1), (1, 1)))
    assert rank(E11 + E12) == 1
    assert rank(E11 + E22) == 2


@pytest.mark.parametrize("q,count,pairs,hits", [(2, 9, 81, 36), (3, 32, 1024, 416)])
def test_rank_one_sum(q, count, pairs, hits):
    rep = flanders.rank_one_sum_check(2, q)
    assert rep.passed and rep.population == pairs
    assert rep.notes["rank_one_count"] == count
    assert rep.census["sum_rank_one"] == hits


def test_rectangular():
    rep = flanders.rectangular_check(3, 2, 2, 1)
    assert rep.passed
    assert rep.census["ColumnType"] == 3
    assert rep.census["RowType"] == rep.census["Exceptional"] == rep.census["Unclassified"] == 0
    assert rep.notes["bound_population"] == 2604 and rep.notes["classify_population"] == 11160
    assert rep.consistent()


def test_rectangular_vacuous_bound():
    rep = flanders.rectangular_check(3, 2, 2, 2)
    assert rep.passed and rep.census["ColumnType"] == 1 and "bound" in rep.notes


def test_rectangular_rejects_square():
    with pytest.raises(ValueError):
        flanders.rectangular_check(2, 2, 2, 1)


@pytest.mark.parametrize("n,q,dim", [(2, 2, 4), (2, 3, 4), (3, 2, 9), (1, 3, 1)])
def test_affine_span_full(n, q, dim):
    rep = flanders.affine_span_gl(n, q)
    assert rep.passed and rep.notes["span_dim"] == dim


def test_affine_span_single_point():
    rep = flanders.affine_span_gl(1, 2)
    assert rep.passed and rep.notes["span_dim"] == 0 and rep.notes["span_point"] == "2:1:1:1"


def test_unipotent_helper():
    assert flanders.is_unipotent_space_invertible(3, 2)
    assert flanders.is_unipotent_space_invertible(2, 3)

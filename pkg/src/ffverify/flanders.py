"""Exhaustive checks of the bounded-rank results on small matrix spaces."""

from __future__ import annotations

import itertools

from .ffmat import MatF, check_budget, enumerate_gl, field as as_field, image_basis, kernel_basis, rank, rref_vectors
from .report import VerificationReport, timed
from .subspace import (
    AffineSubspace,
    SubspaceClass,
    canonicalize,
    classify,
    elements,
    enumerate_affine_subspaces,
    exceptional_plane,
    max_rank,
    sweep_bounded_rank,
)

CLASS_KEYS = [c.value for c in SubspaceClass]


def _mode_affine(mode: str) -> bool:
    if mode not in ("affine", "linear"):
        raise ValueError(f"mode must be 'affine' or 'linear', not {mode!r}")
    return mode == "affine"


def _params(n, q, r, mode, **extra) -> dict:
    out = {"n": n, "q": q, "r": r, "mode": mode}
    out.update(extra)
    return out


def verify_rank_bound(n: int, p, r: int, mode: str = "affine", workers: int = 1,
                      budget: int | None = None) -> VerificationReport:
    """Every subspace of Mat_n(F_q) of dimension n*r + 1 has an element of rank > r."""
    q = as_field(p).modulus
    affine = _mode_affine(mode)
    rep = VerificationReport("flanders-bound", _params(n, q, r, mode, dim=n * r + 1))
    with timed(rep):
        pop, low = sweep_bounded_rank(n, n, q, n * r + 1, r + 1, affine, workers=workers, budget=budget)
        rep.population = pop
        rep.census = {"exceeds_r": pop - len(low), "bounded_by_r": len(low)}
        for S in low:
            rep.fail({"subspace": S.to_json(), "reason": "max rank <= r above dimension n*r"})
    return rep


def _classify_survivors(rep: VerificationReport, survivors, r: int, allow_exceptional: bool) -> list:
    census = dict.fromkeys(CLASS_KEYS, 0)
    labelled = []
    for S in survivors:
        mr = max_rank(S)
        if mr != r:
            rep.fail({"subspace": S.to_json(), "reason": f"max rank {mr} below r"})
            continue
        cls = classify(S, r, check=False)
        census[cls.value] += 1
        labelled.append((S, cls))
        if cls is SubspaceClass.UNCLASSIFIED:
            rep.fail({"subspace": S.to_json(), "reason": "not equivalent to C_r or its transpose"})
        elif cls is SubspaceClass.EXCEPTIONAL and not allow_exceptional:
            rep.fail({"subspace": S.to_json(), "reason": "exceptional space outside (2, F_2, 1)"})
    rep.census = census
    return labelled


def classify_maximal(n: int, p, r: int, mode: str = "affine", workers: int = 1,
                     budget: int | None = None) -> VerificationReport:
    """Classify every n*r-dimensional subspace of Mat_n(F_q) with max rank r."""
    q = as_field(p).modulus
    affine = _mode_affine(mode)
    rep = VerificationReport("flanders-classify", _params(n, q, r, mode, dim=n * r))
    with timed(rep):
        pop, low = sweep_bounded_rank(n, n, q, n * r, r + 1, affine, workers=workers, budget=budget)
        rep.population = pop
        rep.out_of_scope = pop - len(low)
        allow = (n, q, r) == (2, 2, 1) and affine
        _classify_survivors(rep, low, r, allow)
        if allow:
            plane = canonicalize(exceptional_plane())
            rep.notes["reference_plane_present"] = plane in low
            if plane not in low:
                rep.fail({"reason": "the plane [x y; 0 x+1] is missing from the census"})
    return rep


def exceptional_census() -> VerificationReport:
    """All 2-dimensional affine subspaces of Mat_2(F_2) with max rank at most 1."""
    rep = VerificationReport("exceptional-census", {"n": 2, "q": 2, "r": 1, "dim": 2})
    with timed(rep):
        pop, low = sweep_bounded_rank(2, 2, 2, 2, 2, True)
        rep.population = pop
        rep.out_of_scope = pop - len(low)
        census = {}
        for S in low:
            cls = classify(S, 1, check=False)
            key = f"{'linear' if S.is_linear else 'nonlinear'}:{cls.value}"
            census[key] = census.get(key, 0) + 1
            if cls is SubspaceClass.UNCLASSIFIED:
                rep.fail({"subspace": S.to_json(), "reason": "unclassified"})
        rep.census = census
        plane = canonicalize(exceptional_plane())
        transposed = canonicalize(plane.transpose())
        rep.notes["reference_plane_present"] = plane in low
        rep.notes["transpose_present"] = transposed in low
        rep.notes["exceptional_planes"] = [S.to_json() for S in low if not S.is_linear]
        if plane not in low or transposed not in low:
            rep.fail({"reason": "reference plane or its transpose missing"})
    return rep


# ---------------------------------------------------------------------------
# split lemma


def _split_parts(v, p: int, q: int, k) -> tuple[MatF, MatF]:
    L = MatF(p, q, k, tuple(v[:p * q]))
    C = MatF(q, p, k, tuple(v[p * q:]))
    return L, C


def split_lemma_check(p: int, q: int, fld=2, budget: int | None = None) -> VerificationReport:
    """pq-dimensional subspaces H of Mat_{p,q} x Mat_{q,p} satisfying the
    hypotheses must be one of the two factors (or the F_2, p = q = 1 exception).
    """
    k = as_field(fld)
    card = k.modulus
    rep = VerificationReport("split-lemma", {"p": p, "q": q, "field": card})
    with timed(rep):
        gl = list(enumerate_gl(q, k))
        d = 2 * p * q
        census = {"factor_L": 0, "factor_C": 0, "exceptional": 0, "other": 0}
        diagonal_found = False
        pop = 0
        for H in enumerate_affine_subspaces(d, p * q, k, linear_only=True, budget=budget):
            pop += 1
            parts = [_split_parts(v.entries, p, q, k) for v in elements(H)]
            ok = all((L1 @ P @ C2 + L2 @ P @ C1).is_zero()
                     for (L1, C1), (L2, C2) in itertools.product(parts, repeat=2) for P in gl)
            if ok and card > 2 and p == q == 1:
                ok = all((L @ P @ C).is_zero() for L, C in parts for P in gl)
            if not ok:
                rep.out_of_scope += 1
                continue
            if all(C.is_zero() for _, C in parts):
                census["factor_L"] += 1
            elif all(L.is_zero() for L, _ in parts):
                census["factor_C"] += 1
            elif p == q == 1 and card == 2:
                census["exceptional"] += 1
                diagonal_found = diagonal_found or all(L == C for L, C in parts)
            else:
                census["other"] += 1
                rep.fail({"subspace": H.to_json(), "reason": "satisfies hypotheses but is not a factor"})
        rep.population = pop
        rep.census = census
        if p == q == 1 and card == 2:
            rep.notes["diagonal_found"] = diagonal_found
            if not diagonal_found:
                rep.fail({"reason": "diagonal line {(t, t)} not found"})
    return rep


# ---------------------------------------------------------------------------
# rank-one sums


def rank_one_matrices(n: int, fld=2) -> list[MatF]:
    k = as_field(fld)
    out = []
    for ent in itertools.product(range(k.modulus), repeat=n * n):
        M = MatF(n, n, k, ent)
        if rank(M) == 1:
            out.append(M)
    return out


def _span_key(vectors, p: int, width: int) -> tuple:
    return tuple(rref_vectors(list(vectors), p, width)[0])


def rank_one_sum_check(n: int, fld=2, budget: int | None = None) -> VerificationReport:
    """If M, N and M + N all have rank one then Ker M = Ker N or Im M = Im N."""
    k = as_field(fld)
    rep = VerificationReport("rank-one-sum", {"n": n, "q": k.modulus})
    with timed(rep):
        check_budget(k.modulus ** (n * n), "rank-one enumeration", budget)
        ones = rank_one_matrices(n, k)
        ker = {M: _span_key(kernel_basis(M), k.modulus, n) for M in ones}
        img = {M: _span_key(image_basis(M), k.modulus, n) for M in ones}
        census = {"sum_rank_one": 0, "vacuous": 0}
        for M, N in itertools.product(ones, repeat=2):
            if rank(M + N) != 1:
                census["vacuous"] += 1
                continue
            census["sum_rank_one"] += 1
            if ker[M] != ker[N] and img[M] != img[N]:
                rep.fail({"M": M.to_text(), "N": N.to_text()})
        rep.population = len(ones) ** 2
        rep.census = census
        rep.notes["rank_one_count"] = len(ones)
    return rep


# ---------------------------------------------------------------------------
# rectangular case


def rectangular_check(n: int, p: int, fld=2, r: int = 1, workers: int = 1,
                      budget: int | None = None) -> VerificationReport:
    """Bound and classification for affine subspaces of Mat_{n,p}(F_q), n > p."""
    k = as_field(fld)
    q = k.modulus
    if n <= p:
        raise ValueError("rectangular check needs n > p")
    if not 0 <= r <= p:
        raise ValueError("r must lie between 0 and p")
    rep = VerificationReport("flanders-rectangular", {"n": n, "p": p, "q": q, "r": r})
    with timed(rep):
        bound_dim = n * r + 1
        if bound_dim > n * p:
            bpop, low = 0, []
            rep.notes["bound"] = "vacuous: n*r + 1 exceeds the ambient dimension"
        else:
            bpop, low = sweep_bounded_rank(n, p, q, bound_dim, r + 1, True, workers=workers, budget=budget)
        for S in low:
            rep.fail({"subspace": S.to_json(), "reason": "max rank <= r above dimension n*r"})
        cpop, maximal = sweep_bounded_rank(n, p, q, n * r, r + 1, True, workers=workers, budget=budget)
        labelled = _classify_survivors(rep, maximal, r, allow_exceptional=False)
        for S, cls in labelled:
            if cls is not SubspaceClass.COLUMN:
                rep.fail({"subspace": S.to_json(), "reason": f"{cls.value} in the rectangular census"})
        rep.census["bound_exceeds_r"] = bpop - len(low)
        rep.census["bound_bounded_by_r"] = len(low)
        rep.population = bpop + cpop
        rep.out_of_scope = cpop - len(maximal)
        rep.notes["bound_population"] = bpop
        rep.notes["classify_population"] = cpop
    return rep


# ---------------------------------------------------------------------------
# affine span of GL_n


def affine_span_gl(n: int, fld=2) -> VerificationReport:
    """The affine span of GL_n(F_q) is all of Mat_n except for GL_1(F_2) = {1}."""
    k = as_field(fld)
    q = k.modulus
    rep = VerificationReport("affine-span-gl", {"n": n, "q": q})
    with timed(rep):
        gl = list(enumerate_gl(n, k))
        base = gl[0]
        diffs = [(M - base).entries for M in gl[1:]]
        span_dim = len(rref_vectors(diffs, q, n * n)[1]) if diffs else 0
        rep.population = len(gl)
        rep.census = {"invertible": len(gl)}
        rep.notes["span_dim"] = span_dim
        rep.notes["ambient_dim"] = n * n
        if (n, q) == (1, 2):
            rep.notes["span_point"] = base.to_text()
            if span_dim != 0 or base.entries != (1,):
                rep.fail({"reason": "GL_1(F_2) should span the single point {1}"})
        elif span_dim != n * n:
            rep.fail({"reason": f"affine span has dimension {span_dim} < {n * n}"})
    return rep


# ---------------------------------------------------------------------------
# cross-checks


def orbit_classes(n: int = 2, fld=2, r: int = 1) -> dict:
    """Canonical forms in the orbits of C_r and its transpose under (P, Q)."""
    from .subspace import act, column_space, row_space

    k = as_field(fld)
    gl = list(enumerate_gl(n, k))
    orbits = {}
    for tag, S in (("ColumnType", column_space(n, r, k)), ("RowType", row_space(n, r, k))):
        orbits[tag] = {act(P, Q, S) for P in gl for Q in gl}
    return orbits


def is_unipotent_space_invertible(n: int, fld=2) -> bool:
    from .subspace import unipotent_space

    return all(rank(M) == n for M in elements(unipotent_space(n, fld)))


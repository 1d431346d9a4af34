"""Report-producing checks for the forms and groups, and the full ordered suite."""

from __future__ import annotations

import numpy as np

from . import flanders
from .ffmat import F2, MatF, det, enumerate_gl, gl_order
from .groups import (
    AffineMap,
    GL2_LIST,
    affine_gl_stabilizers,
    alpha,
    build_sp,
    candidate_count,
    det_polar_gram,
    exceptional_formula,
    exceptional_u,
    frobenius_group,
    is_homomorphism,
    phi,
    psi_bar,
    q1_to_gl_index,
    random_pairs,
    stabilizer_oq,
    symplectic_group,
    to_perm,
)
from .quadchar2 import QuadFormC2, arf, m_of_q, q1_space, q_space
from .report import VerificationReport, timed


def gl_counts() -> VerificationReport:
    rep = VerificationReport("gl-counts", {"cases": "(2,2) (2,3) (4,2)"})
    with timed(rep):
        for n, q in ((2, 2), (2, 3), (4, 2)):
            mats = list(enumerate_gl(n, q))
            key = f"GL{n}(F{q})"
            rep.census[key] = len(mats)
            if len(mats) != gl_order(n, q) or len(set(mats)) != len(mats):
                rep.fail({"group": key, "count": len(mats), "expected": gl_order(n, q)})
        rep.population = sum(rep.census.values())
    return rep


def quadratic_forms() -> VerificationReport:
    """Sizes of Q(b) and Q_1(b), det M(q) = Arf(q), and Arf invariance under Sp(b)."""
    rep = VerificationReport("quadratic-forms", {"dim": 4})
    with timed(rep):
        space = q_space()
        q1 = q1_space()
        rep.notes["q_space"] = len(space)
        rep.notes["q1_space"] = len(q1)
        if len(space) != 16 or len(q1) != 6:
            rep.fail({"reason": "wrong sizes", "q": len(space), "q1": len(q1)})
        for q in space:
            if det(m_of_q(q)) != arf(q):
                rep.fail({"form": q.to_json(), "reason": "det M(q) != Arf(q)"})
        # q o U for every pair at once: U^t T U, folded back to upper-triangular form
        Us = symplectic_group().matrices
        Ts = np.array([q.T.row_lists() for q in space], dtype=np.int64)
        A = np.einsum("uji,fjk,ukl->ufil", Us, Ts, Us) % 2
        folded = (np.triu(A, 1) + np.triu(np.swapaxes(A, 2, 3), 1)) % 2
        folded += A * np.eye(4, dtype=np.int64)
        reference = [arf(q) for q in space]
        arf_of = {}
        checks = 0
        for ui, row in enumerate(folded):
            for fi, T in enumerate(row):
                key = tuple(T.ravel().tolist())
                if key not in arf_of:
                    arf_of[key] = arf(QuadFormC2(MatF(4, 4, F2, key)))
                checks += 1
                if arf_of[key] != reference[fi]:
                    rep.fail({"form": space[fi].to_json(), "U": symplectic_group().elements[ui].to_text(),
                              "reason": "Arf not invariant"})
        rep.population = checks
        rep.census = {"arf_invariance_checks": checks}
    return rep


def group_orders() -> VerificationReport:
    rep = VerificationReport("group-orders", {"n": 2, "q": 2})
    with timed(rep):
        sp = symplectic_group()
        ag = affine_gl_stabilizers()
        fr = frobenius_group(2, 2)
        zero_translation = {u for u in ag if u.is_linear}
        rep.population = candidate_count()
        rep.census = {"stabilizes_GL2": ag.order, "rejected": rep.population - ag.order}
        rep.notes["orders"] = {"Sp(b)": sp.order, "AG2(F2)": ag.order, "G2(F2)": fr.order}
        rep.notes["zero_translation"] = len(zero_translation)
        rep.notes["frobenius_is_linear_part"] = zero_translation == set(fr.elements)
        for name, G, want in (("Sp(b)", sp, 720), ("AG2(F2)", ag, 720), ("G2(F2)", fr, 72)):
            if G.order != want or not G.is_group():
                rep.fail({"group": name, "order": G.order, "expected": want})
        if zero_translation != set(fr.elements):
            rep.fail({"reason": "zero-translation part differs from the Frobenius group"})
    return rep


def _perm_images(perms) -> np.ndarray:
    return np.array([p.matrix() for p in perms])


def iso_psi_bar() -> VerificationReport:
    rep = VerificationReport("iso-psi-bar", {"domain": "Sp(b)", "codomain": "S(Q1(b))"})
    with timed(rep):
        sp = symplectic_group()
        perms = [psi_bar(u) for u in sp]
        rep.population = sp.order
        kernel = sum(p.is_identity() for p in perms)
        image = len(set(perms))
        rep.census = {"maps_to_identity": kernel, "maps_elsewhere": sp.order - kernel}
        rep.notes["image_order"] = image
        if not is_homomorphism(sp, _perm_images(perms), p=7):
            rep.fail({"reason": "not a homomorphism"})
        if kernel != 1 or image != 720:
            rep.fail({"reason": "not bijective onto S_6", "image": image, "kernel": kernel})
    return rep


def iso_phi(seed: int = 0, samples: int = 10_000) -> VerificationReport:
    rep = VerificationReport("iso-phi", {"domain": "Sp(b)", "codomain": "AG2(F2)", "seed": seed})
    with timed(rep):
        sp = symplectic_group()
        ag = affine_gl_stabilizers()
        maps = [phi(u) for u in sp]
        rep.population = sp.order
        outside = sum(m not in ag for m in maps)
        rep.census = {"lands_in_AG2": sp.order - outside, "outside_AG2": outside}
        rep.notes["image_order"] = len(set(maps))
        if set(maps) != set(ag.elements):
            rep.fail({"reason": "phi is not a bijection onto AG2(F2)"})
        if not is_homomorphism(sp, np.array([m.augmented() for m in maps]), p=2):
            rep.fail({"reason": "not a homomorphism (Cayley check)"})
        bad = 0
        for a, b in random_pairs(samples, sp.order, seed):
            if maps[sp.mul(a, b)] != maps[a] @ maps[b]:
                bad += 1
        rep.notes["sampled_pairs"] = samples
        if bad:
            rep.fail({"reason": "sampled composition mismatch", "count": bad})
        corr = q1_to_gl_index()
        composite = all(to_perm(f)(corr[i]) == corr[pb(i)]
                        for f, pb in zip(maps, (psi_bar(u) for u in sp)) for i in range(6))
        rep.notes["to_perm_phi_equals_psi_bar"] = composite
        if not composite:
            rep.fail({"reason": "to_perm o phi differs from psi_bar"})
    return rep


def iso_perm() -> VerificationReport:
    rep = VerificationReport("iso-perm", {"domain": "AG2(F2)", "codomain": "S(GL2(F2))"})
    with timed(rep):
        ag = affine_gl_stabilizers()
        perms = [to_perm(u) for u in ag]
        kernel = sum(p.is_identity() for p in perms)
        image = len(set(perms))
        rep.population = ag.order
        rep.census = {"maps_to_identity": kernel, "maps_elsewhere": ag.order - kernel}
        rep.notes["image_order"] = image
        if not is_homomorphism(ag, _perm_images(perms), p=7):
            rep.fail({"reason": "not a homomorphism"})
        if kernel != 1 or image != 720:
            rep.fail({"reason": "not bijective onto S_6"})
        fr = frobenius_group(2, 2)
        linear_image = {to_perm(u) for u in fr}
        rep.notes["frobenius_image_order"] = len(linear_image)
        if len(linear_image) != 72:
            rep.fail({"reason": "Frobenius image should be a subgroup of order 72"})
    return rep


def iso_alpha() -> VerificationReport:
    rep = VerificationReport("iso-alpha", {"domain": "AG2(F2)", "codomain": "Sp(B)"})
    with timed(rep):
        ag = affine_gl_stabilizers()
        spB = build_sp(det_polar_gram())
        parts = [alpha(u) for u in ag]
        rep.population = ag.order
        kernel = sum(L == MatF.identity(4) for L in parts)
        rep.census = {"maps_to_identity": kernel, "maps_elsewhere": ag.order - kernel}
        rep.notes["image_order"] = len(set(parts))
        rep.notes["Sp(B)_order"] = spB.order
        if set(parts) != set(spB.elements):
            rep.fail({"reason": "linear parts do not fill Sp(B) bijectively"})
        if kernel != 1:
            rep.fail({"reason": "a nontrivial translation preserves GL2(F2)"})
        if not is_homomorphism(ag, np.array([L.row_lists() for L in parts]), p=2):
            rep.fail({"reason": "not a homomorphism"})
        preserves_det = all(det(u.on_matrix(M)) == det(M)
                            for u in ag for M in (MatF.from_bits(2, 2, b) for b in range(16)))
        rep.notes["determinant_preserved"] = preserves_det
        if not preserves_det:
            rep.fail({"reason": "some element does not preserve det"})
    return rep


def exceptional_automorphism() -> VerificationReport:
    rep = VerificationReport("exceptional-u", {"n": 2, "q": 2})
    with timed(rep):
        try:
            u = exceptional_u()
        except AssertionError as exc:
            rep.fail({"reason": str(exc)})
            return rep
        rep.population = 16
        agree = sum(u.on_matrix(M) == exceptional_formula(M) for M in (MatF.from_bits(2, 2, b) for b in range(16)))
        rep.census = {"formula_agrees": agree, "formula_differs": 16 - agree}
        rep.notes["u_of_zero"] = u.on_matrix(MatF.zero(2)).to_text()
        rep.notes["swaps"] = [GL2_LIST[0].to_text(), GL2_LIST[1].to_text()]
        rep.notes["map"] = u.to_json()
        if agree != 16 or u.translation != (1, 1, 1, 1):
            rep.fail({"reason": "closed form or non-linearity check failed"})
        if u @ u != AffineMap.identity(4):
            rep.fail({"reason": "u is not an involution"})
    return rep


def orthogonal_stabilizers() -> VerificationReport:
    rep = VerificationReport("orthogonal-groups", {"forms": "Q1(b)"})
    with timed(rep):
        sp = symplectic_group()
        q1 = q1_space()
        fixing = 0
        for i, q in enumerate(q1):
            O = stabilizer_oq(q, sp)
            others = [j for j in range(6) if j != i]
            restricted = {tuple(psi_bar(u)(j) for j in others) for u in O}
            fixing += O.order
            rep.notes[f"O(q{i})"] = {"order": O.order, "faithful_image": len(restricted)}
            if O.order != 120 or len(restricted) != 120 or not O.is_group():
                rep.fail({"form": q.to_json(), "order": O.order, "faithful_image": len(restricted)})
        rep.population = len(q1) * sp.order
        rep.census = {"fixes_q": fixing, "moves_q": rep.population - fixing}
    return rep


def run_all(workers: int = 1, seed: int = 0) -> list[VerificationReport]:
    """The acceptance suite, in criterion order."""
    F = flanders
    return [
        gl_counts(),
        F.verify_rank_bound(2, 2, 1),
        F.verify_rank_bound(2, 3, 1),
        F.verify_rank_bound(3, 2, 2, workers=workers),
        F.classify_maximal(2, 2, 1, "affine"),
        F.classify_maximal(2, 2, 1, "linear"),
        F.classify_maximal(2, 3, 1, "affine"),
        F.exceptional_census(),
        F.classify_maximal(3, 2, 2, "affine", workers=workers),
        F.split_lemma_check(1, 1, 2),
        F.split_lemma_check(1, 1, 3),
        F.split_lemma_check(1, 2, 2),
        F.rectangular_check(3, 2, 2, 1, workers=workers),
        F.affine_span_gl(2, 2),
        F.affine_span_gl(2, 3),
        F.affine_span_gl(3, 2),
        F.affine_span_gl(1, 2),
        F.rank_one_sum_check(2, 2),
        F.rank_one_sum_check(2, 3),
        quadratic_forms(),
        group_orders(),
        iso_psi_bar(),
        iso_phi(seed=seed),
        iso_perm(),
        iso_alpha(),
        exceptional_automorphism(),
        orthogonal_stabilizers(),
    ]

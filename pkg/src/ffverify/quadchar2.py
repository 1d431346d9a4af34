"""Quadratic forms over F_2, polar forms, symplectic bases and the Arf invariant.

A form is keyed by its unique upper-triangular representing matrix T, so that
q(x) = x^t T x. Vectors are tuples of bits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .ffmat import F2, MatF, det

MAX_DIM = 8


class DegenerateFormError(ValueError):
    pass


def _bilinear(gram: MatF, x: Sequence[int], y: Sequence[int]) -> int:
    n = gram.rows
    e = gram.entries
    s = 0
    for i in range(n):
        if x[i]:
            for j in range(n):
                if y[j] and e[i * n + j]:
                    s ^= 1
    return s


@dataclass(frozen=True)
class QuadFormC2:
    T: MatF

    def __post_init__(self):
        T = self.T
        if T.p != 2 or T.rows != T.cols:
            raise ValueError("representing matrix must be square over F_2")
        if T.rows > MAX_DIM:
            raise ValueError(f"dimension above {MAX_DIM} is not supported")
        if any(T[i, j] for i in range(T.rows) for j in range(i)):
            raise ValueError("representing matrix must be upper triangular")

    @classmethod
    def from_matrix(cls, A: MatF) -> "QuadFormC2":
        """The form x -> x^t A x for an arbitrary representing matrix A."""
        n = A.rows
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = A[i, i]
            for j in range(i + 1, n):
                ent[i * n + j] = (A[i, j] + A[j, i]) % 2
        return cls(MatF(n, n, F2, tuple(ent)))

    @property
    def dim(self) -> int:
        return self.T.rows

    def __call__(self, x: Sequence[int]) -> int:
        n = self.dim
        e = self.T.entries
        s = 0
        for i in range(n):
            if x[i]:
                for j in range(i, n):
                    if x[j] and e[i * n + j]:
                        s ^= 1
        return s

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.T[i, i] for i in range(self.dim))

    def polar(self) -> MatF:
        return polar(self)

    def compose(self, U: MatF) -> "QuadFormC2":
        """The form x -> q(U x)."""
        return QuadFormC2.from_matrix(U.T @ self.T @ U)

    def translate(self, functional: Sequence[int]) -> "QuadFormC2":
        """q + l for a linear functional l; in characteristic 2, l(x) = sum l_i x_i^2."""
        n = self.dim
        ent = list(self.T.entries)
        for i, li in enumerate(functional):
            ent[i * n + i] ^= li & 1
        return QuadFormC2(MatF(n, n, F2, tuple(ent)))

    def to_json(self) -> dict:
        return {"dim": self.dim, "T": self.T.to_text()}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadFormC2":
        T = MatF.from_text(obj["T"])
        if T.rows != int(obj["dim"]):
            raise ValueError("dim does not match T")
        return cls(T)


def polar(q: QuadFormC2) -> MatF:
    """Gram matrix of (x, y) -> q(x+y) - q(x) - q(y), i.e. T + T^t."""
    return q.T + q.T.T


def is_regular(q: QuadFormC2) -> bool:
    return det(polar(q)) != 0


def is_alternating(gram: MatF) -> bool:
    n = gram.rows
    return gram.rows == gram.cols and all(gram[i, i] == 0 for i in range(n)) and gram == gram.T


@dataclass(frozen=True)
class SympBasis:
    pairs: tuple

    def vectors(self) -> list[tuple]:
        return [v for pair in self.pairs for v in pair]

    def matrix(self) -> MatF:
        """Columns e_1, f_1, e_2, f_2, ..."""
        vs = self.vectors()
        return MatF.from_rows(vs, F2).T

    def is_symplectic(self, gram: MatF) -> bool:
        for i, (ei, fi) in enumerate(self.pairs):
            for j, (ej, fj) in enumerate(self.pairs):
                if _bilinear(gram, ei, fj) != int(i == j):
                    return False
                if _bilinear(gram, ei, ej) or _bilinear(gram, fi, fj):
                    return False
        return len(self.pairs) * 2 == gram.rows and det(self.matrix()) == 1


def symplectic_basis(gram: MatF) -> SympBasis:
    """Hyperbolic pairs for a nondegenerate alternating form over F_2.

    Takes the first unprocessed vector e, pairs it with the first remaining
    vector f with b(e, f) = 1, and projects the rest onto the orthogonal
    complement of <e, f>.
    """
    if gram.p != 2 or not is_alternating(gram):
        raise DegenerateFormError("Gram matrix is not alternating over F_2")
    n = gram.rows
    if n % 2 or det(gram) == 0:
        raise DegenerateFormError("alternating form is degenerate")
    remaining = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    pairs = []
    while remaining:
        e = remaining.pop(0)
        for idx, f in enumerate(remaining):
            if _bilinear(gram, e, f):
                break
        else:
            raise DegenerateFormError("alternating form is degenerate")
        remaining.pop(idx)
        projected = []
        for v in remaining:
            bf, be = _bilinear(gram, v, f), _bilinear(gram, v, e)
            projected.append(tuple(a ^ (bf & x) ^ (be & y) for a, x, y in zip(v, e, f)))
        remaining = projected
        pairs.append((e, f))
    return SympBasis(tuple(pairs))


def arf(q: QuadFormC2) -> int:
    """Sum of q(e_i) q(f_i) over a symplectic basis of the polar form."""
    if not is_regular(q):
        raise DegenerateFormError("Arf invariant needs a regular form")
    return sum(q(e) & q(f) for e, f in symplectic_basis(polar(q)).pairs) % 2


def canonical_gram(dim: int = 4) -> MatF:
    """Standard symplectic Gram matrix pairing coordinate i with i + dim/2."""
    if dim % 2:
        raise ValueError("symplectic dimension must be even")
    h = dim // 2
    ent = [0] * (dim * dim)
    for i in range(h):
        ent[i * dim + i + h] = 1
        ent[(i + h) * dim + i] = 1
    return MatF(dim, dim, F2, tuple(ent))


def diagonal_index(q: QuadFormC2) -> int:
    """Index of q in its space: diagonal bits d_0 + 2 d_1 + 4 d_2 + ..."""
    return sum(bit << i for i, bit in enumerate(q.diagonal()))


@dataclass(frozen=True)
class QSpace:
    gram: MatF
    forms: tuple

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self) -> Iterator[QuadFormC2]:
        return iter(self.forms)

    def __getitem__(self, i: int) -> QuadFormC2:
        return self.forms[i]

    def index(self, q: QuadFormC2) -> int:
        return diagonal_index(q)

    def __contains__(self, q: QuadFormC2) -> bool:
        return q.dim == self.gram.rows and polar(q) == self.gram

    def to_json(self) -> list[dict]:
        return [q.to_json() for q in self.forms]


@lru_cache(maxsize=16)
def q_space(gram: MatF | None = None) -> QSpace:
    """All forms with polar form ``gram``, in diagonal-index order."""
    gram = canonical_gram(4) if gram is None else gram
    if not is_alternating(gram):
        raise DegenerateFormError("Gram matrix is not alternating")
    n = gram.rows
    forms = []
    for idx in range(1 << n):
        ent = [0] * (n * n)
        for i in range(n):
            ent[i * n + i] = (idx >> i) & 1
            for j in range(i + 1, n):
                ent[i * n + j] = gram[i, j]
        forms.append(QuadFormC2(MatF(n, n, F2, tuple(ent))))
    return QSpace(gram, tuple(forms))


def q1_space(gram: MatF | None = None) -> list[QuadFormC2]:
    """The Arf-invariant-one forms of :func:`q_space`, in index order."""
    return [q for q in q_space(gram) if arf(q) == 1]


def m_of_q(q: QuadFormC2) -> MatF:
    """[a d; b c] where (a, b, c, d) is the diagonal of T."""
    if q.dim != 4 or polar(q) != canonical_gram(4):
        raise ValueError("form does not have the canonical symplectic polar form")
    a, b, c, d = q.diagonal()
    return MatF.from_rows([[a, d], [b, c]], F2)


def q_of_m(M: MatF) -> QuadFormC2:
    if M.shape != (2, 2) or M.p != 2:
        raise ValueError("expected a 2x2 matrix over F_2")
    a, d, b, c = M.entries
    return q_space()[a + 2 * b + 4 * c + 8 * d]


def all_vectors(n: int) -> Iterator[tuple]:
    return itertools.product((0, 1), repeat=n)

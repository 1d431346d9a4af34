"""The finite groups around GL_2(F_2) and the maps between them.

Matrices in Mat_2(F_2) are identified with F_2^4 through row-major
vectorization (m11, m12, m21, m22). Affine maps compose as (f @ g)(x) = f(g(x)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .ffmat import F2, FieldP, MatF, check_budget, det, enumerate_gl, field as as_field, gl_order, inverse
from .quadchar2 import QuadFormC2, canonical_gram, m_of_q, q1_space, q_of_m, q_space


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class AffineMap:
    dim: int
    field: FieldP
    linear: MatF
    translation: tuple

    def __post_init__(self):
        if self.linear.shape != (self.dim, self.dim) or len(self.translation) != self.dim:
            raise ValueError("linear part and translation must match dim")

    @classmethod
    def linear_map(cls, L: MatF) -> "AffineMap":
        return cls(L.rows, L.field, L, (0,) * L.rows)

    @classmethod
    def translation_by(cls, t: Sequence[int], p=2) -> "AffineMap":
        k = as_field(p)
        return cls(len(t), k, MatF.identity(len(t), k), tuple(t))

    @classmethod
    def identity(cls, dim: int, p=2) -> "AffineMap":
        return cls.translation_by((0,) * dim, p)

    @classmethod
    def from_function(cls, f: Callable[[tuple], tuple], dim: int, p=2) -> "AffineMap":
        """Read off an affine map from its values at 0 and the unit vectors."""
        k = as_field(p)
        q = k.modulus
        t = tuple(f((0,) * dim))
        cols = []
        for j in range(dim):
            img = f(tuple(int(i == j) for i in range(dim)))
            cols.append([(a - b) % q for a, b in zip(img, t)])
        L = MatF(dim, dim, k, tuple(cols[j][i] for i in range(dim) for j in range(dim)))
        return cls(dim, k, L, t)

    @property
    def is_linear(self) -> bool:
        return not any(self.translation)

    @property
    def key(self) -> tuple:
        return (self.linear.entries, self.translation)

    def __call__(self, x: Sequence[int]) -> tuple:
        q = self.field.modulus
        return tuple((a + b) % q for a, b in zip(self.linear.apply(x), self.translation))

    def on_matrix(self, M: MatF) -> MatF:
        return MatF(M.rows, M.cols, M.field, self(M.entries))

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        q = self.field.modulus
        t = tuple((a + b) % q for a, b in zip(self.linear.apply(other.translation), self.translation))
        return AffineMap(self.dim, self.field, self.linear @ other.linear, t)

    def inverse(self) -> "AffineMap":
        Li = inverse(self.linear)
        q = self.field.modulus
        return AffineMap(self.dim, self.field, Li, tuple((-x) % q for x in Li.apply(self.translation)))

    def augmented(self) -> list[list[int]]:
        rows = [r + [t] for r, t in zip(self.linear.row_lists(), self.translation)]
        return rows + [[0] * self.dim + [1]]

    def to_json(self) -> dict:
        out = {"translation": list(self.translation)}
        if self.field.modulus == 2:
            out["linear"] = self.linear.to_hex_rows()
        else:
            out["linear"] = self.linear.to_text()
        return out


@dataclass(frozen=True)
class FrobeniusElement:
    """M -> P M Q (kind "u") or M -> P M^t Q (kind "v")."""

    kind: str
    P: MatF
    Q: MatF

    def __call__(self, M: MatF) -> MatF:
        if self.kind == "u":
            return self.P @ M @ self.Q
        return self.P @ M.T @ self.Q

    def as_affine_map(self) -> AffineMap:
        n = self.P.rows
        k = self.P.field
        return AffineMap.from_function(lambda x: self(MatF(n, n, k, tuple(x))).entries, n * n, k)


@dataclass(frozen=True)
class Perm:
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __matmul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Perm":
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(tuple(out))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def one_line(self) -> str:
        return " ".join(str(i + 1) for i in self.images)

    def matrix(self) -> np.ndarray:
        n = len(self.images)
        m = np.zeros((n, n), dtype=np.int64)
        m[list(self.images), list(range(n))] = 1
        return m


def _as_rows(e) -> list[list[int]]:
    if isinstance(e, AffineMap):
        return e.augmented()
    return e.row_lists()


def _sort_key(e):
    return e.key if isinstance(e, AffineMap) else e.entries


class GroupTable:
    """A finite matrix or affine group, elements in canonical sorted order."""

    def __init__(self, elements: Iterable, p=2):
        self.field = as_field(p)
        self.elements = sorted(set(elements), key=_sort_key)
        self.index = {e: i for i, e in enumerate(self.elements)}
        q = self.field.modulus
        self._mats = np.array([_as_rows(e) for e in self.elements], dtype=np.int64)
        size = self._mats.shape[1] if len(self.elements) else 0
        self._weights = q ** np.arange(size * size, dtype=np.int64)
        keys = self._encode(self._mats)
        self._order = np.argsort(keys)
        self._sorted_keys = keys[self._order]
        self._cayley = None

    def _encode(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(mats.shape[:-2] + (-1,))
        return flat @ self._weights

    def _lookup(self, keys: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        found = self._sorted_keys[pos] == keys
        return np.where(found, self._order[pos], -1)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.index

    @property
    def matrices(self) -> np.ndarray:
        return self._mats

    def identity_index(self) -> int:
        eye = np.eye(self._mats.shape[1], dtype=np.int64)
        return int(self._lookup(self._encode(eye[None]))[0])

    def cayley(self) -> np.ndarray:
        """Index table of products; -1 marks products outside the set."""
        if self._cayley is None:
            q = self.field.modulus
            n = self.order
            table = np.empty((n, n), dtype=np.int64)
            for a in range(n):
                prods = np.matmul(self._mats[a], self._mats) % q
                table[a] = self._lookup(self._encode(prods))
            self._cayley = table
        return self._cayley

    def is_group(self) -> bool:
        e = self.identity_index()
        if e < 0:
            return False
        table = self.cayley()
        if (table < 0).any():
            return False
        return bool(((table == e).sum(axis=1) == 1).all())

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley()[a, b])

    def to_json(self, with_table: bool = False) -> dict:
        out = {"order": self.order, "elements": [_element_json(e) for e in self.elements]}
        if with_table:
            out["cayley"] = self.cayley().tolist()
        return out


def _element_json(e):
    if isinstance(e, AffineMap):
        return e.to_json()
    return e.to_hex_rows() if e.p == 2 else e.to_text()


def is_homomorphism(G: GroupTable, images: np.ndarray, p: int) -> bool:
    """images[i] is the matrix of the image of G.elements[i]; checks all pairs."""
    table = G.cayley()
    imgs = np.asarray(images, dtype=np.int64)
    for a in range(G.order):
        prods = np.matmul(imgs[a], imgs) % p
        if not np.array_equal(prods, imgs[table[a]]):
            return False
    return True


# ---------------------------------------------------------------------------
# constructions


def _gl_array(n: int, p: int) -> tuple[list[MatF], np.ndarray]:
    mats = list(enumerate_gl(n, p))
    return mats, np.array([m.row_lists() for m in mats], dtype=np.int64)


def build_sp(gram: MatF) -> GroupTable:
    """All U in GL(F_2^dim) with U^t G U = G."""
    if gram.p != 2:
        raise ValueError("symplectic groups are built over F_2 only")
    mats, arr = _gl_array(gram.rows, 2)
    G = np.array(gram.row_lists(), dtype=np.int64)
    lhs = np.matmul(np.matmul(arr.transpose(0, 2, 1), G), arr) % 2
    keep = (lhs == G).all(axis=(1, 2))
    return GroupTable([m for m, k in zip(mats, keep) if k], 2)


def frobenius_group(n: int, p=2, budget: int | None = None) -> GroupTable:
    """All maps M -> P M Q and M -> P M^t Q as linear maps on vec(M)."""
    k = as_field(p)
    check_budget(2 * gl_order(n, k.modulus) ** 2, "Frobenius group construction", budget)
    gl = list(enumerate_gl(n, k))
    maps = set()
    for P in gl:
        for Q in gl:
            for kind in ("u", "v"):
                maps.add(FrobeniusElement(kind, P, Q).as_affine_map())
    return GroupTable(maps, k)


# Fixed listing order of GL_2(F_2); permutations of the six are indexed by it.
GL2_LIST = (
    MatF.from_rows([[1, 0], [0, 1]]),
    MatF.from_rows([[0, 1], [1, 0]]),
    MatF.from_rows([[1, 1], [0, 1]]),
    MatF.from_rows([[1, 0], [1, 1]]),
    MatF.from_rows([[0, 1], [1, 1]]),
    MatF.from_rows([[1, 1], [1, 0]]),
)
GL2_INDEX = {m: i for i, m in enumerate(GL2_LIST)}


def _bits4(v: Sequence[int]) -> int:
    return v[0] | v[1] << 1 | v[2] << 2 | v[3] << 3


@lru_cache(maxsize=1)
def affine_gl_stabilizers() -> GroupTable:
    """Affine bijections of Mat_2(F_2) sending each invertible matrix to one.

    Exhaustive over the 20160 * 16 candidates; bijectivity makes "maps the
    six into GL" equivalent to stabilizing GL_2(F_2).
    """
    mats, arr = _gl_array(4, 2)
    gl_vecs = np.array([m.entries for m in GL2_LIST], dtype=np.int64)  # (6, 4)
    weights = np.array([1, 2, 4, 8], dtype=np.int64)
    images = (np.einsum("nij,kj->nki", arr, gl_vecs) % 2) @ weights  # (N, 6)
    is_gl = np.zeros(16, dtype=bool)
    is_gl[[_bits4(m.entries) for m in GL2_LIST]] = True
    shifted = images[:, None, :] ^ np.arange(16)[None, :, None]  # (N, 16, 6)
    ok = is_gl[shifted].all(axis=2)
    found = []
    for li, ti in zip(*np.nonzero(ok)):
        t = tuple((int(ti) >> b) & 1 for b in range(4))
        found.append(AffineMap(4, F2, mats[li], t))
    return GroupTable(found, 2)


def candidate_count() -> int:
    return gl_order(4, 2) * 16


def det_polar_gram() -> MatF:
    """Gram matrix of B(X, Y) = det(X+Y) - det X - det Y on vec(Mat_2(F_2))."""
    basis = [MatF.from_flat(2, 2, [int(i == j) for j in range(4)]) for i in range(4)]
    rows = [[(det(X + Y) - det(X) - det(Y)) % 2 for Y in basis] for X in basis]
    return MatF.from_rows(rows, F2)


# ---------------------------------------------------------------------------
# homomorphisms


@lru_cache(maxsize=1)
def symplectic_group() -> GroupTable:
    return build_sp(canonical_gram(4))


def psi(u: MatF) -> Perm:
    """Permutation q -> q o u^-1 of the 16 forms of Q(b), by diagonal index."""
    space = q_space()
    ui = inverse(u)
    return Perm(tuple(space.index(q.compose(ui)) for q in space))


@lru_cache(maxsize=None)
def psi_bar(u: MatF) -> Perm:
    """psi restricted to the six Arf-one forms, indexed in diagonal order."""
    q1 = q1_space()
    pos = {q: i for i, q in enumerate(q1)}
    ui = inverse(u)
    return Perm(tuple(pos[q.compose(ui)] for q in q1))


@lru_cache(maxsize=None)
def phi(u: MatF) -> AffineMap:
    """The affine map M(q) -> M(q o u^-1) of Mat_2(F_2)."""
    ui = inverse(u)

    def f(x):
        return m_of_q(q_of_m(MatF(2, 2, F2, tuple(x))).compose(ui)).entries

    g = AffineMap.from_function(f, 4, F2)
    for bits in range(16):
        x = tuple((bits >> b) & 1 for b in range(4))
        if g(x) != f(x):
            raise AssertionError("conjugated action is not affine")
    return g


def to_perm(u: AffineMap) -> Perm:
    """Restriction of u to GL_2(F_2), indexed by GL2_LIST."""
    try:
        return Perm(tuple(GL2_INDEX[u.on_matrix(M)] for M in GL2_LIST))
    except KeyError:
        raise ValueError("affine map does not stabilize GL_2(F_2)") from None


def alpha(u: AffineMap) -> MatF:
    """The linear part of u, checked to preserve the polar form of det."""
    B = det_polar_gram()
    L = u.linear
    if L.T @ B @ L != B:
        raise AssertionError("linear part does not preserve the polar form of det")
    return L


def q1_to_gl_index() -> list[int]:
    """Position in GL2_LIST of M(q) for each Arf-one form q."""
    return [GL2_INDEX[m_of_q(q)] for q in q1_space()]


def exceptional_formula(M: MatF) -> MatF:
    """u[a c; b d] = [b+c+d+1, a+b+d+1; a+c+d+1, a+b+c+1]."""
    a, c, b, d = M.entries
    return MatF.from_rows([[b + c + d + 1, a + b + d + 1],
                           [a + c + d + 1, a + b + c + 1]], F2)


def exceptional_u() -> AffineMap:
    """The element of AG_2(F_2) swapping I and [0 1; 1 0] and fixing the rest."""
    target = Perm((1, 0, 2, 3, 4, 5))
    hits = [u for u in affine_gl_stabilizers() if to_perm(u) == target]
    if len(hits) != 1:
        raise AssertionError(f"expected a unique transposition, found {len(hits)}")
    u = hits[0]
    for bits in range(16):
        M = MatF.from_bits(2, 2, bits)
        if u.on_matrix(M) != exceptional_formula(M):
            raise AssertionError("exceptional element disagrees with the closed form")
    if u.is_linear:
        raise AssertionError("exceptional element is linear")
    return u


def stabilizer_oq(q: QuadFormC2, sp: GroupTable | None = None) -> GroupTable:
    """The orthogonal group O(q): elements of Sp(b) with q o u = q."""
    sp = symplectic_group() if sp is None else sp
    return GroupTable([u for u in sp if q.compose(u) == q], 2)


def random_pairs(n: int, size: int, seed: int) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    return [(rng.randrange(size), rng.randrange(size)) for _ in range(n)]

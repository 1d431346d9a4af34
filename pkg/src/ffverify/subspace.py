"""Affine subspaces of matrix spaces Mat_{n,p}(F_q).

A subspace is stored as a base matrix plus independent direction matrices.
All subspace algebra happens on row-major vectorizations, with the matrix
shape kept alongside.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import _kernels
from .ffmat import (
    F2,
    FieldP,
    MatF,
    check_budget,
    field as as_field,
    gf2_rank_table,
    image_basis,
    inverse,
    kernel_basis,
    rank,
    rref_vectors,
)


class SubspaceClass(str, enum.Enum):
    COLUMN = "ColumnType"
    ROW = "RowType"
    EXCEPTIONAL = "Exceptional"
    UNCLASSIFIED = "Unclassified"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AffineSubspace:
    rows: int
    cols: int
    field: FieldP
    base: MatF
    directions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "directions", tuple(self.directions))
        for m in (self.base, *self.directions):
            if m.shape != (self.rows, self.cols) or m.field != self.field:
                raise ValueError("base and directions must share shape and field")
        if self.directions:
            _, piv = rref_vectors([d.entries for d in self.directions], self.field.modulus)
            if len(piv) != len(self.directions):
                raise ValueError("directions are linearly dependent")

    @classmethod
    def _unchecked(cls, rows, cols, k, base, directions) -> "AffineSubspace":
        out = cls.__new__(cls)
        for name, val in (("rows", rows), ("cols", cols), ("field", k),
                          ("base", base), ("directions", tuple(directions))):
            object.__setattr__(out, name, val)
        return out

    @classmethod
    def linear(cls, directions: Sequence[MatF]) -> "AffineSubspace":
        d0 = directions[0]
        return cls(d0.rows, d0.cols, d0.field, MatF.zero(d0.rows, d0.cols, d0.field), tuple(directions))

    @classmethod
    def from_vectors(cls, rows: int, cols: int, k: FieldP, base: Sequence[int],
                     directions: Iterable[Sequence[int]]) -> "AffineSubspace":
        return cls(rows, cols, k, MatF(rows, cols, k, tuple(base)),
                   tuple(MatF(rows, cols, k, tuple(v)) for v in directions))

    @property
    def dim(self) -> int:
        return len(self.directions)

    @property
    def ambient_dim(self) -> int:
        return self.rows * self.cols

    @property
    def q(self) -> int:
        return self.field.modulus

    @property
    def is_linear(self) -> bool:
        return canonicalize(self).base.is_zero()

    def transpose(self) -> "AffineSubspace":
        return AffineSubspace(self.cols, self.rows, self.field, self.base.T,
                              tuple(d.T for d in self.directions))

    def __contains__(self, M: MatF) -> bool:
        if M.shape != (self.rows, self.cols) or M.field != self.field:
            return False
        c = canonicalize(self)
        return _reduce(M.entries, c, self.q) == c.base.entries

    def to_json(self) -> dict:
        return {
            "field": self.q,
            "rows": self.rows,
            "cols": self.cols,
            "base": self.base.to_text(),
            "directions": [d.to_text() for d in self.directions],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AffineSubspace":
        k = as_field(obj["field"])
        base = MatF.from_text(obj["base"])
        dirs = tuple(MatF.from_text(t) for t in obj["directions"])
        return cls(int(obj["rows"]), int(obj["cols"]), k, base, dirs)


def _reduce(vec: Sequence[int], canon: AffineSubspace, p: int) -> tuple:
    """Reduce ``vec`` modulo the (echelon) direction space of ``canon``."""
    v = list(vec)
    for d in canon.directions:
        e = d.entries
        pc = next(i for i, x in enumerate(e) if x)
        f = v[pc]
        if f:
            v = [(a - f * b) % p for a, b in zip(v, e)]
    return tuple(v)


def canonicalize(S: AffineSubspace) -> AffineSubspace:
    """Reduced echelon directions and a base with zero pivot coordinates.

    Two subspaces are equal as point sets iff their canonical forms are equal.
    """
    p = S.q
    echelon, _ = rref_vectors([d.entries for d in S.directions], p, S.ambient_dim)
    dirs = tuple(MatF(S.rows, S.cols, S.field, r) for r in echelon)
    out = AffineSubspace._unchecked(S.rows, S.cols, S.field, S.base, dirs)
    base = _reduce(S.base.entries, out, p)
    object.__setattr__(out, "base", MatF(S.rows, S.cols, S.field, base))
    return out


def elements(S: AffineSubspace, budget: int | None = None) -> Iterator[MatF]:
    """Every point of S, base first, each exactly once."""
    q = S.q
    check_budget(q ** S.dim, "subspace elements", budget)
    base = S.base.entries
    dirs = [d.entries for d in S.directions]
    for coeffs in itertools.product(range(q), repeat=S.dim):
        v = list(base)
        for c, d in zip(coeffs, dirs):
            if c:
                v = [(a + c * b) % q for a, b in zip(v, d)]
        yield MatF(S.rows, S.cols, S.field, tuple(v))


def max_rank(S: AffineSubspace, stop_at: int | None = None) -> int:
    """Largest rank among the elements of S.

    With ``stop_at`` the scan stops as soon as an element of rank at least
    ``stop_at`` is seen, returning that rank.
    """
    best = 0
    cap = min(S.rows, S.cols)
    if S.q == 2 and S.ambient_dim <= 20:
        table = gf2_rank_table(S.rows, S.cols)
        span = [0]
        for d in S.directions:
            b = d.bits()
            span += [x ^ b for x in span]
        b0 = S.base.bits()
        for x in span:
            r = table[b0 ^ x]
            if r > best:
                best = r
                if best == cap or (stop_at is not None and best >= stop_at):
                    break
        return best
    for M in elements(S):
        r = rank(M)
        if r > best:
            best = r
            if best == cap or (stop_at is not None and best >= stop_at):
                break
    return best


def act(P: MatF, Q: MatF, S: AffineSubspace) -> AffineSubspace:
    """The image {P M Q^-1 : M in S}, canonicalized."""
    if P.shape != (S.rows, S.rows) or Q.shape != (S.cols, S.cols):
        raise ValueError("P must be rows x rows and Q cols x cols")
    Qi = inverse(Q)
    inverse(P)  # rejects singular P
    moved = AffineSubspace(S.rows, S.cols, S.field, P @ S.base @ Qi,
                           tuple(P @ d @ Qi for d in S.directions))
    return canonicalize(moved)


def common_kernel(S: AffineSubspace) -> list[tuple]:
    """Basis of the intersection of the kernels of all elements of S."""
    stacked = []
    for M in (S.base, *S.directions):
        stacked.extend(M.row_lists())
    big = MatF.from_rows(stacked, S.field)
    return kernel_basis(big)


def common_image(S: AffineSubspace) -> list[tuple]:
    """Echelon basis of the span of the images of all elements of S."""
    cols = []
    for M in (S.base, *S.directions):
        cols.extend(M.column(j) for j in range(M.cols))
    big = MatF.from_rows(cols, S.field).T
    return image_basis(big)


def classify(S: AffineSubspace, r: int, check: bool = True) -> SubspaceClass:
    """Which canonical maximal bounded-rank family S belongs to.

    ColumnType when the elements share a kernel of dimension cols - r (S is
    then the whole annihilator of that kernel, by dimension count); RowType
    when their images fit in an r-dimensional subspace.
    """
    n = S.rows
    if check:
        if S.dim != n * r:
            raise ValueError(f"classify needs dim = n*r = {n * r}, got {S.dim}")
        mr = max_rank(S)
        if mr != r:
            raise ValueError(f"classify needs max rank {r}, got {mr}")
    if len(common_kernel(S)) >= S.cols - r:
        return SubspaceClass.COLUMN
    if len(common_image(S)) <= r:
        return SubspaceClass.ROW
    if (S.rows, S.cols, S.q, r) == (2, 2, 2, 1) and not S.is_linear:
        return SubspaceClass.EXCEPTIONAL
    return SubspaceClass.UNCLASSIFIED


# ---------------------------------------------------------------------------
# canonical spaces


def column_space(n: int, r: int, p=2, cols: int | None = None) -> AffineSubspace:
    """C_r: n x cols matrices whose last cols - r columns vanish."""
    cols = n if cols is None else cols
    k = as_field(p)
    dirs = [MatF.elementary(n, cols, i, j, k) for i in range(n) for j in range(r)]
    return AffineSubspace(n, cols, k, MatF.zero(n, cols, k), tuple(dirs))


def row_space(n: int, r: int, p=2) -> AffineSubspace:
    """Transpose of C_r: matrices whose last n - r rows vanish."""
    return column_space(n, r, p).transpose()


def exceptional_plane() -> AffineSubspace:
    """The affine plane {[x y; 0 x+1]} of singular 2x2 matrices over F_2."""
    base = MatF.from_rows([[0, 0], [0, 1]], F2)
    return AffineSubspace(2, 2, F2, base, (MatF.from_rows([[1, 0], [0, 1]]),
                                            MatF.from_rows([[0, 1], [0, 0]])))


def unipotent_space(n: int, p=2) -> AffineSubspace:
    """I_n plus the strictly upper triangular matrices."""
    k = as_field(p)
    dirs = [MatF.elementary(n, n, i, j, k) for i in range(n) for j in range(i + 1, n)]
    return AffineSubspace(n, n, k, MatF.identity(n, k), tuple(dirs))


# ---------------------------------------------------------------------------
# enumeration


def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(d: int, k: int, q: int, linear_only: bool) -> int:
    g = gaussian_binomial(d, k, q)
    return g if linear_only else g * q ** (d - k)


def pivot_patterns(d: int, k: int) -> list[tuple[int, tuple[int, ...]]]:
    return list(enumerate(itertools.combinations(range(d), k)))


def _echelon_bases(d: int, pivots: Sequence[int], q: int) -> Iterator[list[list[int]]]:
    """Reduced echelon bases with the given pivots, free entries as a counter.

    The free slots are ordered as in the GF(2) kernel (rows outer, columns
    ascending) and slot s is the s-th base-q digit of the counter.
    """
    k = len(pivots)
    pivset = set(pivots)
    nonpiv = [c for c in range(d) if c not in pivset]
    slots = [(t, c) for t in range(k) for c in nonpiv if c > pivots[t]]
    for m in range(q ** len(slots)):
        rows = [[0] * d for _ in range(k)]
        for t, c in enumerate(pivots):
            rows[t][c] = 1
        mm = m
        for t, c in slots:
            rows[t][c] = mm % q
            mm //= q
        yield rows


def _coset_reps(d: int, pivots: Sequence[int], q: int) -> list[list[int]]:
    pivset = set(pivots)
    nonpiv = [c for c in range(d) if c not in pivset]
    reps = []
    for m in range(q ** len(nonpiv)):
        v = [0] * d
        mm = m
        for c in nonpiv:
            v[c] = mm % q
            mm //= q
        reps.append(v)
    return reps


def enumerate_affine_subspaces(d: int, k: int, p=2, linear_only: bool = False,
                               shape: tuple[int, int] | None = None,
                               budget: int | None = None) -> Iterator[AffineSubspace]:
    """Every k-dimensional (affine) subspace of F_q^d, once each, canonical.

    ``shape`` gives the matrix shape of the ambient space (default 1 x d).
    Order: pivot pattern, then free entries, then coset representative.
    """
    kf = as_field(p)
    q = kf.modulus
    rows, cols = shape if shape is not None else (1, d)
    if rows * cols != d:
        raise ValueError("shape does not match ambient dimension")
    check_budget(subspace_count(d, k, q, linear_only), "subspace enumeration", budget)
    for _, piv in pivot_patterns(d, k):
        reps = [[0] * d] if linear_only else _coset_reps(d, piv, q)
        for basis in _echelon_bases(d, piv, q):
            dirs = tuple(MatF(rows, cols, kf, tuple(r)) for r in basis)
            for rep in reps:
                yield AffineSubspace._unchecked(rows, cols, kf, MatF(rows, cols, kf, tuple(rep)), dirs)


# ---------------------------------------------------------------------------
# bounded-rank sweeps


def _gf2_vec(bits: int, d: int) -> tuple:
    return tuple((bits >> t) & 1 for t in range(d))


def _sweep_chunk(args):
    d, k, patterns, table, threshold, affine, backend = args
    impl = _kernels._pykernels if backend == "python" else _kernels
    return impl.sweep_gf2(d, k, patterns, table, threshold, affine)


def _sweep_generic(rows, cols, kf, k, patterns, threshold, affine):
    q = kf.modulus
    d = rows * cols
    population = 0
    survivors = []
    for pidx, piv in patterns:
        reps = _coset_reps(d, piv, q) if affine else [[0] * d]
        for m, basis in enumerate(_echelon_bases(d, piv, q)):
            span = [tuple([0] * d)]
            for r in basis:
                span = [tuple((a + c * b) % q for a, b in zip(x, r)) for c in range(q) for x in span]
            for ri, rep in enumerate(reps):
                for x in span:
                    v = tuple((a + b) % q for a, b in zip(rep, x))
                    if rank(MatF(rows, cols, kf, v)) >= threshold:
                        break
                else:
                    survivors.append(((pidx, m, ri), tuple(rep), tuple(tuple(r) for r in basis)))
            population += len(reps)
    return population, survivors


def sweep_bounded_rank(rows: int, cols: int, p, k: int, threshold: int, affine: bool = True,
                       workers: int = 1, backend: str | None = None,
                       budget: int | None = None) -> tuple[int, list[AffineSubspace]]:
    """Scan all k-dimensional subspaces of Mat_{rows,cols}(F_q).

    Returns the population scanned and the subspaces all of whose elements
    have rank below ``threshold``, in enumeration order. Over GF(2) the scan
    runs on the packed kernels (compiled when available); ``workers > 1``
    splits the pivot patterns round-robin over a process pool.
    """
    kf = as_field(p)
    q = kf.modulus
    d = rows * cols
    if k > d:
        return 0, []
    check_budget(subspace_count(d, k, q, not affine), "bounded-rank sweep", budget)
    patterns = pivot_patterns(d, k)
    if q == 2 and d <= 20:
        table = _kernels.rank_table(rows, cols)
        be = backend or _kernels.BACKEND
        chunks = [patterns[i::workers] for i in range(workers)] if workers > 1 else [patterns]
        jobs = [(d, k, c, table, threshold, affine, be) for c in chunks if c]
        if len(jobs) > 1:
            from concurrent.futures import ProcessPoolExecutor
            with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
                parts = list(pool.map(_sweep_chunk, jobs))
        else:
            parts = [_sweep_chunk(j) for j in jobs]
        population = sum(pt[0] for pt in parts)
        raw = sorted((s for pt in parts for s in pt[1]), key=lambda s: s[0])
        found = [AffineSubspace.from_vectors(rows, cols, F2, _gf2_vec(b, d),
                                             [_gf2_vec(x, d) for x in dirs])
                 for _, b, dirs in raw]
        return population, found
    population, raw = _sweep_generic(rows, cols, kf, k, patterns, threshold, affine)
    found = [AffineSubspace.from_vectors(rows, cols, kf, b, dirs) for _, b, dirs in raw]
    return population, found

"""Exact dense matrices over small prime fields.

Matrices are immutable values. Over GF(2) the row-reduction routines work on
bit-packed rows (one Python int per row, bit ``j`` holding column ``j``); over
F_3 and F_5 they work on plain residue lists.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

SUPPORTED_MODULI = (2, 3, 5)
DEFAULT_BUDGET = 10_000_000


class SingularMatrixError(ArithmeticError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured element-count cap."""


def enumeration_budget() -> int:
    raw = os.environ.get("FFVERIFY_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def check_budget(count: int, what: str, budget: int | None = None) -> None:
    cap = enumeration_budget() if budget is None else budget
    if count > cap:
        shown = str(count) if count < 10 ** 15 else f"~10^{len(str(count)) - 1}"
        raise BudgetExceeded(
            f"{what}: {shown} objects exceeds the enumeration budget of {cap} "
            "(set FFVERIFY_BUDGET to raise it)"
        )


@dataclass(frozen=True)
class FieldP:
    modulus: int

    def __post_init__(self):
        if self.modulus not in SUPPORTED_MODULI:
            raise ValueError(f"unsupported field modulus {self.modulus}")

    def inv(self, a: int) -> int:
        a %= self.modulus
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.modulus)

    def __len__(self) -> int:
        return self.modulus

    def __str__(self) -> str:
        return f"F{self.modulus}"


F2 = FieldP(2)
F3 = FieldP(3)
F5 = FieldP(5)


def field(p: int | FieldP) -> FieldP:
    return p if isinstance(p, FieldP) else FieldP(int(p))


@dataclass(frozen=True)
class MatF:
    rows: int
    cols: int
    field: FieldP
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        p = self.field.modulus
        if any(not 0 <= e < p for e in self.entries):
            raise ValueError(f"entries must be residues mod {p}")

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int | FieldP = 2) -> "MatF":
        k = field(p)
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(nrows, ncols, k, tuple(int(x) % k.modulus for r in rows for x in r))

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries, p: int | FieldP = 2) -> "MatF":
        k = field(p)
        return cls(rows, cols, k, tuple(int(x) % k.modulus for x in entries))

    @classmethod
    def zero(cls, rows: int, cols: int | None = None, p: int | FieldP = 2) -> "MatF":
        cols = rows if cols is None else cols
        return cls(rows, cols, field(p), (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int, p: int | FieldP = 2) -> "MatF":
        return cls(n, n, field(p), tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def elementary(cls, rows: int, cols: int, i: int, j: int, p: int | FieldP = 2) -> "MatF":
        """E_{i,j} with 0-based indices."""
        e = [0] * (rows * cols)
        e[i * cols + j] = 1
        return cls(rows, cols, field(p), tuple(e))

    @classmethod
    def from_bits(cls, rows: int, cols: int, bits: int) -> "MatF":
        """GF(2) matrix whose entry (i, j) is bit ``i*cols + j`` of ``bits``."""
        return cls(rows, cols, F2, tuple((bits >> t) & 1 for t in range(rows * cols)))

    # accessors

    @property
    def p(self) -> int:
        return self.field.modulus

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def bits(self) -> int:
        """Row-major bit encoding (GF(2) only)."""
        if self.p != 2:
            raise ValueError("bit encoding only exists over GF(2)")
        out = 0
        for t, e in enumerate(self.entries):
            if e:
                out |= 1 << t
        return out

    def packed_rows(self) -> list[int]:
        if self.p != 2:
            raise ValueError("packed rows only exist over GF(2)")
        c = self.cols
        return [sum(1 << j for j in range(c) if self.entries[i * c + j]) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic

    def _check_same(self, other: "MatF") -> None:
        if self.shape != other.shape or self.field != other.field:
            raise ValueError("shape or field mismatch")

    def __add__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        p = self.p
        return MatF(self.rows, self.cols, self.field,
                    tuple((a + b) % p for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatF") -> "MatF":
        self._check_same(other)
        p = self.p
        return MatF(self.rows, self.cols, self.field,
                    tuple((a - b) % p for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "MatF":
        p = self.p
        return MatF(self.rows, self.cols, self.field, tuple((-a) % p for a in self.entries))

    def scale(self, c: int) -> "MatF":
        p = self.p
        return MatF(self.rows, self.cols, self.field, tuple((c * a) % p for a in self.entries))

    def __matmul__(self, other: "MatF") -> "MatF":
        if self.cols != other.rows or self.field != other.field:
            raise ValueError("incompatible shapes for product")
        p = self.p
        n, m, k = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = []
        for i in range(n):
            arow = a[i * m:(i + 1) * m]
            for j in range(k):
                s = 0
                for t in range(m):
                    if arow[t]:
                        s += arow[t] * b[t * k + j]
                out.append(s % p)
        return MatF(n, k, self.field, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        p, c = self.p, self.cols
        e = self.entries
        return tuple(sum(e[i * c + j] * vec[j] for j in range(c)) % p for i in range(self.rows))

    @property
    def T(self) -> "MatF":
        return self.transpose()

    def transpose(self) -> "MatF":
        r, c = self.rows, self.cols
        e = self.entries
        return MatF(c, r, self.field, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MatF":
        c = self.cols
        return MatF(r1 - r0, c1 - c0, self.field,
                    tuple(self.entries[i * c + j] for i in range(r0, r1) for j in range(c0, c1)))

    def trace(self) -> int:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum(self.entries[i * self.cols + i] for i in range(self.rows)) % self.p

    # linear algebra

    def rank(self) -> int:
        return rank(self)

    def det(self) -> int:
        return det(self)

    def inverse(self) -> "MatF":
        return inverse(self)

    # text formats

    def to_text(self) -> str:
        return f"{self.p}:{self.rows}:{self.cols}:" + ",".join(map(str, self.entries))

    @classmethod
    def from_text(cls, text: str) -> "MatF":
        try:
            p, r, c, body = text.strip().split(":", 3)
            rows, cols = int(r), int(c)
            entries = [int(x) for x in body.split(",")] if body else []
        except ValueError as exc:
            raise ValueError(f"malformed matrix text {text!r}") from exc
        if len(entries) != rows * cols:
            raise ValueError(f"malformed matrix text {text!r}")
        return cls(rows, cols, field(int(p)), tuple(entries))

    def to_hex_rows(self) -> list[str]:
        """Compact GF(2) encoding: one hex word per row, bit j = column j."""
        return [format(r, "x") for r in self.packed_rows()]

    @classmethod
    def from_hex_rows(cls, hex_rows: Sequence[str], cols: int) -> "MatF":
        rows = [int(h, 16) for h in hex_rows]
        return cls(len(rows), cols, F2,
                   tuple((r >> j) & 1 for r in rows for j in range(cols)))

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.row_lists()) + "]"


# ---------------------------------------------------------------------------
# GF(2) bit-packed kernels


def gf2_rank_rows(rows: Sequence[int], ncols: int) -> int:
    """Rank of a GF(2) matrix given as packed row words."""
    work = list(rows)
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        for i in range(rank, len(work)):
            if work[i] & bit:
                break
        else:
            continue
        work[rank], work[i] = work[i], work[rank]
        pivot = work[rank]
        for t in range(rank + 1, len(work)):
            if work[t] & bit:
                work[t] ^= pivot
        rank += 1
        if rank == len(work):
            break
    return rank


def gf2_rank_bits(bits: int, rows: int, cols: int) -> int:
    mask = (1 << cols) - 1
    return gf2_rank_rows([(bits >> (i * cols)) & mask for i in range(rows)], cols)


@lru_cache(maxsize=None)
def gf2_rank_table(rows: int, cols: int) -> bytes:
    """Rank of every rows x cols GF(2) matrix, indexed by its bit encoding."""
    if rows * cols > 20:
        raise ValueError("rank table limited to 20 entries per matrix")
    return bytes(gf2_rank_bits(b, rows, cols) for b in range(1 << (rows * cols)))


def _gf2_rref_rows(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced echelon rows and pivot columns (low column index first)."""
    work = list(rows)
    pivots = []
    rank = 0
    for col in range(ncols):
        bit = 1 << col
        for i in range(rank, len(work)):
            if work[i] & bit:
                break
        else:
            continue
        work[rank], work[i] = work[i], work[rank]
        pivot = work[rank]
        for t in range(len(work)):
            if t != rank and work[t] & bit:
                work[t] ^= pivot
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


# ---------------------------------------------------------------------------
# generic elimination over F_p


def rref_vectors(vectors: Sequence[Sequence[int]], p: int,
                 width: int | None = None) -> tuple[list[tuple], list[int]]:
    """Reduced row-echelon form of a list of vectors over F_p.

    Returns the nonzero echelon rows (each with leading entry 1) and their
    pivot positions. Pivots are taken at the first column, scanning left to
    right, that has a nonzero entry at or below the current pivot row.
    """
    if width is None:
        width = len(vectors[0]) if vectors else 0
    work = [list(v) for v in vectors]
    pivots: list[int] = []
    rank = 0
    for col in range(width):
        for i in range(rank, len(work)):
            if work[i][col] % p:
                break
        else:
            continue
        work[rank], work[i] = work[i], work[rank]
        prow = work[rank]
        inv = pow(prow[col], -1, p)
        if inv != 1:
            prow[:] = [(x * inv) % p for x in prow]
        for t in range(len(work)):
            if t != rank:
                f = work[t][col] % p
                if f:
                    row = work[t]
                    work[t] = [(a - f * b) % p for a, b in zip(row, prow)]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return [tuple(x % p for x in r) for r in work[:rank]], pivots


def _rank_generic(M: MatF) -> int:
    return len(rref_vectors(M.row_lists(), M.p, M.cols)[1])


def _rank_gf2(M: MatF) -> int:
    if M.rows * M.cols <= 9:
        return gf2_rank_table(M.rows, M.cols)[M.bits()]
    return gf2_rank_rows(M.packed_rows(), M.cols)


def rank(M: MatF) -> int:
    if M.p == 2:
        return _rank_gf2(M)
    return _rank_generic(M)


def _det_generic(M: MatF) -> int:
    p = M.p
    n = M.rows
    work = M.row_lists()
    d = 1
    for col in range(n):
        for i in range(col, n):
            if work[i][col]:
                break
        else:
            return 0
        if i != col:
            work[col], work[i] = work[i], work[col]
            d = -d
        prow = work[col]
        pv = prow[col]
        d = (d * pv) % p
        inv = pow(pv, -1, p)
        for t in range(col + 1, n):
            f = work[t][col]
            if f:
                f = (f * inv) % p
                work[t] = [(a - f * b) % p for a, b in zip(work[t], prow)]
    return d % p


def det(M: MatF) -> int:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    if M.p == 2:
        return int(_rank_gf2(M) == M.rows)
    return _det_generic(M)


def inverse(M: MatF) -> MatF:
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    n, p = M.rows, M.p
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(M.row_lists())]
    echelon, pivots = rref_vectors(aug, p, 2 * n)
    if pivots[:n] != list(range(n)) or len(echelon) < n:
        raise SingularMatrixError(f"matrix is singular over {M.field}")
    return MatF(n, n, M.field, tuple(x for r in echelon for x in r[n:]))


def kernel_basis(M: MatF) -> list[tuple]:
    """Basis of the right null space {x : Mx = 0}, one free column per vector."""
    p, c = M.p, M.cols
    if M.p == 2:
        rows, pivots = _gf2_rref_rows(M.packed_rows(), c)
        echelon = [tuple((r >> j) & 1 for j in range(c)) for r in rows]
    else:
        echelon, pivots = rref_vectors(M.row_lists(), p, c)
    pivset = set(pivots)
    basis = []
    for free in range(c):
        if free in pivset:
            continue
        v = [0] * c
        v[free] = 1
        for row, pc in zip(echelon, pivots):
            v[pc] = (-row[free]) % p
        basis.append(tuple(v))
    return basis


def image_basis(M: MatF) -> list[tuple]:
    """Echelon basis of the column space."""
    return rref_vectors([M.column(j) for j in range(M.cols)], M.p, M.rows)[0]


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p ** n - p ** k
    return out


def enumerate_gl(n: int, p: int | FieldP = 2, budget: int | None = None) -> Iterator[MatF]:
    """Every invertible n x n matrix over F_p, each exactly once.

    Rows are chosen one at a time outside the span of the rows already
    chosen, so nothing is filtered. Order is lexicographic on the row tuple.
    """
    k = field(p)
    q = k.modulus
    check_budget(q ** (n * n), f"GL_{n}(F_{q}) enumeration", budget)
    vectors = list(itertools.product(range(q), repeat=n))

    def extend(chosen: list[tuple]) -> Iterator[list[tuple]]:
        if len(chosen) == n:
            yield chosen
            return
        r = len(chosen)
        for v in vectors:
            if len(rref_vectors(chosen + [v], q, n)[1]) == r + 1:
                yield from extend(chosen + [v])

    if q == 2:
        for rows in gf2_gl_rows(n):
            yield MatF(n, n, k, tuple((rw >> j) & 1 for rw in rows for j in range(n)))
        return
    for rows in extend([]):
        yield MatF(n, n, k, tuple(x for r in rows for x in r))


def gf2_gl_rows(n: int) -> Iterator[tuple[int, ...]]:
    """Packed-row tuples of GL_n(F_2), same order as :func:`enumerate_gl`.

    Row words store column j at bit j, so lexicographic order on entry tuples
    is order on the bit-reversed words; the iteration below matches it.
    """
    words = sorted(range(1 << n), key=lambda w: tuple((w >> j) & 1 for j in range(n)))

    def extend(chosen: tuple, span: frozenset):
        if len(chosen) == n:
            yield chosen
            return
        for w in words:
            if w not in span:
                yield from extend(chosen + (w,), span | {s ^ w for s in span})

    yield from extend((), frozenset({0}))

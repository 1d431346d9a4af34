"""Pure-Python implementations of the GF(2) hot kernels.

These define the reference behaviour; ``_ckernels.pyx`` must match them
result for result, including the order of survivors.
"""

from __future__ import annotations


def rank_table(rows: int, cols: int) -> bytes:
    n = rows * cols
    mask = (1 << cols) - 1
    out = bytearray(1 << n)
    for bits in range(1 << n):
        work = [(bits >> (i * cols)) & mask for i in range(rows)]
        r = 0
        for col in range(cols):
            bit = 1 << col
            for i in range(r, rows):
                if work[i] & bit:
                    break
            else:
                continue
            work[r], work[i] = work[i], work[r]
            for t in range(r + 1, rows):
                if work[t] & bit:
                    work[t] ^= work[r]
            r += 1
        out[bits] = r
    return bytes(out)


def sweep_gf2(d, k, patterns, table, threshold, affine):
    """Scan k-dimensional (affine) subspaces of F_2^d for low-rank ones.

    ``patterns`` is a sequence of ``(pattern_index, pivots)`` pairs. For each
    pivot pattern the reduced echelon bases are visited by a counter over the
    free slots (slot s = the s-th (row, column) pair, rows outer, columns
    ascending); for each basis the coset representatives (vectors vanishing
    on the pivot coordinates) are visited by a counter over the non-pivot
    coordinates. A subspace survives when every element x has
    ``table[x] < threshold``.

    Returns ``(population, survivors)`` with survivors as
    ``((pattern_index, free_counter, coset_counter), base, rows)``.
    """
    population = 0
    survivors = []
    for pidx, piv in patterns:
        pivset = set(piv)
        nonpiv = [c for c in range(d) if c not in pivset]
        slots = [(t, 1 << c) for t in range(k) for c in nonpiv if c > piv[t]]
        if affine:
            reps = []
            for m in range(1 << len(nonpiv)):
                v = 0
                for i, c in enumerate(nonpiv):
                    if (m >> i) & 1:
                        v |= 1 << c
                reps.append(v)
        else:
            reps = [0]
        lead = [1 << c for c in piv]
        for m in range(1 << len(slots)):
            rows = list(lead)
            s = 0
            mm = m
            while mm:
                if mm & 1:
                    t, b = slots[s]
                    rows[t] |= b
                mm >>= 1
                s += 1
            span = [0]
            for r in rows:
                span += [x ^ r for x in span]
            for ri, rep in enumerate(reps):
                for x in span:
                    if table[rep ^ x] >= threshold:
                        break
                else:
                    survivors.append(((pidx, m, ri), rep, tuple(rows)))
            population += len(reps)
    return population, survivors

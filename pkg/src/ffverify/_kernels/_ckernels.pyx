# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(2) hot kernels; behaviour mirrors _pykernels exactly."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint32_t, uint64_t


cdef int _rank_bits(uint32_t bits, int rows, int cols) nogil:
    cdef uint32_t work[32]
    cdef uint32_t mask = (1u << cols) - 1
    cdef int i, t, col, r = 0
    cdef uint32_t bit, tmp
    for i in range(rows):
        work[i] = (bits >> (i * cols)) & mask
    for col in range(cols):
        bit = 1u << col
        i = r
        while i < rows and not (work[i] & bit):
            i += 1
        if i == rows:
            continue
        tmp = work[r]
        work[r] = work[i]
        work[i] = tmp
        for t in range(r + 1, rows):
            if work[t] & bit:
                work[t] ^= work[r]
        r += 1
    return r


def rank_table(int rows, int cols):
    cdef int n = rows * cols
    if n > 24 or rows > 32:
        raise ValueError("rank table too large")
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    out = bytearray(size)
    cdef unsigned char[::1] view = out
    cdef Py_ssize_t b
    with nogil:
        for b in range(size):
            view[b] = <unsigned char>_rank_bits(<uint32_t>b, rows, cols)
    return bytes(out)


def sweep_gf2(int d, int k, patterns, const unsigned char[::1] table, int threshold, bint affine):
    if d > 24 or k > 24:
        raise ValueError("dimension too large for the compiled sweep")
    cdef uint64_t population = 0
    cdef uint32_t slot_bit[600]
    cdef int slot_row[600]
    cdef uint32_t lead[24]
    cdef uint32_t rows[24]
    cdef int nonpiv[24]
    cdef int piv[24]
    cdef uint32_t *span = <uint32_t *>malloc(sizeof(uint32_t) * (1 << k))
    cdef uint32_t *reps = <uint32_t *>malloc(sizeof(uint32_t) * (1 << (d - k)))
    cdef int nslots, nnon, nreps, t, c, i, s, ri, alive, size
    cdef uint64_t m, mm, mlimit
    cdef uint32_t rep, v
    cdef int j
    survivors = []
    if span == NULL or reps == NULL:
        free(span)
        free(reps)
        raise MemoryError()
    try:
        for pidx, pattern in patterns:
            for t in range(k):
                piv[t] = pattern[t]
            nnon = 0
            for c in range(d):
                alive = 1
                for t in range(k):
                    if piv[t] == c:
                        alive = 0
                        break
                if alive:
                    nonpiv[nnon] = c
                    nnon += 1
            nslots = 0
            for t in range(k):
                for i in range(nnon):
                    if nonpiv[i] > piv[t]:
                        slot_row[nslots] = t
                        slot_bit[nslots] = 1u << nonpiv[i]
                        nslots += 1
            if nslots > 62:
                raise ValueError("too many free slots")
            if affine:
                nreps = 1 << nnon
                for m in range(<uint64_t>nreps):
                    v = 0
                    for i in range(nnon):
                        if (m >> i) & 1:
                            v |= 1u << nonpiv[i]
                    reps[m] = v
            else:
                nreps = 1
                reps[0] = 0
            for t in range(k):
                lead[t] = 1u << piv[t]
            mlimit = (<uint64_t>1) << nslots
            m = 0
            while m < mlimit:
                with nogil:
                    for t in range(k):
                        rows[t] = lead[t]
                    mm = m
                    s = 0
                    while mm:
                        if mm & 1:
                            rows[slot_row[s]] |= slot_bit[s]
                        mm >>= 1
                        s += 1
                    span[0] = 0
                    size = 1
                    for t in range(k):
                        for j in range(size):
                            span[size + j] = span[j] ^ rows[t]
                        size *= 2
                    population += nreps
                for ri in range(nreps):
                    rep = reps[ri]
                    alive = 1
                    for j in range(size):
                        if table[rep ^ span[j]] >= threshold:
                            alive = 0
                            break
                    if alive:
                        survivors.append(((pidx, m, ri), rep, tuple([rows[t] for t in range(k)])))
                m += 1
    finally:
        free(span)
        free(reps)
    return int(population), survivors

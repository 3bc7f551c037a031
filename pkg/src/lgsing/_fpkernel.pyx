# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled row reduction over F_p (p < 2^31); pure-Python twin in _fpkernel_py."""
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef inline int64_t _inv(int64_t a, int64_t p):
    cdef int64_t t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(rows, long long p, Py_ssize_t ncols):
    """Reduced row echelon form of ``rows`` mod p; returns ``(nonzero_rows, pivots)``."""
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t i, j, c, r = 0, piv
    cdef int64_t v, inv, fac
    cdef int64_t *a
    cdef int64_t *ri
    cdef int64_t *rr
    pivots = []
    if n == 0 or ncols == 0:
        return [], pivots
    a = <int64_t *> malloc(n * ncols * sizeof(int64_t))
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            row = rows[i]
            for j in range(ncols):
                a[i * ncols + j] = (<int64_t> row[j]) % p
        for c in range(ncols):
            if r == n:
                break
            piv = -1
            for i in range(r, n):
                if a[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    v = a[piv * ncols + j]
                    a[piv * ncols + j] = a[r * ncols + j]
                    a[r * ncols + j] = v
            rr = a + r * ncols
            inv = _inv(rr[c], p)
            for j in range(c, ncols):
                rr[j] = rr[j] * inv % p
            for i in range(n):
                if i == r:
                    continue
                ri = a + i * ncols
                fac = ri[c]
                if fac == 0:
                    continue
                for j in range(c, ncols):
                    if rr[j] != 0:
                        ri[j] = (ri[j] - fac * rr[j]) % p
                        if ri[j] < 0:
                            ri[j] += p
            pivots.append(c)
            r += 1
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(a)
    return out, pivots

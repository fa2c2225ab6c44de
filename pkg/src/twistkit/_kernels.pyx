# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular kernels; same contract as ``_kernels_py``.

Moduli must be below 2**63 so residues fit an unsigned 64-bit word; products
go through a 128-bit intermediate.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    typedef unsigned long long tk_u64;
    static inline tk_u64 tk_mulmod(tk_u64 a, tk_u64 b, tk_u64 p) {
        return (tk_u64)(((unsigned __int128)a * b) % p);
    }
    """
    ctypedef unsigned long long tk_u64
    tk_u64 tk_mulmod(tk_u64 a, tk_u64 b, tk_u64 p) nogil


cdef tk_u64 _powmod(tk_u64 a, tk_u64 e, tk_u64 p) nogil:
    cdef tk_u64 r = 1 % p
    a %= p
    while e:
        if e & 1:
            r = tk_mulmod(r, a, p)
        a = tk_mulmod(a, a, p)
        e >>= 1
    return r


cdef tk_u64* _load(list rows, Py_ssize_t n, Py_ssize_t m, tk_u64 p) except NULL:
    cdef tk_u64* buf = <tk_u64*> malloc(max(n * m, 1) * sizeof(tk_u64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t r, c
    for r in range(n):
        row = rows[r]
        if len(row) != m:
            free(buf)
            raise ValueError("ragged matrix")
        for c in range(m):
            buf[r * m + c] = <tk_u64> (row[c] % p)
    return buf


cdef Py_ssize_t _eliminate(tk_u64* a, Py_ssize_t n, Py_ssize_t m, tk_u64 p,
                           bint square, tk_u64* det) nogil:
    cdef Py_ssize_t rank = 0, col, r, c, piv
    cdef tk_u64 inv, f, t
    det[0] = 1
    for col in range(m):
        piv = -1
        for r in range(rank, n):
            if a[r * m + col]:
                piv = r
                break
        if piv < 0:
            if square:
                det[0] = 0
                return rank
            continue
        if piv != rank:
            for c in range(m):
                t = a[piv * m + c]
                a[piv * m + c] = a[rank * m + c]
                a[rank * m + c] = t
            det[0] = (p - det[0]) % p
        det[0] = tk_mulmod(det[0], a[rank * m + col], p)
        inv = _powmod(a[rank * m + col], p - 2, p)
        for r in range(rank + 1, n):
            f = a[r * m + col]
            if f:
                f = tk_mulmod(f, inv, p)
                for c in range(col, m):
                    t = tk_mulmod(f, a[rank * m + c], p)
                    a[r * m + c] = (a[r * m + c] + p - t) % p
        rank += 1
        if rank == n:
            break
    return rank


def rank_mod_p(list rows, p):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 0
    cdef Py_ssize_t m = len(rows[0])
    cdef tk_u64 pp = p
    cdef tk_u64 det
    cdef tk_u64* a = _load(rows, n, m, pp)
    cdef Py_ssize_t rank
    try:
        with nogil:
            rank = _eliminate(a, n, m, pp, False, &det)
    finally:
        free(a)
    return rank


def det_mod_p(list rows, p):
    cdef Py_ssize_t n = len(rows)
    if n == 0:
        return 1 % p
    cdef tk_u64 pp = p
    cdef tk_u64 det
    cdef tk_u64* a = _load(rows, n, n, pp)
    try:
        with nogil:
            _eliminate(a, n, n, pp, True, &det)
    finally:
        free(a)
    return det


def eval_terms_mod_p(list exps, list coeffs, list point, p):
    cdef tk_u64 pp = p
    cdef Py_ssize_t nv = len(point), k, x
    cdef tk_u64* pt = <tk_u64*> malloc(max(nv, 1) * sizeof(tk_u64))
    if pt == NULL:
        raise MemoryError()
    cdef tk_u64 total = 0, t
    cdef long e
    try:
        for x in range(nv):
            pt[x] = <tk_u64> (point[x] % p)
        for k in range(len(exps)):
            ek = exps[k]
            t = <tk_u64> (coeffs[k] % p)
            for x in range(nv):
                e = ek[x]
                if e:
                    t = tk_mulmod(t, _powmod(pt[x], e, pp), pp)
            total = (total + t) % pp
    finally:
        free(pt)
    return total

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(3) elimination kernels (hot path).

Same contract as the ``_gf3numpy`` fallback; see that module for the
semantics of each function.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def rref(a):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] r = \
        np.array(a, dtype=np.uint8, order="C", copy=True)
    cdef Py_ssize_t m = r.shape[0], n = r.shape[1]
    cdef Py_ssize_t row = 0, col, i, j, p
    cdef int piv, f
    pivots = []
    for col in range(n):
        if row >= m:
            break
        p = -1
        for i in range(row, m):
            if r[i, col] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != row:
            for j in range(n):
                f = r[row, j]
                r[row, j] = r[p, j]
                r[p, j] = <cnp.uint8_t> f
        if r[row, col] == 2:
            for j in range(n):
                r[row, j] = (r[row, j] * 2) % 3
        for i in range(m):
            if i == row:
                continue
            f = r[i, col]
            if f != 0:
                f = 3 - f
                for j in range(n):
                    r[i, j] = (r[i, j] + f * r[row, j]) % 3
        pivots.append(col)
        row += 1
    return np.asarray(r), row, pivots


def col_profile(a):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] work = \
        np.ascontiguousarray(np.array(a, dtype=np.uint8, copy=True))
    cdef Py_ssize_t m = work.shape[0], n = work.shape[1]
    # pivot columns stored densely; lead[r] = index into pivot storage, or -1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lead = np.full(m, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] pivcols = \
        np.zeros((min(m, n), m), dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] v = np.zeros(m, dtype=np.uint8)
    cdef Py_ssize_t npiv = 0, i, j, r
    cdef int f
    pivots = []
    for j in range(n):
        for i in range(m):
            v[i] = work[i, j]
        while True:
            r = -1
            for i in range(m):
                if v[i] != 0:
                    r = i
                    break
            if r < 0:
                break
            if lead[r] < 0:
                if v[r] == 2:
                    for i in range(r, m):
                        v[i] = (v[i] * 2) % 3
                for i in range(m):
                    pivcols[npiv, i] = v[i]
                lead[r] = npiv
                npiv += 1
                pivots.append((r, j))
                break
            f = 3 - v[r]
            for i in range(r, m):
                v[i] = (v[i] + f * pivcols[lead[r], i]) % 3
    return pivots


def matmul(a, b):
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)
            % 3).astype(np.uint8)


def matvec(a, v):
    return (np.asarray(a, dtype=np.int64) @ np.asarray(v, dtype=np.int64)
            % 3).astype(np.uint8)

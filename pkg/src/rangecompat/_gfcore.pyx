# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled GF(q) matrix kernels.

Mirror of ``_gfcore_py``: same four functions, same table-driven uint8
representation, and bit-identical outputs.  Only the inner loops differ.
"""

import numpy as np


def rref(mat, const unsigned char[:, :] add, const unsigned char[:, :] sub,
         const unsigned char[:, :] mul, const unsigned char[:] inv):
    M_arr = np.array(mat, dtype=np.uint8, order="C", copy=True)
    cdef unsigned char[:, ::1] M = M_arr
    cdef Py_ssize_t rows = M.shape[0], cols = M.shape[1]
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef unsigned char f, tmp
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        p = -1
        for i in range(r, rows):
            if M[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(cols):
                tmp = M[r, j]
                M[r, j] = M[p, j]
                M[p, j] = tmp
        f = M[r, c]
        if f != 1:
            f = inv[f]
            for j in range(cols):
                M[r, j] = mul[f, M[r, j]]
        for i in range(rows):
            if i == r:
                continue
            f = M[i, c]
            if f != 0:
                for j in range(cols):
                    M[i, j] = sub[M[i, j], mul[f, M[r, j]]]
        pivots.append(c)
        r += 1
    return M_arr[:r].copy(), np.array(pivots, dtype=np.int64)


def reduce_rows(V_arr, R_arr, const long long[:] pivots,
                const unsigned char[:, :] sub, const unsigned char[:, :] mul):
    cdef unsigned char[:, ::1] V = V_arr
    cdef const unsigned char[:, ::1] R = np.ascontiguousarray(R_arr, dtype=np.uint8)
    cdef Py_ssize_t nred = pivots.shape[0]
    cdef Py_ssize_t rows = V.shape[0], cols = V.shape[1]
    cdef Py_ssize_t i, k, j, c
    cdef unsigned char f
    for k in range(rows):
        for i in range(nred):
            c = <Py_ssize_t> pivots[i]
            f = V[k, c]
            if f != 0:
                for j in range(cols):
                    V[k, j] = sub[V[k, j], mul[f, R[i, j]]]


def mat_mul(A_arr, B_arr, const unsigned char[:, :] add, const unsigned char[:, :] mul):
    cdef const unsigned char[:, ::1] A = np.ascontiguousarray(A_arr, dtype=np.uint8)
    cdef const unsigned char[:, ::1] B = np.ascontiguousarray(B_arr, dtype=np.uint8)
    cdef Py_ssize_t rows = A.shape[0], inner = A.shape[1], cols = B.shape[1]
    C_arr = np.zeros((rows, cols), dtype=np.uint8)
    cdef unsigned char[:, ::1] C = C_arr
    cdef Py_ssize_t i, k, j
    cdef unsigned char a
    for i in range(rows):
        for k in range(inner):
            a = A[i, k]
            if a != 0:
                for j in range(cols):
                    C[i, j] = add[C[i, j], mul[a, B[k, j]]]
    return C_arr


def column_annihilator(M_arr, const unsigned char[:, :] add, const unsigned char[:, :] sub,
                       const unsigned char[:, :] mul, const unsigned char[:] inv,
                       const unsigned char[:] neg):
    cdef Py_ssize_t n = M_arr.shape[0]
    R_arr, piv = rref(np.ascontiguousarray(M_arr.T), add, sub, mul, inv)
    cdef const unsigned char[:, ::1] R = R_arr
    cdef const long long[:] pv = piv
    cdef Py_ssize_t rank = pv.shape[0]
    cdef Py_ssize_t i, c, l
    A_arr = np.zeros((n - rank, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] A = A_arr
    pivset = set(piv.tolist())
    l = 0
    for c in range(n):
        if c in pivset:
            continue
        A[l, c] = 1
        for i in range(rank):
            A[l, pv[i]] = neg[R[i, c]]
        l += 1
    return A_arr

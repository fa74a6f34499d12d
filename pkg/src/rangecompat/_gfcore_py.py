"""Pure numpy implementation of the GF(q) matrix kernels.

All matrices are C-contiguous uint8 arrays of canonical element codes
0..q-1; arithmetic goes through dense lookup tables (add/sub/mul are
q-by-q, inv/neg are length q).  The compiled backend in ``_gfcore.pyx``
implements the same four functions with identical outputs, bit for bit,
so results never depend on which backend is active.
"""

import numpy as np


def rref(mat, add, sub, mul, inv):
    """Reduced row echelon form over GF(q).

    Returns ``(R, pivots)`` where R holds only the nonzero rows (shape
    rank x cols) and pivots is an int64 array of pivot column indices.
    """
    M = np.array(mat, dtype=np.uint8, order="C", copy=True)
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        f = int(M[r, c])
        if f != 1:
            M[r] = mul[inv[f], M[r]]
        colvals = M[:, c].copy()
        colvals[r] = 0
        tgt = np.nonzero(colvals)[0]
        if tgt.size:
            M[tgt] = sub[M[tgt], mul[colvals[tgt][:, None], M[r][None, :]]]
        pivots.append(c)
        r += 1
    return M[:r].copy(), np.array(pivots, dtype=np.int64)


def reduce_rows(V, R, pivots, sub, mul):
    """In place, reduce every row of V against the echelon basis R."""
    for i in range(len(pivots)):
        c = int(pivots[i])
        f = V[:, c].copy()
        nz = np.nonzero(f)[0]
        if nz.size:
            V[nz] = sub[V[nz], mul[f[nz][:, None], R[i][None, :]]]


def mat_mul(A, B, add, mul):
    """Matrix product over GF(q)."""
    rows, inner = A.shape
    cols = B.shape[1]
    C = np.zeros((rows, cols), dtype=np.uint8)
    for k in range(inner):
        a = A[:, k]
        if not a.any():
            continue
        C = add[C, mul[a[:, None], B[k][None, :]]]
    return np.ascontiguousarray(C)


def column_annihilator(M, add, sub, mul, inv, neg):
    """Rows a with a @ M == 0, i.e. the annihilator of the column space.

    Output is the standard free-column nullspace basis of M^T (one row
    per non-pivot column, identity entry on that column), not
    re-echelonized; the construction is deterministic.
    """
    n = M.shape[0]
    R, piv = rref(np.ascontiguousarray(M.T), add, sub, mul, inv)
    pivset = set(piv.tolist())
    free = [c for c in range(n) if c not in pivset]
    A = np.zeros((len(free), n), dtype=np.uint8)
    for l, c in enumerate(free):
        A[l, c] = 1
        for i in range(len(piv)):
            A[l, piv[i]] = neg[R[i, c]]
    return A

"""Pure-Python (numpy) versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np

_CHUNK = 4096


def sup_abs_dense(M, d):
    M = np.asarray(M, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if d.shape[0] != M.shape[1]:
        raise ValueError("dimension mismatch")
    best = 0.0
    for start in range(0, M.shape[0], _CHUNK):
        c = M[start:start + _CHUNK] @ d
        if c.size:
            best = max(best, float(np.max(np.abs(c))))
    return best


def sup_abs_csr(data, indices, indptr, d):
    data = np.asarray(data, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    if data.size == 0:
        return 0.0
    prod = data * d[indices]
    starts = np.asarray(indptr[:-1])
    nonempty = starts < np.asarray(indptr[1:])
    sums = np.add.reduceat(prod, starts[nonempty])
    return float(np.max(np.abs(sums))) if sums.size else 0.0


def nearest(X, active, q, metric):
    X = np.asarray(X, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    active = np.asarray(active, dtype=bool)
    if q.shape[0] != X.shape[1] or active.shape[0] != X.shape[0]:
        raise ValueError("dimension mismatch")
    rows = np.flatnonzero(active)
    if rows.size == 0:
        return -1, float("inf")
    Xa = X[rows]
    if metric == 0:
        diff = Xa - q
        vals = np.einsum("ij,ij->i", diff, diff)
    else:
        vals = np.sqrt(np.einsum("ij,ij->i", Xa, Xa)) * np.sqrt(q @ q) - np.abs(Xa @ q)
        vals = np.maximum(vals, 0.0)
    k = int(np.argmin(vals))
    return int(rows[k]), float(vals[k])

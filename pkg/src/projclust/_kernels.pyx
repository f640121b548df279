# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: frame sup-scans and nearest-record search."""

from libc.math cimport fabs, sqrt, INFINITY


def sup_abs_dense(const double[:, ::1] M, const double[::1] d):
    """max_j |<M[j], d>| without materializing the coefficient vector."""
    cdef Py_ssize_t N = M.shape[0], n = M.shape[1], j, i
    cdef double acc, best = 0.0
    if d.shape[0] != n:
        raise ValueError("dimension mismatch")
    with nogil:
        for j in range(N):
            acc = 0.0
            for i in range(n):
                acc += M[j, i] * d[i]
            acc = fabs(acc)
            if acc > best:
                best = acc
    return best


def sup_abs_csr(const double[::1] data, const Py_ssize_t[::1] indices,
                const Py_ssize_t[::1] indptr, const double[::1] d):
    """Same as :func:`sup_abs_dense` for a CSR matrix given by its arrays."""
    cdef Py_ssize_t N = indptr.shape[0] - 1, j, k
    cdef double acc, best = 0.0
    with nogil:
        for j in range(N):
            acc = 0.0
            for k in range(indptr[j], indptr[j + 1]):
                acc += data[k] * d[indices[k]]
            acc = fabs(acc)
            if acc > best:
                best = acc
    return best


def nearest(const double[:, ::1] X, const unsigned char[::1] active,
            const double[::1] q, int metric):
    """Index and value of the closest active row of X to q.

    metric 0: squared distance; metric 1: ||x|| ||q|| - |<x, q>|.
    Ties keep the lowest row index.  Returns (-1, inf) if no row is active.
    """
    cdef Py_ssize_t m = X.shape[0], n = X.shape[1], j, i
    cdef Py_ssize_t best_j = -1
    cdef double best = INFINITY, acc, xx, xq, qq = 0.0, t
    if q.shape[0] != n or active.shape[0] != m:
        raise ValueError("dimension mismatch")
    with nogil:
        for i in range(n):
            qq += q[i] * q[i]
        for j in range(m):
            if not active[j]:
                continue
            if metric == 0:
                acc = 0.0
                for i in range(n):
                    t = X[j, i] - q[i]
                    acc += t * t
            else:
                xx = 0.0
                xq = 0.0
                for i in range(n):
                    xx += X[j, i] * X[j, i]
                    xq += X[j, i] * q[i]
                acc = sqrt(xx) * sqrt(qq) - fabs(xq)
                if acc < 0.0:
                    acc = 0.0
            if acc < best:
                best = acc
                best_j = j
    return best_j, best

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance kernels: brute-force kNN profiles and label votes.

Mode codes mirror _pykernels: 0 general p, 1 L1, 2 L2, 3 Linf. Compiled
with -ffp-contract=off so the arithmetic matches the numpy fallback
operation for operation.
"""

from libc.math cimport INFINITY, fabs, pow, sqrt

import numpy as np


cdef inline double _powered_dist(
    const double* a, const double* b, Py_ssize_t d, double p, int mode
) noexcept nogil:
    cdef double acc = 0.0
    cdef double diff
    cdef Py_ssize_t f
    if mode == 2:
        for f in range(d):
            diff = fabs(a[f] - b[f])
            acc = acc + diff * diff
    elif mode == 1:
        for f in range(d):
            acc = acc + fabs(a[f] - b[f])
    elif mode == 3:
        for f in range(d):
            diff = fabs(a[f] - b[f])
            if diff > acc:
                acc = diff
    else:
        for f in range(d):
            acc = acc + pow(fabs(a[f] - b[f]), p)
    return acc


def knn_mean_dists(const double[:, ::1] points, Py_ssize_t k, double p, int mode):
    """Mean distance from each row to its k nearest other rows."""
    cdef Py_ssize_t m = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    out_arr = np.empty(m, dtype=np.float64)
    buf_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] buf = buf_arr
    cdef Py_ssize_t i, j, t, pos
    cdef double v, total
    with nogil:
        for i in range(m):
            for t in range(k):
                buf[t] = INFINITY
            for j in range(m):
                if j == i:
                    continue
                v = _powered_dist(&points[i, 0], &points[j, 0], d, p, mode)
                if v < buf[k - 1]:
                    pos = k - 1
                    while pos > 0 and buf[pos - 1] > v:
                        buf[pos] = buf[pos - 1]
                        pos = pos - 1
                    buf[pos] = v
            total = 0.0
            for t in range(k):
                v = buf[t]
                if mode == 2:
                    v = sqrt(v)
                elif mode == 0:
                    v = pow(v, 1.0 / p)
                total = total + v
            out[i] = total / k
    return out_arr


def knn_label_votes(
    const double[:, ::1] train,
    const long long[::1] codes,
    Py_ssize_t n_codes,
    const double[:, ::1] queries,
    Py_ssize_t k,
    double p,
    int mode,
):
    """Majority label code among each query's k nearest training rows.

    Distance ties keep the lower row position; vote ties go to the tied
    label seen earliest in the neighbor ranking.
    """
    cdef Py_ssize_t n = train.shape[0]
    cdef Py_ssize_t d = train.shape[1]
    cdef Py_ssize_t q = queries.shape[0]
    out_arr = np.empty(q, dtype=np.int64)
    vals_arr = np.empty(k, dtype=np.float64)
    idxs_arr = np.empty(k, dtype=np.int64)
    cnts_arr = np.empty(n_codes, dtype=np.int64)
    cdef long long[::1] out = out_arr
    cdef double[::1] vals = vals_arr
    cdef long long[::1] idxs = idxs_arr
    cdef long long[::1] cnts = cnts_arr
    cdef Py_ssize_t iq, j, t, pos
    cdef long long c, best
    cdef double v
    with nogil:
        for iq in range(q):
            for t in range(k):
                vals[t] = INFINITY
                idxs[t] = -1
            for j in range(n):
                v = _powered_dist(&queries[iq, 0], &train[j, 0], d, p, mode)
                if v < vals[k - 1]:
                    pos = k - 1
                    while pos > 0 and vals[pos - 1] > v:
                        vals[pos] = vals[pos - 1]
                        idxs[pos] = idxs[pos - 1]
                        pos = pos - 1
                    vals[pos] = v
                    idxs[pos] = j
            for c in range(n_codes):
                cnts[c] = 0
            best = 0
            for t in range(k):
                c = codes[idxs[t]]
                cnts[c] = cnts[c] + 1
                if cnts[c] > best:
                    best = cnts[c]
            for t in range(k):
                c = codes[idxs[t]]
                if cnts[c] == best:
                    out[iq] = c
                    break
    return out_arr

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise-distance kernels.

Every function mirrors one in ``_kernels_py`` with the same signature. Pairs
are visited in a fixed row-major order (``i`` outer, ``j`` inner), so results
are reproducible bit for bit; they agree with the numpy fallback to rounding.
All loops run without the GIL so replications can be evaluated from threads.
"""
import numpy as np

from libc.math cimport sqrt, fabs


cdef inline double _dist(const double[:, ::1] x, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t k, d = x.shape[1]
    cdef double s = 0.0, diff
    if d == 1:
        return fabs(x[i, 0] - x[j, 0])
    for k in range(d):
        diff = x[i, k] - x[j, k]
        s += diff * diff
    return sqrt(s)


def pair_distance_sums(const double[:, ::1] x, const signed char[::1] labels):
    """Return ``(s00, s11, s01)``: distance sums over unordered within-class
    pairs and over all cross-class pairs."""
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef double s00 = 0.0, s11 = 0.0, s01 = 0.0, dij
    if labels.shape[0] != n:
        raise ValueError("labels length does not match row count")
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                dij = _dist(x, i, j)
                if labels[i] == labels[j]:
                    if labels[i] == 0:
                        s00 += dij
                    else:
                        s11 += dij
                else:
                    s01 += dij
    return s00, s11, s01


def weighted_distance_sum(const double[:, ::1] x, const double[::1] w):
    """Return sum over ordered pairs of ``w[i] * w[j] * |x_i - x_j|``."""
    cdef Py_ssize_t n = x.shape[0], i, j
    cdef double total = 0.0, row
    if w.shape[0] != n:
        raise ValueError("weights length does not match row count")
    with nogil:
        for i in range(n):
            row = 0.0
            for j in range(n):
                if j != i:
                    row += w[j] * _dist(x, i, j)
            total += w[i] * row
    return total


def dcov_dc(const double[:, ::1] x, const double[:, ::1] y):
    """Return ``(1/n^2) sum_ij A_ij B_ij`` for double-centered distance
    matrices ``A`` of ``x`` rows and ``B`` of ``y`` rows."""
    cdef Py_ssize_t n = x.shape[0], i, j
    if y.shape[0] != n:
        raise ValueError("x and y must have the same number of rows")
    a_arr = np.empty((n, n), dtype=np.float64)
    b_arr = np.empty((n, n), dtype=np.float64)
    ra_arr = np.empty(n, dtype=np.float64)
    rb_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] b = b_arr
    cdef double[::1] ra = ra_arr
    cdef double[::1] rb = rb_arr
    cdef double ga = 0.0, gb = 0.0, total = 0.0, sa, sb, v
    with nogil:
        for i in range(n):
            a[i, i] = 0.0
            b[i, i] = 0.0
            for j in range(i + 1, n):
                v = _dist(x, i, j)
                a[i, j] = v
                a[j, i] = v
                v = _dist(y, i, j)
                b[i, j] = v
                b[j, i] = v
        for i in range(n):
            sa = 0.0
            sb = 0.0
            for j in range(n):
                sa += a[i, j]
                sb += b[i, j]
            ra[i] = sa / n
            rb[i] = sb / n
            ga += sa
            gb += sb
        ga /= <double> n * n
        gb /= <double> n * n
        for i in range(n):
            for j in range(n):
                total += (a[i, j] - ra[i] - ra[j] + ga) * (b[i, j] - rb[i] - rb[j] + gb)
    return total / (<double> n * n)


def sq_euclidean(const double[:, ::1] q, const double[:, ::1] t):
    """Return the ``(len(q), len(t))`` matrix of squared Euclidean distances,
    computed from explicit differences so identical rows give exactly 0."""
    cdef Py_ssize_t nq = q.shape[0], nt = t.shape[0], c = q.shape[1], i, j, k
    cdef double s, diff
    if t.shape[1] != c:
        raise ValueError("dimension mismatch")
    out_arr = np.empty((nq, nt), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(nq):
            for j in range(nt):
                s = 0.0
                for k in range(c):
                    diff = q[i, k] - t[j, k]
                    s += diff * diff
                out[i, j] = s
    return out_arr

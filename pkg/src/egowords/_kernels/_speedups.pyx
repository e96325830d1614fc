# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled hot loops: seed shifting, kNN distances, tail scans.

Must stay in semantic lockstep with ``egowords._kernels._pure``; the test
suite compares the two backends directly.
"""

from libc.math cimport INFINITY, exp, fabs

import numpy as np


cdef inline Py_ssize_t _lower_bound(const double[::1] a, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _upper_bound(const double[::1] a, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def shift_seeds(const double[::1] values, const double[::1] prefix,
                const double[::1] seeds, double bandwidth, double tol,
                int max_iter):
    """Iterate every seed to its local flat-window mean fixed point."""
    cdef Py_ssize_t m = seeds.shape[0]
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j, lo, hi
    cdef int it, used = 0
    cdef double x, nx
    with nogil:
        for j in range(m):
            x = seeds[j]
            it = 0
            while it < max_iter:
                lo = _lower_bound(values, x - bandwidth)
                hi = _upper_bound(values, x + bandwidth)
                if hi == lo:
                    break
                nx = (prefix[hi] - prefix[lo]) / (hi - lo)
                it += 1
                if fabs(nx - x) < tol:
                    x = nx
                    break
                x = nx
            out[j] = x
            if it > used:
                used = it
    return out_arr, used


def knn_distances(const double[::1] values, Py_ssize_t k):
    """Distance from each point to its k-th nearest neighbour (self excluded)."""
    cdef Py_ssize_t n = values.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, take_left, lmin, lmax, take_right
    cdef double best, left, right, cand
    with nogil:
        for i in range(n):
            lmin = k - (n - 1 - i)
            if lmin < 0:
                lmin = 0
            lmax = i if i < k else k
            best = INFINITY
            for take_left in range(lmin, lmax + 1):
                left = values[i] - values[i - take_left] if take_left > 0 else 0.0
                take_right = k - take_left
                right = values[i + take_right] - values[i] if take_right > 0 else 0.0
                cand = left if left > right else right
                if cand < best:
                    best = cand
            out[i] = best
    return out_arr


def tail_scan(const double[::1] values, const double[::1] ln_values,
              const double[::1] ln_suffix, Py_ssize_t max_candidates):
    """Scan distinct lower cutoffs for the best continuous power-law tail."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i, j, ntail, scanned = 0, best_idx = -1
    cdef double best_ks = INFINITY, best_alpha = 0.0
    cdef double lnx, s, alpha, d, fitv, e_lo, e_hi, t
    with nogil:
        for i in range(n - 1):
            if i > 0 and values[i] == values[i - 1]:
                continue
            if scanned == max_candidates:
                break
            scanned += 1
            if values[n - 1] == values[i]:
                continue
            ntail = n - i
            lnx = ln_values[i]
            s = ln_suffix[i] - ntail * lnx
            alpha = 1.0 + ntail / s
            d = 0.0
            for j in range(i, n):
                fitv = 1.0 - exp(-(alpha - 1.0) * (ln_values[j] - lnx))
                e_lo = (<double> (j - i)) / ntail
                e_hi = (<double> (j - i + 1)) / ntail
                t = fabs(fitv - e_lo)
                if t > d:
                    d = t
                t = fabs(fitv - e_hi)
                if t > d:
                    d = t
            if d < best_ks:
                best_ks = d
                best_idx = i
                best_alpha = alpha
    return best_idx, best_alpha, best_ks, scanned

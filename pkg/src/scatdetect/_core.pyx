# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: radix-2 FFT passes, quickselect, Jacobi sweeps.

Mirrors scatdetect._kernels_py operation for operation; see that module for
the reference semantics.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def fft_pow2(double complex[::1] a, Py_ssize_t[::1] rev, double complex[::1] tw):
    """In-place radix-2 decimation-in-time FFT pass (length a power of two).

    ``tw`` is the flat stage-contiguous twiddle table from ``numerics._plan``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k, half, base, start
    cdef double complex t, u, w
    if n == 1:
        return
    for i in range(n):
        j = rev[i]
        if j > i:
            t = a[i]
            a[i] = a[j]
            a[j] = t
    half = 1
    while half < n:
        base = half - 1
        start = 0
        while start < n:
            k = 0
            for j in range(start, start + half):
                w = tw[base + k]
                t = w * a[j + half]
                u = a[j]
                a[j] = u + t
                a[j + half] = u - t
                k += 1
            start += half + half
        half <<= 1


def select_kth(double[::1] a, Py_ssize_t k):
    """k-th smallest element (0-based) of ``a``; partitions in place."""
    cdef Py_ssize_t lo = 0, hi = a.shape[0] - 1
    cdef Py_ssize_t i, lt, gt
    cdef double pivot, x, y, z, tmp
    while True:
        if lo == hi:
            return a[lo]
        x = a[lo]
        y = a[lo + ((hi - lo) >> 1)]
        z = a[hi]
        pivot = max(min(x, y), min(max(x, y), z))
        # three-way partition around pivot: [lo,lt) < pivot, [lt,gt] == pivot
        i = lo
        lt = lo
        gt = hi
        while i <= gt:
            if a[i] < pivot:
                tmp = a[i]
                a[i] = a[lt]
                a[lt] = tmp
                lt += 1
                i += 1
            elif a[i] > pivot:
                tmp = a[i]
                a[i] = a[gt]
                a[gt] = tmp
                gt -= 1
            else:
                i += 1
        if k < lt:
            hi = lt - 1
        elif k > gt:
            lo = gt + 1
        else:
            return pivot


def jacobi_eigh(double[:, ::1] a, double tol, Py_ssize_t max_sweeps):
    """Cyclic-by-rows Jacobi diagonalization of symmetric ``a``, in place.

    Returns (V, sweeps); eigenvalues end up on the diagonal of ``a``.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[double, ndim=2] v_arr = np.eye(n)
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t sweeps = 0, p, q, r
    cdef double off, apq, theta, t, c, s, cp, cq
    while sweeps < max_sweeps:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if sqrt(2.0 * off) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    cp = a[r, p]
                    cq = a[r, q]
                    a[r, p] = c * cp - s * cq
                    a[r, q] = s * cp + c * cq
                    a[p, r] = a[r, p]
                    a[q, r] = a[r, q]
                for r in range(n):
                    cp = v[r, p]
                    cq = v[r, q]
                    v[r, p] = c * cp - s * cq
                    v[r, q] = s * cp + c * cq
        sweeps += 1
    return v_arr, sweeps

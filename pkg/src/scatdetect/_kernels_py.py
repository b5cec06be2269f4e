"""Numpy implementations of the hot numeric kernels.

Same API as the compiled ``scatdetect._core`` extension; used as the
fallback when the extension is absent or disabled.  The loops are expressed
as vectorized stages but perform the identical arithmetic, element for
element, as the compiled scalar code.
"""

import numpy as np


def fft_pow2(a, rev, tw):
    """In-place radix-2 decimation-in-time FFT pass.

    ``a`` is a contiguous complex128 vector whose length n is a power of
    two, ``rev`` the length-n bit-reversal permutation and ``tw`` the flat
    stage-contiguous twiddle table from ``numerics._plan`` (conjugated
    table gives the inverse transform up to the 1/n scale, which the
    caller applies).
    """
    n = a.shape[0]
    if n == 1:
        return
    a[:] = a[rev]
    half = 1
    while half < n:
        w = tw[half - 1 : 2 * half - 1]
        b = a.reshape(-1, 2 * half)
        t = b[:, half:] * w
        u = b[:, :half].copy()
        b[:, :half] = u + t
        b[:, half:] = u - t
        half <<= 1


def select_kth(a, k):
    """k-th smallest element (0-based) of float64 vector ``a``.

    Three-way quickselect with a median-of-three pivot: expected O(n),
    robust to heavily duplicated values.  ``a`` may be mutated or rebound;
    callers pass a scratch copy.
    """
    while True:
        n = a.shape[0]
        if n == 1:
            return float(a[0])
        lo = a[0]
        mid = a[n >> 1]
        hi = a[n - 1]
        pivot = max(min(lo, mid), min(max(lo, mid), hi))
        below = a[a < pivot]
        if k < below.shape[0]:
            a = below
            continue
        n_le = int(np.count_nonzero(a <= pivot))
        if k < n_le:
            return float(pivot)
        k -= n_le
        a = a[a > pivot]


def jacobi_eigh(a, tol, max_sweeps):
    """Cyclic-by-rows Jacobi diagonalization of symmetric ``a``, in place.

    Sweeps stop once the off-diagonal Frobenius norm falls to ``tol``.
    Returns (V, sweeps) with the accumulated rotations in V's columns;
    eigenvalues are left on the diagonal of ``a``.
    """
    n = a.shape[0]
    v = np.eye(n)
    sweeps = 0
    while sweeps < max_sweeps:
        upper = a[np.triu_indices(n, k=1)]
        if np.sqrt(2.0 * np.dot(upper, upper)) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                idx = np.concatenate(
                    (np.arange(0, p), np.arange(p + 1, q), np.arange(q + 1, n))
                )
                col_p = a[idx, p].copy()
                col_q = a[idx, q].copy()
                a[idx, p] = c * col_p - s * col_q
                a[idx, q] = s * col_p + c * col_q
                a[p, idx] = a[idx, p]
                a[q, idx] = a[idx, q]
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1
    return v, sweeps

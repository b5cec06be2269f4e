"""Self-contained numeric kernels the pipeline depends on.

Forward/inverse FFT for any length (radix-2 for powers of two, Bluestein's
chirp transform otherwise), linear convolution via FFT, expected-O(n)
median selection, and symmetric eigendecomposition by cyclic Jacobi
rotations.  Everything is a deterministic pure function; summation orders
are fixed, so repeated calls are bit-identical and calls are safe from any
thread.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import backend


class SymmetricEigenResult(NamedTuple):
    """Spectral factorization C = V diag(w) V^T of a symmetric matrix.

    ``eigenvalues`` are sorted non-increasing; column i of ``eigenvectors``
    pairs with eigenvalue i.  Signs are fixed so each column's
    largest-magnitude component is positive (ties: lowest index wins).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


# Per-length transform tables; entries are immutable once built, so the
# caches are safe to share across threads.
_plans: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
_chirps: dict[int, tuple[np.ndarray, np.ndarray, int]] = {}


def _is_pow2(n: int) -> bool:
    return n & (n - 1) == 0


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m <<= 1
    return m


def _plan(n: int):
    """Bit-reversal permutation and stage-contiguous twiddle tables for power-of-two n.

    The flat table stores the stage with m = 2h butterfly span at offset
    h - 1 (h entries, exp(-2*pi*i*k/m) for k < h); total length n - 1.
    """
    cached = _plans.get(n)
    if cached is not None:
        return cached
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.intp)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev = (rev << 1) | ((idx >> b) & 1)
    tw_fwd = np.empty(max(n - 1, 1), dtype=np.complex128)
    half = 1
    while half < n:
        tw_fwd[half - 1 : 2 * half - 1] = np.exp((-1j * np.pi / half) * np.arange(half))
        half <<= 1
    tw_inv = np.conj(tw_fwd)
    _plans[n] = (rev, tw_fwd, tw_inv)
    return _plans[n]


def _pow2_fft(x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Forward or (unscaled) inverse transform of power-of-two length."""
    rev, tw_fwd, tw_inv = _plan(x.shape[0])
    buf = np.array(x, dtype=np.complex128, copy=True, order="C")
    backend.active().fft_pow2(buf, rev, tw_inv if inverse else tw_fwd)
    return buf


def _chirp_tables(n: int):
    """Bluestein chirp w and the spectrum of the padded chirp filter."""
    cached = _chirps.get(n)
    if cached is not None:
        return cached
    m = _next_pow2(2 * n - 1)
    k = np.arange(n, dtype=np.int64)
    # k^2 mod 2n keeps the phase argument small without changing exp(-i*pi*k^2/n)
    w = np.exp((-1j * np.pi / n) * ((k * k) % (2 * n)))
    b = np.zeros(m, dtype=np.complex128)
    bc = np.conj(w)
    b[:n] = bc
    b[m - n + 1 :] = bc[1:][::-1]
    spectrum = _pow2_fft(b)
    _chirps[n] = (w, spectrum, m)
    return _chirps[n]


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    w, spectrum, m = _chirp_tables(n)
    a = np.zeros(m, dtype=np.complex128)
    a[:n] = x * w
    conv = _pow2_fft(_pow2_fft(a) * spectrum, inverse=True)
    conv /= m
    return w * conv[:n]


def _dft(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    if _is_pow2(n):
        return _pow2_fft(x)
    return _bluestein(x)


def fft(x) -> np.ndarray:
    """Discrete Fourier transform, e^{-i w t} sign convention, any length >= 1."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ValueError("empty signal")
    return _dft(np.ascontiguousarray(x, dtype=np.complex128))


def ifft(x) -> np.ndarray:
    """Inverse of :func:`fft`; fft then ifft reproduces the input."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ValueError("empty signal")
    n = x.shape[0]
    out = np.conj(_dft(np.conj(np.ascontiguousarray(x, dtype=np.complex128))))
    out /= n
    return out


def fft_convolve(a, b) -> np.ndarray:
    """Linear convolution of two 1-D sequences via zero-padded FFTs.

    Output length is len(a) + len(b) - 1.  Real inputs yield a real output.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or b.ndim != 1 or a.shape[0] == 0 or b.shape[0] == 0:
        raise ValueError("empty signal")
    real_inputs = not (np.iscomplexobj(a) or np.iscomplexobj(b))
    length = a.shape[0] + b.shape[0] - 1
    m = _next_pow2(length)
    fa = np.zeros(m, dtype=np.complex128)
    fb = np.zeros(m, dtype=np.complex128)
    fa[: a.shape[0]] = a
    fb[: b.shape[0]] = b
    prod = _pow2_fft(fa) * _pow2_fft(fb)
    out = _pow2_fft(prod, inverse=True)[:length]
    out /= m
    return out.real if real_inputs else out


def quickselect_median(x) -> float:
    """Lower median: the ceil(n/2)-th smallest element (1-based).

    Expected O(n) selection; the returned value does not depend on the
    input ordering.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ValueError("empty sequence")
    scratch = np.ascontiguousarray(x, dtype=np.float64).copy()
    k = (scratch.shape[0] - 1) // 2
    return float(backend.active().select_kth(scratch, k))


def eigh(c) -> SymmetricEigenResult:
    """Eigendecomposition of a symmetric real matrix by cyclic Jacobi sweeps.

    The input is symmetrized by averaging with its transpose; asymmetry
    beyond 1e-12 relative is rejected.  Sweeps stop when the off-diagonal
    Frobenius norm falls below 1e-12 * ||C||_F (at most 100 sweeps).
    Output ordering and eigenvector signs are deterministic: eigenvalues
    non-increasing, exact ties broken by the sign-fixed eigenvectors'
    lexicographic order.
    """
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("matrix not square")
    n = c.shape[0]
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    asym = float(np.max(np.abs(c - c.T))) if c.size else 0.0
    if asym > 1e-12 * max(scale, 1e-300):
        raise ValueError("matrix not symmetric")
    a = np.ascontiguousarray((c + c.T) / 2.0)
    fro = float(np.sqrt(np.sum(a * a)))
    v, _ = backend.active().jacobi_eigh(a, 1e-12 * fro, 100)
    values = np.diagonal(a).copy()
    vectors = np.asarray(v)
    # sign convention: largest-magnitude component positive (argmax takes the
    # lowest index on ties)
    peak_rows = np.argmax(np.abs(vectors), axis=0)
    signs = np.where(vectors[peak_rows, np.arange(n)] < 0.0, -1.0, 1.0)
    vectors = vectors * signs
    order = sorted(range(n), key=lambda i: (-values[i], tuple(vectors[:, i])))
    return SymmetricEigenResult(values[order], np.ascontiguousarray(vectors[:, order]))

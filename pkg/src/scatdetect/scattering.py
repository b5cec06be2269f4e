"""Two-layer scattering decomposition.

First layer: wavelet convolution plus complex modulus (the scalogram).
Second layer: the same operation applied to each first-layer band with the
second bank.  Smoothing any of these with the layer-1 low-pass yields the
time-invariant coefficients.  All convolutions are circular at the bank
length; boundary padding is the caller's concern (see
:func:`scatdetect.pipeline.compute_scattering`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .filterbank import FilterBank
from .numerics import fft, ifft


@dataclass
class ScatteringCoeffs:
    """Zeroth/first/second-layer tensors over (t[, scale1[, scale2]]).

    ``u1``/``u2`` are moduli, ``s0``/``s1``/``s2`` their low-passed
    versions; everything except ``s0`` is non-negative.  Time is always
    axis 0.
    """

    s0: np.ndarray
    u1: np.ndarray
    s1: np.ndarray
    u2: np.ndarray
    s2: np.ndarray
    scales1: np.ndarray
    scales2: np.ndarray


def wavelet_modulus(x, bank: FilterBank) -> np.ndarray:
    """Modulus of the circular convolution with every band-pass filter.

    Returns an (n, len(bank)) matrix: column j is |x * psi_j|(t), computed
    as the modulus of the inverse FFT of x_hat * psi_hat_j.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != bank.n:
        raise ValueError("signal/bank length mismatch")
    xhat = fft(x)
    n_filters = bank.psi_hat.shape[0]
    out = np.empty((bank.n, n_filters), dtype=np.float64)
    for j in range(n_filters):
        out[:, j] = np.abs(ifft(xhat * bank.psi_hat[j]))
    return out


def smooth(u, bank: FilterBank) -> np.ndarray:
    """Circular convolution of each time series with the scaling function.

    Accepts a vector, matrix or rank-3 tensor with time on axis 0; the
    low-pass is real and symmetric, so the real part is returned.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.ndim < 1 or u.ndim > 3 or u.shape[0] != bank.n:
        raise ValueError("signal/bank length mismatch")
    flat = u.reshape(bank.n, -1)
    out = np.empty_like(flat)
    for j in range(flat.shape[1]):
        out[:, j] = ifft(fft(flat[:, j]) * bank.phi_hat).real
    return out.reshape(u.shape)


def second_layer_modulus(u1, bank: FilterBank) -> np.ndarray:
    """Apply :func:`wavelet_modulus` to every column of a first-layer matrix.

    Returns an (n, u1.shape[1], len(bank)) tensor.
    """
    u1 = np.asarray(u1, dtype=np.float64)
    if u1.ndim != 2 or u1.shape[0] != bank.n:
        raise ValueError("signal/bank length mismatch")
    n_first = u1.shape[1]
    n_second = bank.psi_hat.shape[0]
    out = np.empty((bank.n, n_first, n_second), dtype=np.float64)
    for i in range(n_first):
        uhat = fft(u1[:, i])
        for j in range(n_second):
            out[:, i, j] = np.abs(ifft(uhat * bank.psi_hat[j]))
    return out


def scattering_transform(
    x, bank1: FilterBank, bank2: FilterBank, keep: slice | None = None
) -> ScatteringCoeffs:
    """Full two-layer decomposition of ``x`` at the banks' length.

    All second-layer pairs are computed (full Cartesian product of the two
    scale sets) at full time resolution; smoothing always uses the first
    bank's scaling function.  ``keep`` optionally crops the time axis of
    every output (the transform itself still runs at the full length), so
    callers that pad for boundary handling never materialize padded rank-3
    tensors.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != bank1.n or bank2.n != bank1.n:
        raise ValueError("signal/bank length mismatch")
    n = bank1.n
    if keep is None:
        keep = slice(0, n)
    n_out = len(range(*keep.indices(n)))
    n1 = bank1.psi_hat.shape[0]
    n2 = bank2.psi_hat.shape[0]

    xhat = fft(x)
    s0 = ifft(xhat * bank1.phi_hat).real[keep].copy()
    u1_full = np.empty((n, n1), dtype=np.float64)
    s1 = np.empty((n_out, n1), dtype=np.float64)
    u2 = np.empty((n_out, n1, n2), dtype=np.float64)
    s2 = np.empty((n_out, n1, n2), dtype=np.float64)
    for i in range(n1):
        u1_full[:, i] = np.abs(ifft(xhat * bank1.psi_hat[i]))
        uhat = fft(u1_full[:, i])
        # phi_hat >= 0 implies a non-negative kernel; clamp rounding residue
        s1[:, i] = np.maximum(ifft(uhat * bank1.phi_hat).real[keep], 0.0)
        for j in range(n2):
            band = np.abs(ifft(uhat * bank2.psi_hat[j]))
            u2[:, i, j] = band[keep]
            s2[:, i, j] = np.maximum(ifft(fft(band) * bank1.phi_hat).real[keep], 0.0)
    u1 = u1_full[keep].copy()
    return ScatteringCoeffs(
        s0=s0,
        u1=u1,
        s1=s1,
        u2=u2,
        s2=s2,
        scales1=bank1.scale_set.scales,
        scales2=bank2.scale_set.scales,
    )

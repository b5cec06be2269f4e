"""Geometric scale sets and Fourier-domain wavelet filter banks.

One bank per scattering layer: J*Q analytic band-pass filters obtained by
dilating a single admissible mother profile, plus a Gaussian low-pass that
captures the residual band below the coarsest wavelet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MotherParams:
    """Mother wavelet profile parameters, both in radians/sample.

    ``center`` is the peak frequency of the undilated profile and must lie
    in (0, pi); ``bandwidth`` is its Gaussian width.
    """

    center: float
    bandwidth: float


@dataclass(frozen=True)
class ScaleSet:
    """Dilation factors 2^(1+j/Q), j = 0..J*Q-1: strictly increasing, J octaves."""

    scales: np.ndarray
    J: int
    Q: int

    def __len__(self) -> int:
        return self.scales.shape[0]


@dataclass(frozen=True)
class FilterBank:
    """Sampled Fourier-domain filters for one layer.

    ``psi_hat`` holds one row per scale (non-negative, one-sided, zero at
    DC); ``phi_hat`` is the low-pass with unit DC gain.  Rows are sampled
    on the n-point grid w_k = 2*pi*k/n mapped to (-pi, pi].
    """

    psi_hat: np.ndarray
    phi_hat: np.ndarray
    n: int
    scale_set: ScaleSet
    mother: MotherParams


DEFAULT_CENTER = 3.0 * math.pi / 4.0


def default_mother_params(Q: int) -> MotherParams:
    """Constant-Q profile whose adjacent dilations cross at half power.

    Neighbouring center frequencies are a factor 2^(1/Q) apart; the
    Gaussian width making the responses intersect where each has gain
    1/sqrt(2) is center * (2^(1/Q)-1) / ((2^(1/Q)+1) * sqrt(ln 2)).
    """
    ratio = 2.0 ** (1.0 / Q)
    bandwidth = DEFAULT_CENTER * (ratio - 1.0) / ((ratio + 1.0) * math.sqrt(math.log(2.0)))
    return MotherParams(center=DEFAULT_CENTER, bandwidth=bandwidth)


def build_scale_set(J: int, Q: int) -> ScaleSet:
    """Geometric scale progression over J octaves with Q scales per octave."""
    if J < 1 or Q < 1:
        raise ValueError("invalid filterbank geometry")
    # scalar pow keeps each entry bit-equal to the formula evaluated alone
    scales = np.array([2.0 ** (1.0 + j / Q) for j in range(J * Q)])
    scales.flags.writeable = False
    return ScaleSet(scales=scales, J=J, Q=Q)


def mother_wavelet_hat(omega, params: MotherParams):
    """Frequency response of the analytic mother wavelet.

    A Gaussian bump at ``params.center`` minus a DC-centred correction that
    forces an exact zero at omega = 0; identically zero for omega <= 0
    (one-sided, analytic).  Scalar in, scalar out; array in, array out.
    """
    omega_arr = np.asarray(omega, dtype=np.float64)
    xi = params.center
    sigma = params.bandwidth
    correction = math.exp(-xi * xi / (2.0 * sigma * sigma))
    value = np.exp(-((omega_arr - xi) ** 2) / (2.0 * sigma * sigma))
    value = value - correction * np.exp(-(omega_arr**2) / (2.0 * sigma * sigma))
    # analytically >= 0 for omega >= 0; clamp rounding residue
    value = np.where(omega_arr > 0.0, np.maximum(value, 0.0), 0.0)
    return float(value) if np.isscalar(omega) else value


def _frequency_grid(n: int) -> np.ndarray:
    """n-point grid w_k = 2*pi*k/n wrapped into (-pi, pi]."""
    omega = 2.0 * np.pi * np.arange(n, dtype=np.float64) / n
    return np.where(omega > np.pi, omega - 2.0 * np.pi, omega)


def build_filterbank(n: int, scale_set: ScaleSet, mother: MotherParams | None = None) -> FilterBank:
    """Sample the dilated filters psi_hat_s(w) = psi_hat_0(s*w) and the low-pass.

    The dilation keeps unit peak gain at every scale (L1-style convention),
    so per-band magnitudes stay comparable downstream.  The low-pass width
    is center/scale_max: its cutoff sits at the coarsest wavelet's center
    frequency.
    """
    if n < 2:
        raise ValueError("invalid filterbank geometry")
    if mother is None:
        mother = default_mother_params(scale_set.Q)
    if not (0.0 < mother.center < math.pi) or mother.bandwidth <= 0.0:
        raise ValueError("invalid mother wavelet")
    omega = _frequency_grid(n)
    psi_hat = np.empty((len(scale_set), n), dtype=np.float64)
    for row, scale in enumerate(scale_set.scales):
        psi_hat[row] = mother_wavelet_hat(scale * omega, mother)
    sigma_phi = mother.center / float(scale_set.scales[-1])
    phi_hat = np.exp(-(omega**2) / (2.0 * sigma_phi * sigma_phi))
    psi_hat.flags.writeable = False
    phi_hat.flags.writeable = False
    return FilterBank(psi_hat=psi_hat, phi_hat=phi_hat, n=n, scale_set=scale_set, mother=mother)


def lowpass_half_support(scale_set: ScaleSet, mother: MotherParams | None = None) -> int:
    """Samples until the time-domain low-pass decays to 1e-6 of its peak.

    The Gaussian phi_hat with width sigma_phi has time-domain width
    1/sigma_phi; |phi(t)| < 1e-6 * |phi(0)| once t exceeds
    sqrt(2 ln 1e6)/sigma_phi.  Used to size boundary padding.
    """
    if mother is None:
        mother = default_mother_params(scale_set.Q)
    sigma_phi = mother.center / float(scale_set.scales[-1])
    return int(math.ceil(math.sqrt(2.0 * math.log(1e6)) / sigma_phi))

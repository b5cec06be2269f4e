"""Sparse transient representation built on the second scattering layer.

Per-band medians of the smoothed second-layer energy act as robust
background levels; an expansive threshold nonlinearity zeroes everything at
or below them, leaving a tensor that is at least half zeros in every band.
Reducing that tensor across the first-layer scale axis (top principal
component per second-layer band, or a per-sample max) gives a compact 2-D
map, plus per-band variance fractions that score how transient-like each
band is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import eigh, quickselect_median


@dataclass
class TransientRep:
    """Thresholds, sparse tensor and its reduction for one signal.

    ``thresholds`` is indexed (scale1, scale2); ``rx`` is the sparse
    (t, scale1, scale2) tensor; ``lx`` the reduced (t, scale2) map.
    ``theta`` holds the per-band fraction of variance captured by the
    leading principal component (None when ``reducer == "maxpool"``), and
    ``eigvecs`` the corresponding projection directions as columns.
    """

    thresholds: np.ndarray
    rx: np.ndarray
    lx: np.ndarray
    theta: np.ndarray | None
    reducer: str
    power: float
    eigvecs: np.ndarray | None = None


@dataclass
class PermutationCheck:
    """Discrepancies between the reduced maps of original and band-permuted runs."""

    reducer: str
    bit_identical: bool
    max_lx_discrepancy: float
    max_theta_discrepancy: float


def rho(x, threshold: float, power: float) -> np.ndarray:
    """Expansive threshold nonlinearity with peak-preserving rescale.

    Entries at or below ``threshold`` become 0, the rest (x - threshold)^power;
    a non-zero result is then rescaled so its maximum equals the input's
    maximum absolute value.  An all-zero result is returned as is.
    """
    if power <= 0.0:
        raise ValueError("invalid exponent")
    x = np.asarray(x, dtype=np.float64)
    raw = np.where(x > threshold, x - threshold, 0.0) ** power
    peak = raw.max() if raw.size else 0.0
    if peak == 0.0:
        return raw
    target = float(np.max(np.abs(x)))
    out = np.minimum(raw * (target / peak), target)
    out[raw == peak] = target
    return out


def compute_thresholds(s2) -> np.ndarray:
    """Per-band lower median over time of the second-layer coefficients."""
    s2 = np.asarray(s2, dtype=np.float64)
    if s2.ndim != 3:
        raise ValueError("expected a (t, scale1, scale2) tensor")
    _, n1, n2 = s2.shape
    m = np.empty((n1, n2), dtype=np.float64)
    for i in range(n1):
        for j in range(n2):
            m[i, j] = quickselect_median(s2[:, i, j])
    return m


def compute_rx(s2, power: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Sparse tensor: each band thresholded at its own median.

    Returns (rx, thresholds).  Every band slice keeps its maximum and is at
    least half zeros (the median bounds half the samples from below).
    """
    s2 = np.asarray(s2, dtype=np.float64)
    m = compute_thresholds(s2)
    rx = np.empty_like(s2)
    n1, n2 = m.shape
    for i in range(n1):
        for j in range(n2):
            rx[:, i, j] = rho(s2[:, i, j], m[i, j], power)
    return rx, m


def reduce_pca(rx) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Project each second-layer band onto its top principal direction.

    The covariance over time of the (t, scale1) slice is formed mean-centred,
    but the uncentred rows are projected so absolute amplitudes survive.
    Returns (lx, theta, eigvecs): theta is top-eigenvalue/trace in [0, 1]
    (zero-trace bands get theta = 0 and a zero column), eigvecs stacks the
    projection directions as columns.
    """
    rx = np.asarray(rx, dtype=np.float64)
    if rx.ndim != 3:
        raise ValueError("expected a (t, scale1, scale2) tensor")
    n, n1, n2 = rx.shape
    if n < 2:
        raise ValueError("covariance undefined")
    lx = np.zeros((n, n2), dtype=np.float64)
    theta = np.zeros(n2, dtype=np.float64)
    eigvecs = np.zeros((n1, n2), dtype=np.float64)
    for j in range(n2):
        slab = rx[:, :, j]
        centred = slab - slab.mean(axis=0)
        cov = centred.T @ centred / n
        trace = float(np.trace(cov))
        if trace <= 0.0:
            continue
        result = eigh(cov)
        top = result.eigenvectors[:, 0]
        lx[:, j] = slab @ top
        theta[j] = float(result.eigenvalues[0]) / trace
        eigvecs[:, j] = top
    return lx, theta, eigvecs


def reduce_maxpool(rx) -> np.ndarray:
    """Per-sample maximum across the first-layer scale axis."""
    rx = np.asarray(rx, dtype=np.float64)
    if rx.ndim != 3:
        raise ValueError("expected a (t, scale1, scale2) tensor")
    return rx.max(axis=1)


def build_representation(s2, power: float = 2.0, reducer: str = "pca") -> TransientRep:
    """Thresholds, sparse tensor and reduction in one call."""
    if reducer not in ("pca", "maxpool"):
        raise ValueError(f"unknown reducer {reducer!r}")
    rx, m = compute_rx(s2, power)
    if reducer == "pca":
        lx, theta, eigvecs = reduce_pca(rx)
        return TransientRep(m, rx, lx, theta, "pca", power, eigvecs)
    lx = reduce_maxpool(rx)
    return TransientRep(m, rx, lx, None, "maxpool", power)


def weight_by_theta(lx, theta) -> np.ndarray:
    """Scale each band column by its variance fraction (soft band selection)."""
    lx = np.asarray(lx, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    if lx.ndim != 2 or theta.ndim != 1 or lx.shape[1] != theta.shape[0]:
        raise ValueError("lx/theta length mismatch")
    return lx * theta


def select_representatives(theta) -> list[int]:
    """Indices of local maxima of the variance fractions over the band axis.

    Plateaus count once (leftmost index); an endpoint qualifies when it
    dominates its single neighbour.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.shape[0] == 0:
        raise ValueError("empty sequence")
    picks: list[int] = []
    n = theta.shape[0]
    start = 0
    while start < n:
        stop = start
        while stop + 1 < n and theta[stop + 1] == theta[start]:
            stop += 1
        left = theta[start - 1] if start > 0 else -np.inf
        right = theta[stop + 1] if stop + 1 < n else -np.inf
        if theta[start] > left and theta[start] > right:
            picks.append(start)
        start = stop + 1
    return picks


def check_permutation_invariance(x, perm, bank1, bank2, power: float = 2.0,
                                 reducer: str = "pca") -> PermutationCheck:
    """Run the reduction twice, once with the first-layer bands permuted.

    Both paths recompute the second layer, thresholds and reduction from
    scratch; nothing exploits the permutation structure.  Max-pooling must
    come back bit-identical; the PCA route matches up to column sign at
    rounding level.
    """
    from .scattering import second_layer_modulus, smooth, wavelet_modulus

    perm = np.asarray(perm, dtype=np.intp)
    u1 = wavelet_modulus(x, bank1)
    if sorted(perm.tolist()) != list(range(u1.shape[1])):
        raise ValueError("permutation is not a bijection on the first-layer bands")

    def reduced(u1_variant):
        s2 = np.maximum(smooth(second_layer_modulus(u1_variant, bank2), bank1), 0.0)
        rep = build_representation(s2, power=power, reducer=reducer)
        return rep.lx, rep.theta

    lx_a, theta_a = reduced(u1)
    lx_b, theta_b = reduced(u1[:, perm])
    if reducer == "maxpool":
        identical = bool(np.array_equal(lx_a, lx_b))
        diff = float(np.max(np.abs(lx_a - lx_b))) if lx_a.size else 0.0
        return PermutationCheck("maxpool", identical, diff, 0.0)
    sign = np.where(np.sum(lx_a * lx_b, axis=0) < 0.0, -1.0, 1.0)
    lx_diff = float(np.max(np.abs(lx_a - lx_b * sign))) if lx_a.size else 0.0
    theta_diff = float(np.max(np.abs(theta_a - theta_b))) if theta_a.size else 0.0
    identical = bool(np.array_equal(lx_a, lx_b) and np.array_equal(theta_a, theta_b))
    return PermutationCheck("pca", identical, lx_diff, theta_diff)

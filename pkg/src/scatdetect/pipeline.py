"""End-to-end orchestration: padding, bank caching and the three analyses.

The scattering primitives are circular, so signals are reflect-padded by at
least the low-pass half-support before transforming and the outputs cropped
back; the padded length is rounded up to a power of two to keep every
transform on the radix-2 fast path.
"""

from __future__ import annotations

import numpy as np

from . import detection
from .config import PipelineConfig
from .filterbank import FilterBank, build_filterbank, build_scale_set, default_mother_params, lowpass_half_support
from .representation import TransientRep, build_representation
from .scattering import ScatteringCoeffs, scattering_transform

_bank_cache: dict[tuple, FilterBank] = {}


def _next_pow2(n: int) -> int:
    m = 1
    while m < n:
        m <<= 1
    return m


def _bank(n: int, J: int, Q: int) -> FilterBank:
    key = (n, J, Q)
    bank = _bank_cache.get(key)
    if bank is None:
        bank = build_filterbank(n, build_scale_set(J, Q))
        if len(_bank_cache) > 32:
            _bank_cache.clear()
        _bank_cache[key] = bank
    return bank


def banks_for_signal(n: int, config: PipelineConfig) -> tuple[FilterBank, FilterBank]:
    """The two (cached) banks a length-n signal is analyzed with."""
    _, total = pad_plan(n, config)
    return _bank(total, config.j1, config.q1), _bank(total, config.j2, config.q2)


def pad_plan(n: int, config: PipelineConfig) -> tuple[int, int]:
    """(left pad, padded total) for a length-n signal under this config."""
    scale_set = build_scale_set(config.j1, config.q1)
    margin = lowpass_half_support(scale_set, default_mother_params(config.q1))
    total = _next_pow2(n + 2 * margin)
    return margin, total


def _reflect_pad(x: np.ndarray, left: int, right: int) -> np.ndarray:
    if x.shape[0] == 1:
        return np.pad(x, (left, right), mode="edge")
    return np.pad(x, (left, right), mode="reflect")


def compute_scattering(x, config: PipelineConfig) -> ScatteringCoeffs:
    """Two-layer scattering of a raw signal, boundary-padded and cropped."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] == 0:
        raise ValueError("empty signal")
    n = x.shape[0]
    left, total = pad_plan(n, config)
    padded = _reflect_pad(x, left, total - n - left)
    bank1 = _bank(total, config.j1, config.q1)
    bank2 = _bank(total, config.j2, config.q2)
    return scattering_transform(padded, bank1, bank2, keep=slice(left, left + n))


def analyze_signal(x, config: PipelineConfig) -> tuple[ScatteringCoeffs, TransientRep]:
    """Scattering plus the sparse representation, under one config."""
    coeffs = compute_scattering(x, config)
    rep = build_representation(coeffs.s2, power=config.p, reducer=config.reducer)
    return coeffs, rep


def frame_features(coeffs: ScatteringCoeffs, rep: TransientRep, frame_len: int) -> np.ndarray:
    """Frame-averaged full feature vectors, one row per frame.

    Same layout as :func:`scatdetect.detection.assemble_features`, with the
    time-dependent blocks averaged over non-overlapping frames.
    """
    s0 = detection.frame_average(coeffs.s0, frame_len)
    s1 = detection.frame_average(coeffs.s1, frame_len)
    s2 = detection.frame_average(coeffs.s2, frame_len)
    lx = detection.frame_average(rep.lx, frame_len)
    count = s0.shape[0]
    constant = [rep.thresholds.ravel()]
    if rep.reducer == "pca":
        constant.append(rep.theta)
    constant_block = np.concatenate(constant)
    rows = [
        np.concatenate([s0[t : t + 1], s1[t], s2[t].ravel(), constant_block, lx[t]])
        for t in range(count)
    ]
    return np.asarray(rows)


def detect_signal(x, config: PipelineConfig, cluster_on: str = "lx") -> detection.DetectionResult:
    """Whole-signal transient detection.

    The reduced map (or, with ``cluster_on="features"``, the full
    frame-averaged feature vectors) is averaged over non-overlapping frames,
    the frames clustered, and runs of the transient cluster converted to
    inclusive sample intervals (runs shorter than ``min_duration`` samples
    dropped).
    """
    if cluster_on not in ("lx", "features"):
        raise ValueError(f"unknown clustering input {cluster_on!r}")
    x = np.asarray(x, dtype=np.float64)
    coeffs, rep = analyze_signal(x, config)
    frames = detection.frame_average(rep.lx, config.frame_len)
    cluster_input = (
        frames if cluster_on == "lx" else frame_features(coeffs, rep, config.frame_len)
    )
    labels, k = detection.cluster_frames(cluster_input, config.k_max, seed=config.seed)
    min_frames = max(1, -(-config.min_duration // config.frame_len))
    frame_intervals, cluster = detection.extract_intervals(labels, frames, min_frames)
    n = x.shape[0]
    intervals = [
        (int(f0 * config.frame_len), int(min((f1 + 1) * config.frame_len, n) - 1), int(cluster))
        for f0, f1 in frame_intervals
    ]
    return detection.DetectionResult(
        labels=labels, k=k, intervals=intervals, frame_len=config.frame_len
    )


def monitor_signal(x, config: PipelineConfig) -> tuple[detection.WindowPlan, np.ndarray]:
    """Sliding-window band-score trajectory (one row per window)."""
    x = np.asarray(x, dtype=np.float64)
    plan = detection.plan_windows(x.shape[0], config.window_len, config.hop)
    return plan, detection.theta_trajectory(x, plan, config)

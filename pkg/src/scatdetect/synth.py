"""Deterministic synthetic fixtures: colored noise, burst trains, chirps
and regime switches, each with a ground-truth sidecar."""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .numerics import fft, ifft


def colored_noise(n: int, alpha: float, rng) -> np.ndarray:
    """Unit-variance noise with power spectral density proportional to f^-alpha."""
    white = rng.standard_normal(n)
    if n == 1 or alpha == 0.0:
        out = white
    else:
        spectrum = fft(white)
        k = np.arange(n)
        cycles = np.minimum(k, n - k) / n
        gain = np.zeros(n)
        gain[1:] = cycles[1:] ** (-alpha / 2.0)
        out = ifft(spectrum * gain).real
    out = out - out.mean()
    std = out.std()
    return out / std if std > 0 else out


def mad_sigma(x) -> float:
    """Robust noise scale: median absolute deviation / 0.6745."""
    x = np.asarray(x, dtype=np.float64)
    med = float(np.median(x))
    return float(np.median(np.abs(x - med))) / 0.6745


def gabor_burst(n: int, center: int, width: float, freq: float, amplitude: float) -> np.ndarray:
    """Modulated Gaussian burst; support truncated at three widths."""
    halfspan = int(math.ceil(3.0 * width))
    t = np.arange(max(0, center - halfspan), min(n, center + halfspan + 1))
    envelope = amplitude * np.exp(-((t - center) ** 2) / (2.0 * width * width))
    out = np.zeros(n)
    out[t] = envelope * np.cos(2.0 * np.pi * freq * (t - center))
    return out


def _spread_positions(count: int, n: int, margin: int, min_gap: int, rng) -> list[int]:
    """Draw well-separated burst centers; deterministic given the generator state."""
    lo, hi = margin, n - margin
    if hi <= lo or count < 1:
        raise InputError("burst layout does not fit the signal")
    for _ in range(10000):
        centers = np.sort(rng.integers(lo, hi, size=count))
        if count == 1 or int(np.diff(centers).min()) >= min_gap:
            return [int(c) for c in centers]
    raise InputError("could not place bursts with the requested spacing")


def make_noise(n: int, seed: int, alpha: float = 1.0) -> tuple[np.ndarray, dict]:
    rng = np.random.default_rng(seed)
    signal = colored_noise(n, alpha, rng)
    truth = {"kind": "noise", "n": n, "seed": seed, "params": {"alpha": alpha}, "events": []}
    return signal, truth


def make_bursts(
    n: int,
    seed: int,
    count: int = 5,
    amplitude_mad: float = 5.0,
    width: float = 30.0,
    freq: float = 0.08,
    freq_jitter: float = 0.1,
    alpha: float = 1.0,
    min_gap: int | None = None,
    margin: int | None = None,
) -> tuple[np.ndarray, dict]:
    """Colored-noise background plus ``count`` well-separated bursts.

    Burst amplitude is ``amplitude_mad`` times the background's robust
    (MAD-based) sigma; carriers jitter by up to ``freq_jitter`` relative.
    """
    rng = np.random.default_rng(seed)
    background = colored_noise(n, alpha, rng)
    scale = mad_sigma(background)
    amplitude = amplitude_mad * scale
    if margin is None:
        margin = max(int(6 * width), n // 64)
    if min_gap is None:
        min_gap = max(int(20 * width), n // (4 * count))
    centers = _spread_positions(count, n, margin, min_gap, rng)
    signal = background.copy()
    events = []
    halfspan = int(math.ceil(3.0 * width))
    for center in centers:
        carrier = freq * (1.0 + freq_jitter * float(rng.uniform(-1.0, 1.0)))
        signal += gabor_burst(n, center, width, carrier, amplitude)
        events.append(
            {
                "center": center,
                "start": max(0, center - halfspan),
                "end": min(n - 1, center + halfspan),
                "amplitude": amplitude,
                "freq": carrier,
            }
        )
    truth = {
        "kind": "burst",
        "n": n,
        "seed": seed,
        "params": {
            "count": count,
            "amplitude_mad": amplitude_mad,
            "width": width,
            "freq": freq,
            "freq_jitter": freq_jitter,
            "alpha": alpha,
            "margin": margin,
            "min_gap": min_gap,
        },
        "events": events,
    }
    return signal, truth


def make_chirp(
    n: int, seed: int, f0: float = 0.01, f1: float = 0.2, amplitude: float = 3.0,
    noise_level: float = 1.0, alpha: float = 0.0,
) -> tuple[np.ndarray, dict]:
    rng = np.random.default_rng(seed)
    t = np.arange(n, dtype=np.float64)
    phase = 2.0 * np.pi * (f0 * t + (f1 - f0) * t * t / (2.0 * n))
    signal = amplitude * np.cos(phase) + noise_level * colored_noise(n, alpha, rng)
    truth = {
        "kind": "chirp",
        "n": n,
        "seed": seed,
        "params": {"f0": f0, "f1": f1, "amplitude": amplitude, "noise_level": noise_level},
        "events": [{"start": 0, "end": n - 1}],
    }
    return signal, truth


def make_regime(
    n: int, seed: int, change_at: int | None = None, alpha: float = 1.0,
    burst_every: int = 400, width: float = 6.0, freq: float = 0.12,
    amplitude_mad: float = 6.0,
) -> tuple[np.ndarray, dict]:
    """Quiet colored noise that switches to a dense burst train at ``change_at``."""
    rng = np.random.default_rng(seed)
    if change_at is None:
        change_at = n // 2
    if not (0 < change_at < n):
        raise InputError("change_at must fall inside the signal")
    background = colored_noise(n, alpha, rng)
    amplitude = amplitude_mad * mad_sigma(background)
    signal = background.copy()
    events = []
    halfspan = int(3 * width)
    center = change_at + halfspan + 1
    while center < n - halfspan - 1:
        jitter = int(rng.integers(-burst_every // 4, burst_every // 4 + 1))
        # bursts must stay strictly inside the post-change regime
        pos = min(max(center + jitter, change_at + halfspan + 1), n - halfspan - 2)
        signal += gabor_burst(n, pos, width, freq, amplitude)
        events.append({"center": pos, "start": pos - halfspan, "end": pos + halfspan})
        center += burst_every
    truth = {
        "kind": "regime",
        "n": n,
        "seed": seed,
        "params": {
            "change_at": change_at,
            "alpha": alpha,
            "burst_every": burst_every,
            "width": width,
            "freq": freq,
            "amplitude_mad": amplitude_mad,
        },
        "events": events,
    }
    return signal, truth


_GENERATORS = {
    "noise": make_noise,
    "burst": make_bursts,
    "chirp": make_chirp,
    "regime": make_regime,
}

_INT_PARAMS = {"n", "count", "min_gap", "margin", "change_at", "burst_every"}


def generate(kind: str, params: dict, seed: int) -> tuple[np.ndarray, dict]:
    """Dispatch by fixture kind; ``params`` come from the CLI as strings or numbers."""
    if kind not in _GENERATORS:
        raise InputError(f"unknown fixture kind {kind!r}; choose from {sorted(_GENERATORS)}")
    coerced = {}
    for key, value in params.items():
        if isinstance(value, str):
            value = int(value) if key in _INT_PARAMS else float(value)
        coerced[key] = value
    if "n" not in coerced:
        coerced["n"] = 16384
    try:
        return _GENERATORS[kind](seed=seed, **coerced)
    except TypeError as exc:
        raise InputError(f"bad parameters for kind {kind!r}: {exc}") from exc

"""Application layer: windowed band-score tracking, feature assembly,
unsupervised frame clustering and transient-interval extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .representation import TransientRep
from .scattering import ScatteringCoeffs

# Minimum mean silhouette for accepting a multi-cluster partition; measured
# noise-only frame sets peak near 0.4 while genuine transients exceed 0.9.
SILHOUETTE_MIN = 0.5


@dataclass(frozen=True)
class WindowPlan:
    """Sliding-window layout: starts[i] = i*hop, as many as fit."""

    window_len: int
    hop: int
    count: int
    starts: np.ndarray


@dataclass
class DetectionResult:
    """Clustering outcome plus the intervals attributed to the transient cluster.

    ``intervals`` holds inclusive (start_sample, end_sample, cluster_id)
    triples; ``theta_trajectory`` is filled only by the windowed monitor.
    """

    labels: np.ndarray
    k: int
    intervals: list = field(default_factory=list)
    theta_trajectory: np.ndarray | None = None
    frame_len: int = 1


def plan_windows(n: int, window_len: int, hop: int) -> WindowPlan:
    """Maximal sequence of hop-spaced windows fitting inside n samples."""
    if window_len < 2:
        raise ValueError("window_len must be at least 2")
    if not (1 <= hop <= window_len):
        raise ValueError("hop must be in [1, window_len]")
    if n < window_len:
        raise ValueError("signal shorter than window")
    count = (n - window_len) // hop + 1
    starts = np.arange(count, dtype=np.intp) * hop
    return WindowPlan(window_len=window_len, hop=hop, count=count, starts=starts)


def theta_trajectory(x, plan: WindowPlan, config) -> np.ndarray:
    """Per-window band variance fractions; row w sees only its own samples.

    Each row is the full pipeline (scattering, thresholding, PCA reduction)
    run on x[starts[w] : starts[w] + window_len], so causally later samples
    can never influence it.
    """
    from . import pipeline

    if config.reducer != "pca":
        raise ValueError("theta trajectory requires the pca reducer")
    x = np.asarray(x, dtype=np.float64)
    if plan.count == 0 or plan.starts[-1] + plan.window_len > x.shape[0]:
        raise ValueError("signal shorter than window")
    rows = []
    for start in plan.starts:
        window = x[start : start + plan.window_len]
        _, rep = pipeline.analyze_signal(window, config)
        rows.append(rep.theta)
    return np.asarray(rows)


def feature_length(j1: int, q1: int, j2: int, q2: int, reducer: str = "pca") -> int:
    """Per-frame feature dimension; the variance-fraction block drops for maxpool."""
    n1 = j1 * q1
    n2 = j2 * q2
    theta_block = n2 if reducer == "pca" else 0
    return 1 + n1 + 2 * n1 * n2 + theta_block + n2


def assemble_features(coeffs: ScatteringCoeffs, rep: TransientRep, t: int) -> np.ndarray:
    """Flat per-frame feature vector.

    Order: smoothed signal, first-layer bands, second-layer bands
    (scale1-major), per-band thresholds (same layout), variance fractions
    (PCA mode only), reduced map.
    """
    n = coeffs.s0.shape[0]
    if not (0 <= t < n):
        raise ValueError("frame index out of range")
    blocks = [
        np.atleast_1d(coeffs.s0[t]),
        coeffs.s1[t, :],
        coeffs.s2[t, :, :].ravel(),
        rep.thresholds.ravel(),
    ]
    if rep.reducer == "pca":
        blocks.append(rep.theta)
    blocks.append(rep.lx[t, :])
    return np.concatenate(blocks)


def frame_average(series, frame_len: int) -> np.ndarray:
    """Mean over non-overlapping frames along axis 0; the tail remainder is dropped."""
    series = np.asarray(series, dtype=np.float64)
    if frame_len < 1:
        raise ValueError("frame_len must be positive")
    count = series.shape[0] // frame_len
    if count == 0:
        raise ValueError("signal shorter than one frame")
    trimmed = series[: count * frame_len]
    return trimmed.reshape((count, frame_len) + series.shape[1:]).mean(axis=1)


def pairwise_cityblock(points) -> np.ndarray:
    """Dense L1 distance matrix, computed in row chunks to bound memory."""
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    dist = np.empty((n, n), dtype=np.float64)
    chunk = max(1, int(4e6 // max(1, n * points.shape[1])))
    for lo in range(0, n, chunk):
        hi = min(n, lo + chunk)
        dist[lo:hi] = np.abs(points[lo:hi, None, :] - points[None, :, :]).sum(axis=2)
    return dist


def _kmedoids(dist: np.ndarray, k: int, rng, max_iter: int = 100):
    """PAM-style k-medoids on a precomputed distance matrix.

    Greedy farthest-point init from a seeded first medoid, then best-swap
    iterations; the objective never increases.  Returns (labels, medoids,
    objective history); cluster ids follow ascending medoid index.
    """
    n = dist.shape[0]
    if not (1 <= k <= n):
        raise ValueError("cluster count out of range")
    medoids = [int(rng.integers(n))]
    while len(medoids) < k:
        nearest = dist[:, medoids].min(axis=1)
        nearest[medoids] = -np.inf
        medoids.append(int(np.argmax(nearest)))

    def assign(meds):
        d_med = dist[:, meds]
        labels = np.argmin(d_med, axis=1)
        return labels, float(d_med.min(axis=1).sum())

    labels, objective = assign(medoids)
    history = [objective]
    for _ in range(max_iter):
        d_med = dist[:, medoids]
        nearest = np.argmin(d_med, axis=1)
        if k > 1:
            part = np.partition(d_med, 1, axis=1)
            d1, d2 = part[:, 0], part[:, 1]
        else:
            d1 = d_med[:, 0]
            d2 = np.full(n, np.inf)
        best_delta = 0.0
        best_swap = None
        for mi in range(k):
            base = np.where(nearest == mi, d2, d1)
            costs = np.minimum(base[:, None], dist).sum(axis=0)
            costs[medoids] = np.inf
            h = int(np.argmin(costs))
            delta = float(costs[h]) - objective
            if delta < best_delta - 1e-12:
                best_delta = delta
                best_swap = (mi, h)
        if best_swap is None:
            break
        medoids[best_swap[0]] = best_swap[1]
        labels, objective = assign(medoids)
        history.append(objective)
    order = np.argsort(medoids, kind="stable")
    relabel = np.empty(k, dtype=np.intp)
    relabel[order] = np.arange(k)
    return relabel[labels], [medoids[i] for i in order], history


def silhouette_score(dist: np.ndarray, labels: np.ndarray, k: int) -> float:
    """Mean silhouette under the precomputed distance matrix."""
    n = dist.shape[0]
    members = [np.flatnonzero(labels == c) for c in range(k)]
    scores = np.zeros(n)
    for i in range(n):
        own = members[labels[i]]
        if own.shape[0] <= 1:
            continue
        a = dist[i, own].sum() / (own.shape[0] - 1)
        b = np.inf
        for c in range(k):
            if c == labels[i] or members[c].shape[0] == 0:
                continue
            b = min(b, float(dist[i, members[c]].mean()))
        denom = max(a, b)
        if denom > 0.0 and np.isfinite(b):
            scores[i] = (b - a) / denom
    return float(scores.mean())


def cluster_frames(frames, k_max: int, seed: int = 0, max_iter: int = 100):
    """Choose a cluster count in 1..k_max and partition the frames.

    k-medoids under the city-block distance for each candidate k (skipping
    any k exceeding the frame count); the k with the best mean silhouette
    wins.  A single cluster is returned only when the frames are all
    (numerically) identical or no candidate reaches ``SILHOUETTE_MIN``.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim == 1:
        frames = frames[:, None]
    n = frames.shape[0]
    if n < 2:
        raise ValueError("need at least 2 frames")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    dist = pairwise_cityblock(frames)
    if float(dist.max()) < 1e-12:
        return np.zeros(n, dtype=np.intp), 1
    best = None  # (silhouette, -k, labels, k)
    for k in range(2, k_max + 1):
        if k > n:
            break
        rng = np.random.default_rng([seed, k])
        labels, _, _ = _kmedoids(dist, k, rng, max_iter)
        score = silhouette_score(dist, labels, k)
        if best is None or (score, -k) > (best[0], -best[3]):
            best = (score, -k, labels, k)
    if best is None or best[0] < SILHOUETTE_MIN:
        return np.zeros(n, dtype=np.intp), 1
    return best[2], best[3]


def extract_intervals(labels, lx_frames, min_frames: int = 1):
    """Frame intervals belonging to the transient cluster.

    The transient cluster maximizes (mean frame L1 energy) / (occupancy
    fraction); maximal runs of consecutive frames carrying it, at least
    ``min_frames`` long, become inclusive (start_frame, end_frame) pairs.
    With a single cluster there is no detection and the list is empty.
    """
    labels = np.asarray(labels, dtype=np.intp)
    lx_frames = np.asarray(lx_frames, dtype=np.float64)
    if lx_frames.ndim == 1:
        lx_frames = lx_frames[:, None]
    ids = np.unique(labels)
    if ids.shape[0] <= 1:
        return [], None
    energy = np.abs(lx_frames).sum(axis=1)
    total = labels.shape[0]
    best_cluster = None
    best_score = -np.inf
    for c in ids:
        mask = labels == c
        occupancy = mask.sum() / total
        score = float(energy[mask].mean()) / occupancy
        if score > best_score:
            best_score = score
            best_cluster = int(c)
    intervals = []
    start = None
    for i, lab in enumerate(labels):
        if lab == best_cluster and start is None:
            start = i
        elif lab != best_cluster and start is not None:
            if i - start >= min_frames:
                intervals.append((start, i - 1))
            start = None
    if start is not None and labels.shape[0] - start >= min_frames:
        intervals.append((start, labels.shape[0] - 1))
    return intervals, best_cluster

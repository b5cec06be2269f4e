"""Acceptance gate: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.  Every
tolerance and time budget is asserted inside the test that owns it.
"""

import os
import time

import numpy as np
import pytest

from scatdetect import numerics as nm
from scatdetect import sigio
from scatdetect.cli import main as cli_main
from scatdetect.config import PipelineConfig
from scatdetect.detection import assemble_features, feature_length, plan_windows, theta_trajectory
from scatdetect.filterbank import build_filterbank, build_scale_set
from scatdetect.pipeline import analyze_signal
from scatdetect.representation import check_permutation_invariance, compute_rx
from scatdetect.scattering import scattering_transform

from oracles import (
    direct_circular_convolve,
    direct_inverse_dft,
    power_iteration_top,
    sort_median,
)


def _verdict(number, ok, detail):
    print(f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


class TestAcceptance:
    def test_01_feature_vector_dimension(self):
        start = time.perf_counter()
        rng = np.random.default_rng(1)
        coeffs, rep = analyze_signal(rng.standard_normal(64), PipelineConfig())
        vec = assemble_features(coeffs, rep, 31)
        assert vec.shape[0] == 861
        # independent re-derivation of the dimension identity, 36 tuples
        checked = 0
        for j1 in (1, 2, 3):
            for q1 in (1, 2):
                for j2 in (1, 2, 3):
                    for q2 in (1, 2):
                        independent = 1 + j1 * q1 + 2 * (j1 * q1) * (j2 * q2) + 2 * (j2 * q2)
                        assert feature_length(j1, q1, j2, q2, "pca") == independent
                        checked += 1
        assert checked == 36
        elapsed = time.perf_counter() - start
        _verdict(1, elapsed < 1.0, f"dim 861 + {checked}-tuple sweep in {elapsed:.2f}s")

    def test_02_sparsity_guarantee(self):
        start = time.perf_counter()
        rng = np.random.default_rng(2)
        n = 4096
        configs = [
            PipelineConfig(j1=2, q1=4, j2=2, q2=4),
            PipelineConfig(j1=1, q1=6, j2=2, q2=3),
            PipelineConfig(j1=3, q1=2, j2=1, q2=4),
        ]
        floor = -(-n // 2)
        worst = n
        for trial in range(50):
            x = rng.standard_normal(n)
            coeffs, _ = analyze_signal(x, configs[trial % len(configs)])
            rx, _ = compute_rx(coeffs.s2, 2.0)
            zeros = (rx == 0.0).sum(axis=0)
            worst = min(worst, int(zeros.min()))
            assert int(zeros.min()) >= floor
        elapsed = time.perf_counter() - start
        _verdict(2, elapsed < 30.0,
                 f"50 signals, min zero count {worst} >= {floor} in {elapsed:.1f}s")

    def test_03_frequency_permutation_invariance(self):
        start = time.perf_counter()
        rng = np.random.default_rng(3)
        n = 1024
        x = rng.standard_normal(n)
        bank1 = build_filterbank(n, build_scale_set(2, 4))
        bank2 = build_filterbank(n, build_scale_set(2, 4))
        coeffs = scattering_transform(x, bank1, bank2)
        from scatdetect.representation import build_representation

        lx_scale = max(
            1.0,
            float(np.max(np.abs(build_representation(coeffs.s2, 2.0, "pca").lx))),
        )
        for _ in range(20):
            perm = rng.permutation(8)
            pooled = check_permutation_invariance(x, perm, bank1, bank2, reducer="maxpool")
            assert pooled.bit_identical and pooled.max_lx_discrepancy == 0.0
            pca = check_permutation_invariance(x, perm, bank1, bank2, reducer="pca")
            assert pca.max_theta_discrepancy <= 1e-10
            assert pca.max_lx_discrepancy <= 1e-8 * lx_scale
        elapsed = time.perf_counter() - start
        _verdict(3, elapsed < 60.0,
                 f"20 permutations: maxpool bit-identical, pca within tolerance, {elapsed:.1f}s")

    def test_04_scattering_oracle_equivalence(self):
        start = time.perf_counter()
        n = 256
        rng = np.random.default_rng(4)
        x = rng.standard_normal(n)
        bank1 = build_filterbank(n, build_scale_set(2, 3))
        bank2 = build_filterbank(n, build_scale_set(2, 3))
        coeffs = scattering_transform(x, bank1, bank2)
        psis1 = [direct_inverse_dft(row) for row in bank1.psi_hat]
        psis2 = [direct_inverse_dft(row) for row in bank2.psi_hat]
        phi = direct_inverse_dft(bank1.phi_hat)
        worst = 0.0
        for i, psi1 in enumerate(psis1):
            u1 = np.abs(direct_circular_convolve(x, psi1))
            worst = max(worst, np.max(np.abs(coeffs.u1[:, i] - u1)) / max(np.max(u1), 1e-12))
            for j, psi2 in enumerate(psis2):
                u2 = np.abs(direct_circular_convolve(u1, psi2))
                s2 = np.maximum(direct_circular_convolve(u2, phi).real, 0.0)
                denom = max(float(np.max(u2)), 1e-12)
                worst = max(worst, np.max(np.abs(coeffs.u2[:, i, j] - u2)) / denom)
                worst = max(worst, np.max(np.abs(coeffs.s2[:, i, j] - s2)) / denom)
        assert worst <= 1e-8
        elapsed = time.perf_counter() - start
        _verdict(4, elapsed < 60.0, f"U1/U2/S2 vs direct convolution: rel err {worst:.1e}, {elapsed:.1f}s")

    def test_05_complexity_scaling(self):
        start = time.perf_counter()
        rng = np.random.default_rng(5)
        times = {}
        for n in (2 ** 16, 2 ** 17):
            bank1 = build_filterbank(n, build_scale_set(2, 4))
            bank2 = build_filterbank(n, build_scale_set(2, 4))
            x = rng.standard_normal(n)
            scattering_transform(x, bank1, bank2)  # warm caches
            samples = []
            for _ in range(5):
                t0 = time.perf_counter()
                scattering_transform(x, bank1, bank2)
                samples.append(time.perf_counter() - t0)
            times[n] = sorted(samples)[2]
        ratio = times[2 ** 17] / times[2 ** 16]
        assert ratio <= 3.0
        elapsed = time.perf_counter() - start
        _verdict(5, elapsed < 180.0,
                 f"median-of-5 time ratio 2^17/2^16 = {ratio:.2f} <= 3.0, {elapsed:.1f}s")

    def test_06_median_kernel(self):
        start = time.perf_counter()
        rng = np.random.default_rng(6)
        for _ in range(1000):
            n = int(rng.integers(1, 1000))
            x = rng.standard_normal(n)
            assert nm.quickselect_median(x) == sort_median(x)
        elapsed = time.perf_counter() - start
        _verdict(6, elapsed < 10.0, f"1000 arrays match sort oracle exactly, {elapsed:.1f}s")

    def test_07_eigensolver(self):
        start = time.perf_counter()
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = int(rng.integers(1, 21))
            c = rng.standard_normal((n, n))
            c = (c + c.T) / 2
            res = nm.eigh(c)
            v, w = res.eigenvectors, res.eigenvalues
            recon = np.max(np.abs(c - v @ np.diag(w) @ v.T))
            assert recon <= 1e-10 * max(1.0, np.max(np.abs(c)))
            assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-10
        elapsed = time.perf_counter() - start
        _verdict(7, elapsed < 30.0, f"200 matrices reconstructed within 1e-10, {elapsed:.1f}s")

    def test_08_pca_reduction_oracle(self):
        start = time.perf_counter()
        rng = np.random.default_rng(8)
        from scatdetect.representation import reduce_pca

        for _ in range(100):
            n = int(rng.integers(4, 32))
            p1 = int(rng.integers(2, 7))
            p2 = int(rng.integers(1, 4))
            rx = np.abs(rng.standard_normal((n, p1, p2)))
            lx, theta, _ = reduce_pca(rx)
            for j in range(p2):
                slab = rx[:, :, j]
                centred = slab - slab.mean(axis=0)
                cov = centred.T @ centred / n
                top_val, top_vec = power_iteration_top(cov)
                assert abs(theta[j] - top_val / np.trace(cov)) <= 1e-9
                expect = slab @ top_vec
                err = min(
                    np.max(np.abs(lx[:, j] - expect)),
                    np.max(np.abs(lx[:, j] + expect)),
                )
                assert err <= 1e-8 * max(1.0, float(np.max(np.abs(expect))))
        elapsed = time.perf_counter() - start
        _verdict(8, elapsed < 30.0, f"100 tensors match power iteration, {elapsed:.1f}s")

    def test_09_synthetic_detection_end_to_end(self, tmp_path):
        start = time.perf_counter()
        sig = tmp_path / "burst5.csv"
        assert cli_main([
            "synth", "burst", "--out", str(sig), "--seed", "42",
            "--param", "n=131072", "--param", "count=5",
            "--param", "amplitude_mad=5", "--param", "alpha=1",
            "--param", "width=6", "--param", "freq=0.12", "--quiet",
        ]) == 0
        cfg = tmp_path / "run.cfg"
        from scatdetect.config import save_config

        save_config(PipelineConfig(j1=2, q1=4, j2=6, q2=2), cfg)
        out = tmp_path / "out"
        assert cli_main([
            "detect", str(sig), "--out", str(out), "--config", str(cfg), "--quiet",
        ]) == 0
        result = sigio.read_json(out / "burst" / "detection.json")
        truth = sigio.read_json(tmp_path / "burst5.truth.json")
        events = truth["events"]
        intervals = result["intervals"]
        assert len(events) == 5
        assert len(intervals) == 5
        for interval in intervals:  # no spurious detection
            assert any(
                interval["start"] <= ev["end"] and ev["start"] <= interval["end"]
                for ev in events
            )
        for ev in events:  # no missed burst
            assert any(
                interval["start"] <= ev["end"] and ev["start"] <= interval["end"]
                for interval in intervals
            )
        elapsed = time.perf_counter() - start
        _verdict(9, elapsed < 60.0,
                 f"burst5: 5/5 intervals matched, none spurious, {elapsed:.1f}s")

    def test_10_window_causality(self):
        start = time.perf_counter()
        rng = np.random.default_rng(10)
        n = 2048
        x = rng.standard_normal(n)
        config = PipelineConfig(j1=1, q1=2, j2=1, q2=2, window_len=256, hop=128)
        plan = plan_windows(n, 256, 128)
        base = theta_trajectory(x, plan, config)
        for _ in range(10):
            w = int(rng.integers(0, plan.count))
            boundary = int(plan.starts[w]) + plan.window_len
            perturbed = x.copy()
            if boundary < n:
                perturbed[boundary:] += 10.0 * rng.standard_normal(n - boundary)
            rows = theta_trajectory(perturbed, plan, config)
            assert np.array_equal(rows[w], base[w])
        elapsed = time.perf_counter() - start
        _verdict(10, elapsed < 60.0, f"10 perturbations left earlier rows bit-identical, {elapsed:.1f}s")

    def test_11_determinism(self, tmp_path):
        start = time.perf_counter()
        sig = tmp_path / "sig.csv"
        assert cli_main([
            "synth", "burst", "--out", str(sig), "--seed", "11",
            "--param", "n=4096", "--param", "count=2", "--quiet",
        ]) == 0
        cfg = tmp_path / "run.cfg"
        from scatdetect.config import save_config

        save_config(PipelineConfig(j1=1, q1=3, j2=2, q2=2, seed=7), cfg)
        trees = []
        for name in ("one", "two"):
            out = tmp_path / name
            assert cli_main([
                "analyze", str(sig), "--out", str(out), "--config", str(cfg), "--quiet",
            ]) == 0
            tree = {}
            for root, _, files in os.walk(out):
                for fname in files:
                    full = os.path.join(root, fname)
                    tree[os.path.relpath(full, out)] = sigio.sha256_file(full)
            trees.append(tree)
        assert trees[0] == trees[1] and len(trees[0]) > 0
        elapsed = time.perf_counter() - start
        _verdict(11, elapsed < 60.0,
                 f"two analyze runs byte-identical ({len(trees[0])} artifacts), {elapsed:.1f}s")

"""Built-in verification suite behind the ``selfcheck`` CLI command.

Small, self-contained re-derivations of the package's core contracts:
every check compares a library routine against an independent oracle
(direct DFT sums, full sorts, explicit reconstruction) on seeded inputs.
"""

from __future__ import annotations

import numpy as np

from . import backend, numerics
from .config import PipelineConfig
from .detection import feature_length
from .filterbank import build_filterbank, build_scale_set
from .pipeline import analyze_signal
from .representation import check_permutation_invariance, rho
from .scattering import wavelet_modulus


def _direct_dft(x):
    n = x.shape[0]
    k = np.arange(n)
    return np.array([np.sum(x * np.exp(-2j * np.pi * kk * k / n)) for kk in range(n)])


def _check_fft():
    rng = np.random.default_rng(2024)
    for n in (1, 2, 13, 64, 96):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ours = numerics.fft(x)
        ref = _direct_dft(x)
        scale = max(1.0, float(np.max(np.abs(ref))))
        if np.max(np.abs(ours - ref)) / scale > 1e-10:
            return False, f"fft mismatch at n={n}"
        back = numerics.ifft(ours)
        if np.max(np.abs(back - x)) > 1e-10 * max(1.0, float(np.max(np.abs(x)))):
            return False, f"round trip failed at n={n}"
    return True, "matches direct DFT, round trips"


def _check_convolution():
    rng = np.random.default_rng(7)
    a = rng.standard_normal(37)
    b = rng.standard_normal(21)
    direct = np.array([
        sum(a[j] * b[i - j] for j in range(max(0, i - 20), min(37, i + 1)))
        for i in range(57)
    ])
    ours = numerics.fft_convolve(a, b)
    ok = np.max(np.abs(ours - direct)) <= 1e-9 * max(1.0, float(np.max(np.abs(direct))))
    return ok, "linear convolution matches direct sum"


def _check_median():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 200))
        x = rng.standard_normal(n)
        expect = float(np.sort(x)[(n - 1) // 2])
        if numerics.quickselect_median(x) != expect:
            return False, f"median mismatch at n={n}"
    return True, "selection equals sort-based oracle"

def _check_eigh():
    rng = np.random.default_rng(23)
    for _ in range(20):
        n = int(rng.integers(1, 21))
        c = rng.standard_normal((n, n))
        c = (c + c.T) / 2
        res = numerics.eigh(c)
        v, w = res.eigenvectors, res.eigenvalues
        recon = np.max(np.abs(c - v @ np.diag(w) @ v.T))
        ortho = np.max(np.abs(v.T @ v - np.eye(n)))
        if recon > 1e-10 * max(1.0, float(np.max(np.abs(c)))) or ortho > 1e-10:
            return False, f"eigh residual too large at n={n}"
    return True, "reconstruction and orthonormality within 1e-10"


def _check_rho():
    got = rho(np.array([0.0, 1.0, 3.0]), 1.0, 2.0)
    if not np.array_equal(got, [0.0, 0.0, 3.0]):
        return False, "threshold arithmetic broken"
    if np.any(rho(np.array([1.0, 1.0]), 1.0, 2.0)):
        return False, "all-at-threshold should collapse to zero"
    return True, "threshold nonlinearity arithmetic"


def _check_admissibility():
    bank = build_filterbank(256, build_scale_set(2, 4))
    if np.any(bank.psi_hat[:, 0] != 0.0):
        return False, "band-pass filters leak at DC"
    if bank.phi_hat[0] != 1.0:
        return False, "low-pass DC gain is not 1"
    x = np.full(256, 3.7)
    if np.max(wavelet_modulus(x, bank)) > 1e-9 * 3.7:
        return False, "constant signal leaks through band-pass filters"
    return True, "DC gains and constant rejection"


def _check_invariance():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(512)
    bank1 = build_filterbank(512, build_scale_set(2, 3))
    bank2 = build_filterbank(512, build_scale_set(2, 3))
    perm = rng.permutation(6)
    pooled = check_permutation_invariance(x, perm, bank1, bank2, reducer="maxpool")
    if not pooled.bit_identical:
        return False, "max-pool reduction changed under band permutation"
    pca = check_permutation_invariance(x, perm, bank1, bank2, reducer="pca")
    if pca.max_theta_discrepancy > 1e-10:
        return False, "variance fractions changed under band permutation"
    return True, "band-permutation invariance (both reducers)"


def _check_feature_dims():
    config = PipelineConfig(j1=1, q1=2, j2=1, q2=2, frame_len=4)
    rng = np.random.default_rng(3)
    coeffs, rep = analyze_signal(rng.standard_normal(128), config)
    from .detection import assemble_features

    vec = assemble_features(coeffs, rep, 10)
    expect = feature_length(1, 2, 1, 2, "pca")
    ok = vec.shape[0] == expect == 1 + 2 + 2 * 2 * 2 + 2 + 2
    return ok, f"feature vector length {vec.shape[0]}"


def _check_backend_parity():
    try:
        from . import _core  # noqa: F401
    except ImportError:
        return True, "compiled core absent; nothing to compare"
    from . import _kernels_py

    rng = np.random.default_rng(17)
    x = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    rev, tw, _ = numerics._plan(256)
    a_c = np.ascontiguousarray(x)
    a_p = np.ascontiguousarray(x)
    _core.fft_pow2(a_c, rev, tw)
    _kernels_py.fft_pow2(a_p, rev, tw)
    if np.max(np.abs(a_c - a_p)) > 1e-12 * float(np.max(np.abs(a_c))):
        return False, "fft backends disagree"
    data = rng.standard_normal(999)
    if _core.select_kth(data.copy(), 499) != _kernels_py.select_kth(data.copy(), 499):
        return False, "selection backends disagree"
    return True, "compiled and python kernels agree"


CHECKS = [
    ("fft-vs-direct-dft", _check_fft),
    ("linear-convolution", _check_convolution),
    ("median-selection", _check_median),
    ("jacobi-eigensolver", _check_eigh),
    ("threshold-nonlinearity", _check_rho),
    ("filterbank-admissibility", _check_admissibility),
    ("band-permutation-invariance", _check_invariance),
    ("feature-dimensions", _check_feature_dims),
    ("backend-parity", _check_backend_parity),
]


def run_selfcheck(quiet: bool = False) -> bool:
    """Run every check; prints a table unless quiet.  True when all pass."""
    all_ok = True
    width = max(len(name) for name, _ in CHECKS)
    for name, func in CHECKS:
        try:
            ok, detail = func()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok &= ok
        if not quiet:
            print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    if not quiet:
        print(f"backend: {backend.name()}")
    return all_ok

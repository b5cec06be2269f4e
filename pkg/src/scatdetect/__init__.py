"""Scattering-based sparse representation and transient detection for 1-D signals."""

__version__ = "0.1.0"

from .config import PipelineConfig
from .filterbank import FilterBank, ScaleSet, build_filterbank, build_scale_set
from .numerics import SymmetricEigenResult, eigh, fft, fft_convolve, ifft, quickselect_median
from .pipeline import analyze_signal, detect_signal, monitor_signal
from .scattering import ScatteringCoeffs, scattering_transform, smooth, wavelet_modulus

__all__ = [
    "FilterBank",
    "PipelineConfig",
    "ScaleSet",
    "ScatteringCoeffs",
    "SymmetricEigenResult",
    "analyze_signal",
    "build_filterbank",
    "build_scale_set",
    "detect_signal",
    "eigh",
    "fft",
    "fft_convolve",
    "ifft",
    "monitor_signal",
    "quickselect_median",
    "scattering_transform",
    "smooth",
    "wavelet_modulus",
]

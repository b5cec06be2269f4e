"""Kernel backend selection.

The hot numeric loops (power-of-two FFT passes, order-statistic selection,
Jacobi rotation sweeps) exist twice: as a compiled Cython extension
(``scatdetect._core``) and as a numpy implementation (``scatdetect._kernels_py``).
The compiled core is picked at import time when available; set
``SCATDETECT_BACKEND=python`` or ``=compiled`` to force a choice.

Both backends implement the same algorithms step for step, so results agree
to rounding error and every contract in :mod:`scatdetect.numerics` holds on
either one.
"""

import os

from . import _kernels_py

_active = None
_name = None


def _resolve():
    global _active, _name
    forced = os.environ.get("SCATDETECT_BACKEND", "auto").strip().lower()
    if forced in ("python", "pure", "fallback"):
        _active, _name = _kernels_py, "python"
        return
    try:
        from . import _core
    except ImportError:
        if forced in ("compiled", "c", "cython"):
            raise ImportError(
                "SCATDETECT_BACKEND=compiled but scatdetect._core is not built; "
                "reinstall with the Cython extension or unset the variable"
            )
        _active, _name = _kernels_py, "python"
    else:
        _active, _name = _core, "compiled"


_resolve()


def active():
    """Module implementing the kernel API (fft_pow2, select_kth, jacobi_eigh)."""
    return _active


def name():
    """Either ``"compiled"`` or ``"python"``."""
    return _name


def use(backend):
    """Swap the active backend; returns the previous name.

    Intended for tests and benchmarks; normal code relies on import-time
    selection.
    """
    global _active, _name
    previous = _name
    if backend == "python":
        _active, _name = _kernels_py, "python"
    elif backend == "compiled":
        from . import _core

        _active, _name = _core, "compiled"
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return previous

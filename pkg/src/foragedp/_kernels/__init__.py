"""Simulation kernel selection.

The compiled kernel is used when importable; set ``FORAGEDP_KERNEL=python``
(or ``cython``) to pin one explicitly. Record-mode simulation always runs in
the pure-Python kernel, which is the reference implementation.
"""
from __future__ import annotations

import os

from . import _python


def available_kernels() -> dict:
    kernels = {"python": _python}
    try:
        from . import _simcore

        kernels["cython"] = _simcore
    except ImportError:
        pass
    return kernels


def _select():
    kernels = available_kernels()
    requested = os.environ.get("FORAGEDP_KERNEL", "").strip().lower()
    if requested:
        if requested not in kernels:
            raise ImportError(f"FORAGEDP_KERNEL={requested!r} is not available; have {sorted(kernels)}")
        return kernels[requested]
    return kernels.get("cython", _python)


_impl = _select()

KERNEL_NAME = _impl.KERNEL_NAME
run_summaries = _impl.run_summaries
run_alignment = _impl.run_alignment
simulate_one = _python._simulate_one
align_one = _python._align_one

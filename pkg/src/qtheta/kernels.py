"""Backend selection for the summation kernels.

The compiled module is used when it imports; ``QTHETA_BACKEND=python`` forces
the pure-Python twins and ``QTHETA_BACKEND=c`` makes a missing extension an
error instead of a silent fallback.
"""
from __future__ import annotations

import os

from . import _pykernels


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ("c", "python" or None for auto)."""
    name = (name or "").lower()
    if name in ("python", "py"):
        return _pykernels
    try:
        from . import _ckernels
    except ImportError:
        if name == "c":
            raise
        return _pykernels
    return _ckernels


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
        names.insert(0, "c")
    except ImportError:
        pass
    return names


_impl = get_backend(os.environ.get("QTHETA_BACKEND"))
BACKEND = "python" if _impl is _pykernels else "c"

qpoch_product = _impl.qpoch_product
hyper_sum = _impl.hyper_sum
gauss_sum = _impl.gauss_sum
frac_scan = _impl.frac_scan

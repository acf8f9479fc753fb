"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy/pure-Python ``_pykernels`` module.  Setting ``SDC_PURE_PYTHON=1``
forces the fallback.  ``SDC_THREADS`` caps the threads used by the
all-pairs BFS (0 or unset means one per CPU).
"""
from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("SDC_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python backend requested")
    from . import _kernels as _impl
except ImportError:
    _impl = _pykernels

BACKEND: str = _impl.BACKEND

bfs = _impl.bfs
eccentricities = _impl.eccentricities
laplacian_apply = _impl.laplacian_apply
jacobi = _impl.jacobi
tql_last = _impl.tql_last


def thread_count() -> int:
    raw = os.environ.get("SDC_THREADS", "0").strip() or "0"
    requested = int(raw)
    if requested < 0:
        raise ValueError(f"SDC_THREADS must be >= 0, got {requested}")
    return requested or (os.cpu_count() or 1)


def get_backend(name: str):
    """Return the kernel module named ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")

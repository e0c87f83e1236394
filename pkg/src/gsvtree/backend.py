"""Backend selection for the hot kernels.

Set ``GSVTREE_BACKEND=python`` (or ``numpy``) before import to skip JIT
compilation and run the same kernel code as plain Python over numpy
arrays.  Default is ``numba`` when numba imports cleanly.  The choice is
fixed at import time so the jitted functions can call each other.
"""

from __future__ import annotations

import os

_requested = os.environ.get("GSVTREE_BACKEND", "").strip().lower()
if _requested in ("python", "numpy"):
    _BACKEND = "python"
elif _requested in ("", "numba"):
    try:
        import numba  # noqa: F401
        _BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise ImportError(
                "GSVTREE_BACKEND=numba but numba is not importable"
            ) from None
        _BACKEND = "python"
else:
    raise ValueError(
        f"GSVTREE_BACKEND={_requested!r}: expected 'numba' or 'python'"
    )


def active_backend() -> str:
    """Name of the kernel backend chosen at import: 'numba' or 'python'."""
    return _BACKEND


def jit(func):
    """Apply @njit under the numba backend, return the function unchanged otherwise."""
    if _BACKEND == "numba":
        from numba import njit
        return njit(cache=True, nogil=True)(func)
    return func

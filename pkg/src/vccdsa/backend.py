"""Kernel backend selection.

The VCCDSA_BACKEND environment variable picks the implementation of the
hot kernels:

* ``numba`` — @njit kernels everywhere.
* ``numpy`` — pure-numpy fallbacks everywhere.
* ``auto`` (default) — per-kernel choice: convolution stays on the
  BLAS-backed im2col path (it beats naive loops at these channel
  counts), warping and the translation search use numba.

``set_backend`` overrides the environment at runtime (used by tests and
the benchmark).
"""

from __future__ import annotations

import os

_VALID = ("auto", "numba", "numpy")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

_backend = os.environ.get("VCCDSA_BACKEND", "auto").lower()
if _backend not in _VALID:
    raise ValueError(f"VCCDSA_BACKEND must be one of {_VALID}, got {_backend!r}")
if not HAS_NUMBA:  # pragma: no cover
    _backend = "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name in ("numba", "auto") and not HAS_NUMBA:  # pragma: no cover
        raise RuntimeError("numba is not available")
    _backend = name


def resolve(kernel: str) -> str:
    """Map a kernel name to 'numba' or 'numpy' under the current backend."""
    if _backend != "auto":
        return _backend
    # measured defaults: BLAS wins for conv, loops win for gather/search
    return "numpy" if kernel.startswith("conv") else "numba"

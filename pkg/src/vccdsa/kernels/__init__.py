"""Hot numeric kernels with numba and pure-numpy implementations."""

from __future__ import annotations

import numpy as np

from .. import backend
from . import _numpy

if backend.HAS_NUMBA:
    from . import _numba
else:  # pragma: no cover
    _numba = None


def _impl(kernel: str):
    return _numba if backend.resolve(kernel) == "numba" else _numpy


def warp_bilinear(src: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    return _impl("warp_bilinear").warp_bilinear(src, ys, xs)


def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1,
                   return_cache: bool = False):
    """NHWC 'same' convolution; weights (O, C, k, k)."""
    return _impl("conv2d_forward").conv2d_forward(x, w, b, stride, return_cache)


def conv2d_backward(x: np.ndarray, w: np.ndarray, grad_y: np.ndarray, stride: int = 1,
                    cache=None, need_gx: bool = True):
    return _impl("conv2d_backward").conv2d_backward(x, w, grad_y, stride, cache, need_gx)


def shift_replicate(img: np.ndarray, dy: int, dx: int) -> np.ndarray:
    return _impl("shift_replicate").shift_replicate(img, dy, dx)


def sad_search(live: np.ndarray, mask: np.ndarray, radius: int, step: int = 1) -> np.ndarray:
    return _impl("sad_search").sad_search(live, mask, radius, step)

"""Pure-numpy implementations of the hot kernels.

Convolution goes through im2col + BLAS matmul; warping and the
translation search are vectorized gather/shift operations.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def warp_bilinear(src: np.ndarray, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Sample `src` at float coordinates (ys, xs) with bilinear interpolation.

    Out-of-bounds coordinates are clamped to the edge (edge replication).
    """
    h, w = src.shape
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = ys - y0
    fx = xs - x0
    top = src[y0, x0] * (1.0 - fx) + src[y0, x1] * fx
    bot = src[y1, x0] * (1.0 - fx) + src[y1, x1] * fx
    return top * (1.0 - fy) + bot * fy


def _im2col(x: np.ndarray, k: int, stride: int) -> np.ndarray:
    """(N, H, W, C) -> (N*Ho*Wo, C*k*k) patch matrix, zero-padded 'same'."""
    n, h, w, c = x.shape
    p = k // 2
    xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))
    win = sliding_window_view(xp, (k, k), axis=(1, 2))[:, ::stride, ::stride]
    # win: (N, Ho, Wo, C, k, k)
    ho, wo = win.shape[1], win.shape[2]
    return win.reshape(n * ho * wo, c * k * k)


def conv2d_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int,
                   return_cache: bool = False):
    """NHWC convolution; weights are (O, C, k, k), output (N, Ho, Wo, O)."""
    n, h, wd, c = x.shape
    o, _, k, _ = w.shape
    ho = (h + 2 * (k // 2) - k) // stride + 1
    wo = (wd + 2 * (k // 2) - k) // stride + 1
    cols = _im2col(x, k, stride)
    out = (cols @ w.reshape(o, -1).T + b).reshape(n, ho, wo, o)
    if return_cache:
        return out, cols
    return out


def conv2d_backward(
    x: np.ndarray, w: np.ndarray, grad_y: np.ndarray, stride: int,
    cache: np.ndarray | None = None, need_gx: bool = True,
):
    n, h, wd, c = x.shape
    o, _, k, _ = w.shape
    _, ho, wo, _ = grad_y.shape
    p = k // 2

    gy = grad_y.reshape(n * ho * wo, o)
    cols = cache if cache is not None else _im2col(x, k, stride)
    gw = (gy.T @ cols).reshape(o, c, k, k)
    gb = gy.sum(axis=0)
    if not need_gx:
        return None, gw, gb

    gcols = (gy @ w.reshape(o, -1)).reshape(n, ho, wo, c, k, k)
    gxp = np.zeros((n, h + 2 * p, wd + 2 * p, c), dtype=x.dtype)
    # scatter-add per kernel tap: slicing keeps this vectorized
    for i in range(k):
        for j in range(k):
            gxp[:, i : i + stride * ho : stride, j : j + stride * wo : stride, :] += (
                gcols[:, :, :, :, i, j]
            )
    gx = gxp[:, p : p + h, p : p + wd, :]
    return gx, gw, gb


def shift_replicate(img: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """Integer shift with edge replication: out[y, x] = img[y - dy, x - dx]."""
    h, w = img.shape
    ys = np.clip(np.arange(h) - dy, 0, h - 1)
    xs = np.clip(np.arange(w) - dx, 0, w - 1)
    return img[np.ix_(ys, xs)]


def sad_search(live: np.ndarray, mask: np.ndarray, radius: int, step: int) -> np.ndarray:
    """Mean-absolute-residual objective over all integer offsets in the search box.

    Returns an array of shape (n_offsets, 3): rows (dy, dx, objective) in
    lexicographic (dy, dx) order.
    """
    offsets = [(dy, dx) for dy in range(-radius, radius + 1, step)
               for dx in range(-radius, radius + 1, step)]
    out = np.empty((len(offsets), 3), dtype=np.float64)
    for i, (dy, dx) in enumerate(offsets):
        res = np.abs(live - shift_replicate(mask, dy, dx))
        out[i] = (dy, dx, res.mean())
    return out

"""Numba @njit implementations of the hot kernels.

Same contracts as `vccdsa.kernels._numpy`; selected via the
VCCDSA_BACKEND environment flag (see `vccdsa.backend`).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True, parallel=True)
def warp_bilinear(src, ys, xs):
    h, w = src.shape
    ho, wo = ys.shape
    out = np.empty((ho, wo), dtype=src.dtype)
    for i in prange(ho):
        for j in range(wo):
            y = min(max(ys[i, j], 0.0), h - 1.0)
            x = min(max(xs[i, j], 0.0), w - 1.0)
            y0 = int(np.floor(y))
            x0 = int(np.floor(x))
            y1 = min(y0 + 1, h - 1)
            x1 = min(x0 + 1, w - 1)
            fy = y - y0
            fx = x - x0
            top = src[y0, x0] * (1.0 - fx) + src[y0, x1] * fx
            bot = src[y1, x0] * (1.0 - fx) + src[y1, x1] * fx
            out[i, j] = top * (1.0 - fy) + bot * fy
    return out


@njit(cache=True, parallel=True)
def _conv2d_forward(x, w, b, stride):
    n, h, wd, c = x.shape
    o, _, k, _ = w.shape
    p = k // 2
    ho = (h + 2 * p - k) // stride + 1
    wo = (wd + 2 * p - k) // stride + 1
    out = np.empty((n, ho, wo, o), dtype=x.dtype)
    for ni in prange(n):
        for yi in range(ho):
            ys0 = yi * stride - p
            for xi in range(wo):
                xs0 = xi * stride - p
                for oi in range(o):
                    out[ni, yi, xi, oi] = b[oi]
                for ky in range(k):
                    sy = ys0 + ky
                    if sy < 0 or sy >= h:
                        continue
                    for kx in range(k):
                        sx = xs0 + kx
                        if sx < 0 or sx >= wd:
                            continue
                        for oi in range(o):
                            acc = 0.0
                            for ci in range(c):
                                acc += x[ni, sy, sx, ci] * w[oi, ci, ky, kx]
                            out[ni, yi, xi, oi] += acc
    return out


def conv2d_forward(x, w, b, stride, return_cache=False):
    out = _conv2d_forward(x, w, b, stride)
    if return_cache:
        return out, None
    return out


@njit(cache=True, parallel=True)
def _conv2d_backward(x, w, grad_y, stride, need_gx):
    n, h, wd, c = x.shape
    o, _, k, _ = w.shape
    _, ho, wo, _ = grad_y.shape
    p = k // 2

    gx = np.zeros((n, h, wd, c), dtype=x.dtype)
    gw = np.zeros((o, c, k, k), dtype=x.dtype)
    gb = np.zeros(o, dtype=x.dtype)

    for ni in range(n):
        for yi in range(ho):
            for xi in range(wo):
                for oi in range(o):
                    gb[oi] += grad_y[ni, yi, xi, oi]

    for oi in prange(o):
        for ky in range(k):
            for kx in range(k):
                for ni in range(n):
                    for yi in range(ho):
                        sy = yi * stride - p + ky
                        if sy < 0 or sy >= h:
                            continue
                        for xi in range(wo):
                            sx = xi * stride - p + kx
                            if sx < 0 or sx >= wd:
                                continue
                            g = grad_y[ni, yi, xi, oi]
                            for ci in range(c):
                                gw[oi, ci, ky, kx] += g * x[ni, sy, sx, ci]

    if need_gx:
        for ni in prange(n):
            for yi in range(ho):
                for xi in range(wo):
                    for oi in range(o):
                        g = grad_y[ni, yi, xi, oi]
                        for ky in range(k):
                            sy = yi * stride - p + ky
                            if sy < 0 or sy >= h:
                                continue
                            for kx in range(k):
                                sx = xi * stride - p + kx
                                if sx < 0 or sx >= wd:
                                    continue
                                for ci in range(c):
                                    gx[ni, sy, sx, ci] += g * w[oi, ci, ky, kx]
    return gx, gw, gb


def conv2d_backward(x, w, grad_y, stride, cache=None, need_gx=True):
    gx, gw, gb = _conv2d_backward(x, w, grad_y, stride, need_gx)
    return (gx if need_gx else None), gw, gb


@njit(cache=True)
def _shift_replicate(img, dy, dx):
    h, w = img.shape
    out = np.empty_like(img)
    for y in range(h):
        sy = min(max(y - dy, 0), h - 1)
        for x in range(w):
            sx = min(max(x - dx, 0), w - 1)
            out[y, x] = img[sy, sx]
    return out


def shift_replicate(img, dy, dx):
    return _shift_replicate(img, int(dy), int(dx))


@njit(cache=True, parallel=True)
def sad_search(live, mask, radius, step):
    n_side = len(range(-radius, radius + 1, step))
    out = np.empty((n_side * n_side, 3), dtype=np.float64)
    h, w = live.shape
    for a in prange(n_side):
        dy = -radius + a * step
        for bi in range(n_side):
            dx = -radius + bi * step
            s = 0.0
            for y in range(h):
                sy = min(max(y - dy, 0), h - 1)
                for x in range(w):
                    sx = min(max(x - dx, 0), w - 1)
                    s += abs(live[y, x] - mask[sy, sx])
            idx = a * n_side + bi
            out[idx, 0] = dy
            out[idx, 1] = dx
            out[idx, 2] = s / (h * w)
    return out

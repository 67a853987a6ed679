"""Image quality metrics: windowed SSIM (reported in %) and PSNR (dB)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .image import check_frame, check_same_shape

PSNR_CAP_DB = 100.0


@dataclass(frozen=True)
class SsimParams:
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0
    window_size: int = 11
    sigma: float = 1.5

    def __post_init__(self):
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be positive")
        if self.window_size % 2 == 0:
            raise ValueError("window size must be odd")


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    ax = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-0.5 * (ax / sigma) ** 2)
    win = np.outer(g, g)
    return win / win.sum()


def ssim(x: np.ndarray, y: np.ndarray, params: SsimParams = SsimParams()) -> float:
    """Mean local structural similarity over all fully-interior windows, in %."""
    x = check_frame(x, "x").astype(np.float64)
    y = check_frame(y, "y").astype(np.float64)
    check_same_shape(x, y)
    k = params.window_size
    if x.shape[0] < k or x.shape[1] < k:
        raise ValueError(f"frames must be at least {k}x{k} for SSIM")
    win = _gaussian_window(k, params.sigma)
    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2

    wx = sliding_window_view(x, (k, k))
    wy = sliding_window_view(y, (k, k))
    mu_x = np.tensordot(wx, win, axes=([2, 3], [0, 1]))
    mu_y = np.tensordot(wy, win, axes=([2, 3], [0, 1]))
    ex2 = np.tensordot(wx * wx, win, axes=([2, 3], [0, 1]))
    ey2 = np.tensordot(wy * wy, win, axes=([2, 3], [0, 1]))
    exy = np.tensordot(wx * wy, win, axes=([2, 3], [0, 1]))
    var_x = ex2 - mu_x**2
    var_y = ey2 - mu_y**2
    cov = exy - mu_x * mu_y

    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x**2 + mu_y**2 + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den)) * 100.0


def psnr(x: np.ndarray, y: np.ndarray, max_val: float = 1.0) -> float:
    """20*log10(max_val) - 10*log10(MSE); exact match returns the 100 dB cap."""
    x = check_frame(x, "x").astype(np.float64)
    y = check_frame(y, "y").astype(np.float64)
    check_same_shape(x, y)
    if max_val <= 0:
        raise ValueError("max_val must be positive")
    mse = float(np.mean((x - y) ** 2))
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(20.0 * np.log10(max_val) - 10.0 * np.log10(mse), PSNR_CAP_DB)


def psnr_from_mse(mse: float, max_val: float = 1.0) -> float:
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(20.0 * np.log10(max_val) - 10.0 * np.log10(mse), PSNR_CAP_DB)

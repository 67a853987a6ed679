"""2D grayscale attenuation frames and their validity checks.

A frame is a plain float ndarray of shape (H, W) with values expected in
[0, 1] after any clipping operation.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def check_size(height: int, width: int) -> None:
    if height < 16 or width < 16 or height % 8 or width % 8:
        raise ConfigError(
            f"frame size must be >= 16 and divisible by 8, got {height}x{width}"
        )


def check_frame(frame: np.ndarray, name: str = "frame") -> np.ndarray:
    frame = np.asarray(frame)
    if frame.ndim != 2:
        raise ValueError(f"{name} must be 2D, got shape {frame.shape}")
    if not np.all(np.isfinite(frame)):
        raise ValueError(f"{name} contains non-finite values")
    return frame


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"frame shapes differ: {a.shape} vs {b.shape}")


def clip01(frame: np.ndarray) -> np.ndarray:
    return np.clip(frame, 0.0, 1.0)

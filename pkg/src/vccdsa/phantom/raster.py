"""Anti-aliased rasterization of tube-like structures (vessels, catheters)."""

from __future__ import annotations

import numpy as np


def bezier_points(p0, p1, p2, spacing: float = 0.75) -> np.ndarray:
    """Sample a quadratic Bezier curve at roughly `spacing`-pixel intervals."""
    p0, p1, p2 = (np.asarray(p, dtype=np.float64) for p in (p0, p1, p2))
    chord = np.linalg.norm(p2 - p0) + np.linalg.norm(p1 - p0) + np.linalg.norm(p2 - p1)
    n = max(int(chord / spacing), 8)
    t = np.linspace(0.0, 1.0, n)[:, None]
    return (1 - t) ** 2 * p0 + 2 * (1 - t) * t * p1 + t**2 * p2


def stamp_tube(
    canvas: np.ndarray,
    points: np.ndarray,
    radii: np.ndarray,
    peak: float,
    soft_edge: float = 0.7,
) -> None:
    """Accumulate a tapering tube into `canvas` in place (max-combine).

    The cross-section mimics a projected cylinder: peak attenuation at
    the centerline falling off as sqrt(1 - (d/r)^2), with a `soft_edge`
    pixel anti-aliasing band.
    """
    h, w = canvas.shape
    for (py, px), r in zip(points, radii):
        reach = r + soft_edge
        y0 = max(int(np.floor(py - reach)), 0)
        y1 = min(int(np.ceil(py + reach)) + 1, h)
        x0 = max(int(np.floor(px - reach)), 0)
        x1 = min(int(np.ceil(px + reach)) + 1, w)
        if y0 >= y1 or x0 >= x1:
            continue
        yy, xx = np.mgrid[y0:y1, x0:x1]
        d = np.hypot(yy - py, xx - px)
        core = np.sqrt(np.clip(1.0 - (d / max(r, 1e-6)) ** 2, 0.0, 1.0))
        fade = np.clip((reach - d) / soft_edge, 0.0, 1.0)
        patch = peak * np.maximum(core, 0.0) * fade
        np.maximum(canvas[y0:y1, x0:x1], patch, out=canvas[y0:y1, x0:x1])


def taper(radii_start: float, radii_end: float, n: int) -> np.ndarray:
    return np.linspace(radii_start, radii_end, n)

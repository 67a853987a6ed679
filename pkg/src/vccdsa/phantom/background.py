"""Structured backgrounds: smooth tissue, bone-like ellipses, tube distractors.

Tube distractors share the vessel rasterizer so their width and contrast
overlap the vessel distribution (catheters and oxygen tubes are the
classic confounders in subtraction imaging).
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from .config import PhantomConfig
from .raster import bezier_points, stamp_tube

TISSUE_BASE = 0.35


def _smooth_texture(size: int, cells: int, amp: float, rng) -> np.ndarray:
    """Low-frequency texture: bilinear-upsampled coarse uniform noise."""
    if amp == 0.0 or cells < 2:
        return np.zeros((size, size))
    coarse = rng.uniform(-1.0, 1.0, (cells, cells)) * amp
    gy = np.linspace(0.0, cells - 1.0, size)
    ys, xs = np.meshgrid(gy, gy, indexing="ij")
    return kernels.warp_bilinear(np.ascontiguousarray(coarse), ys, xs)


def _add_bone(canvas: np.ndarray, rng, softness: float) -> None:
    size = canvas.shape[0]
    cy, cx = rng.uniform(0.15, 0.85, 2) * size
    a = rng.uniform(0.10, 0.28) * size
    b = rng.uniform(0.08, 0.22) * size
    theta = rng.uniform(0.0, np.pi)
    strength = rng.uniform(0.25, 0.45)
    annulus = rng.random() < 0.5
    ring_frac = rng.uniform(0.25, 0.5)

    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    dy, dx = yy - cy, xx - cx
    u = np.cos(theta) * dx + np.sin(theta) * dy
    v = -np.sin(theta) * dx + np.cos(theta) * dy
    # signed distance proxy: radial overshoot in ellipse-normalized units
    q = np.hypot(u / a, v / b)
    scale = min(a, b)  # convert normalized units back to ~pixels
    edge = 1.0 / (1.0 + np.exp(np.clip((q - 1.0) * scale / softness, -40.0, 40.0)))
    if annulus:
        inner = 1.0 / (1.0 + np.exp(np.clip((q - (1.0 - ring_frac)) * scale / softness, -40.0, 40.0)))
        edge = edge - inner
    canvas += strength * edge


def _add_tube(canvas: np.ndarray, rng, cfg: PhantomConfig) -> None:
    size = cfg.size
    side = rng.integers(0, 2)
    if side == 0:
        p0 = np.array([rng.uniform(0, size), 0.0])
        p2 = np.array([rng.uniform(0, size), size - 1.0])
    else:
        p0 = np.array([0.0, rng.uniform(0, size)])
        p2 = np.array([size - 1.0, rng.uniform(0, size)])
    mid = 0.5 * (p0 + p2)
    perp = np.array([-(p2 - p0)[1], (p2 - p0)[0]])
    perp /= np.linalg.norm(perp) + 1e-12
    p1 = mid + perp * rng.uniform(-1.0, 1.0) * cfg.tube_curvature * size
    radius = rng.uniform(cfg.radius_frac[0], cfg.radius_frac[1]) * size
    radius = max(radius, 0.6)
    peak = rng.uniform(0.25, 0.5)  # overlaps the vessel contrast range
    pts = bezier_points(p0, p1, p2)
    tube = np.zeros_like(canvas)
    stamp_tube(tube, pts, np.full(len(pts), radius), peak)
    canvas += tube


def generate_background(config: PhantomConfig, seed: int) -> np.ndarray:
    """Tissue base + bone ellipses/annuli + optional tube distractors.

    Deterministic per (config, seed); values lie in [0, background_peak].
    """
    config.validate()
    rng = np.random.default_rng([seed, 0x4247])
    size = config.size
    canvas = np.full((size, size), TISSUE_BASE, dtype=np.float64)
    canvas += _smooth_texture(size, config.texture_scale, config.texture_amp, rng)
    for _ in range(config.bone_count):
        _add_bone(canvas, rng, config.edge_softness)
    for _ in range(config.tube_count):
        _add_tube(canvas, rng, config)
    return np.clip(canvas, 0.0, config.background_peak)

"""Random branching vessel trees rendered as anti-aliased attenuation maps."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .config import PhantomConfig
from .raster import bezier_points, stamp_tube


def _grow_branch(canvas, rng, p0, direction, radius, depth, cfg: PhantomConfig):
    size = cfg.size
    length = rng.uniform(0.25, 0.45) * size * (0.85**depth)
    direction = direction / (np.linalg.norm(direction) + 1e-12)
    p2 = p0 + direction * length
    perp = np.array([-direction[1], direction[0]])
    bend = rng.uniform(-1.0, 1.0) * cfg.tortuosity * length
    p1 = 0.5 * (p0 + p2) + perp * bend

    end_radius = radius * rng.uniform(0.55, 0.75)
    pts = bezier_points(p0, p1, p2)
    radii = np.linspace(radius, end_radius, len(pts))
    stamp_tube(canvas, pts, radii, cfg.vessel_peak)

    if depth + 1 >= cfg.branch_depth:
        return
    n_children = rng.integers(1, 3)
    for _ in range(n_children):
        angle = rng.uniform(0.3, 0.9) * rng.choice([-1.0, 1.0])
        c, s = np.cos(angle), np.sin(angle)
        child_dir = np.array(
            [c * direction[0] - s * direction[1], s * direction[0] + c * direction[1]]
        )
        _grow_branch(canvas, rng, p2, child_dir, end_radius, depth + 1, cfg)


def generate_vessel_tree(config: PhantomConfig, seed: int) -> np.ndarray:
    """Rasterize a random branching centerline tree with tapering radii.

    Deterministic per (config, seed); values lie in [0, vessel_peak].
    """
    config.validate()
    size = config.size
    canvas = np.zeros((size, size), dtype=np.float64)
    if config.branch_count == 0:
        return canvas
    rng = np.random.default_rng([seed, 0x5645])
    r_lo = max(config.radius_frac[0] * size, 0.5)
    r_hi = max(config.radius_frac[1] * size, r_lo)
    for _ in range(config.branch_count):
        # roots enter from a random border point heading inward
        side = rng.integers(0, 4)
        u = rng.uniform(0.1, 0.9) * size
        if side == 0:
            p0, direction = np.array([0.0, u]), np.array([1.0, rng.uniform(-0.5, 0.5)])
        elif side == 1:
            p0, direction = np.array([size - 1.0, u]), np.array([-1.0, rng.uniform(-0.5, 0.5)])
        elif side == 2:
            p0, direction = np.array([u, 0.0]), np.array([rng.uniform(-0.5, 0.5), 1.0])
        else:
            p0, direction = np.array([u, size - 1.0]), np.array([rng.uniform(-0.5, 0.5), -1.0])
        radius = rng.uniform(r_lo, r_hi)
        _grow_branch(canvas, rng, p0, direction, radius, 0, config)
    return np.clip(canvas, 0.0, config.vessel_peak)


def occupancy(vessel: np.ndarray, threshold: float = 0.01) -> float:
    """Fraction of pixels carrying vessel signal above `threshold`."""
    return float((vessel > threshold).mean())

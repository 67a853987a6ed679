"""Comparator methods: raw subtraction, integer translation-search
registration subtraction, and the live-only network ablation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .image import check_frame, check_same_shape
from .network.model import ArchConfig, Network, build_network
from .phantom.sequence import subtract


@dataclass(frozen=True)
class RegistrationConfig:
    search_radius: int = 8
    step: int = 1

    def __post_init__(self):
        if self.search_radius < 0:
            raise ConfigError("search_radius must be >= 0")
        if self.step < 1:
            raise ConfigError("step must be >= 1")


def live_only_build(arch: ArchConfig, seed: int) -> Network:
    """Same architecture with a 1-channel Head (live image only)."""
    solo = ArchConfig(**{**arch.to_dict(), "in_channels": 1})
    return build_network(solo, seed)


def best_translation(live: np.ndarray, mask: np.ndarray, cfg: RegistrationConfig) -> tuple[int, int, float]:
    """Exhaustive integer-offset search minimizing the mean absolute
    residual; ties broken by offset magnitude, then lexicographic (dy, dx)."""
    live = check_frame(live, "live")
    mask = check_frame(mask, "mask")
    check_same_shape(live, mask)
    table = kernels.sad_search(
        np.ascontiguousarray(live, dtype=np.float64),
        np.ascontiguousarray(mask, dtype=np.float64),
        cfg.search_radius,
        cfg.step,
    )
    # sort key: objective, then dy^2+dx^2, then (dy, dx); rows are already
    # lexicographic in (dy, dx) so a stable argsort keeps the tie-break fixed
    magnitude = table[:, 0] ** 2 + table[:, 1] ** 2
    keys = np.lexsort((table[:, 1], table[:, 0], magnitude, table[:, 2]))
    best = table[keys[0]]
    return int(best[0]), int(best[1]), float(best[2])


def translation_registration_subtract(
    live: np.ndarray, mask: np.ndarray, cfg: RegistrationConfig = RegistrationConfig()
) -> np.ndarray:
    """Pixel-shift style baseline: subtract the best integer-shifted mask."""
    dy, dx, _ = best_translation(live, mask, cfg)
    shifted = kernels.shift_replicate(np.ascontiguousarray(mask, dtype=np.float64), dy, dx)
    return subtract(live, shifted)

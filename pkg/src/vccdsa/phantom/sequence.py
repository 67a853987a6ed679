"""Synthetic exam sequences: masks, lives, ground truth, weak labels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..image import check_frame, check_same_shape, clip01
from .background import generate_background
from .config import PhantomConfig
from .motion import MotionField, sample_motion, warp
from .vessels import generate_vessel_tree


def compose_live(background: np.ndarray, vessel: np.ndarray, contrast_fraction: float) -> np.ndarray:
    """Attenuation-additive composition: clip(B + c * V, 0, 1)."""
    background = check_frame(background, "background")
    vessel = check_frame(vessel, "vessel")
    check_same_shape(background, vessel)
    if not 0.0 <= contrast_fraction <= 1.0:
        raise ValueError(f"contrast_fraction must be in [0,1], got {contrast_fraction}")
    return clip01(background + contrast_fraction * vessel)


def subtract(live: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Raw subtraction DSA: clip(live - mask, 0, 1)."""
    live = check_frame(live, "live")
    mask = check_frame(mask, "mask")
    check_same_shape(live, mask)
    return clip01(live - mask)


def contrast_ramp(live_frames: int, ramp_frames: int) -> np.ndarray:
    """Linear inflow 0 -> 1 over the ramp, then held at full contrast."""
    t = np.arange(1, live_frames + 1, dtype=np.float64)
    return np.minimum(t / ramp_frames, 1.0)


@dataclass
class DSASequence:
    config: PhantomConfig
    level: int
    seed: int
    masks: list[np.ndarray]
    mask_motions: list[MotionField]
    lives: list[np.ndarray]
    live_motions: list[MotionField]
    contrast: np.ndarray  # per-live-frame contrast fraction
    vessels_gt: list[np.ndarray]
    weak_labels: list[np.ndarray]
    background_canonical: np.ndarray | None = None  # not exported to disk
    vessel_canonical: np.ndarray | None = None
    sequence_id: str = field(default="")

    def __post_init__(self):
        if not (len(self.lives) == len(self.vessels_gt) == len(self.weak_labels)):
            raise ValueError("lives, vessels_gt and weak_labels must have equal length")
        if not self.sequence_id:
            self.sequence_id = f"seq-l{self.level}-s{self.seed}"

    @property
    def n_lives(self) -> int:
        return len(self.lives)

    @property
    def n_masks(self) -> int:
        return len(self.masks)


def make_sequence(config: PhantomConfig, level: int, seed: int) -> DSASequence:
    """Generate one exam: shared anatomy, per-frame motion at `level`.

    Every live frame shares the motion of its own acquisition instant
    between background and vessels (the patient moves as a whole); the
    weak label is the raw subtraction against the first mask and is
    deliberately artifact-bearing for level >= 1.
    """
    config.validate()
    rng = np.random.default_rng([seed, 0x5345])
    background = generate_background(config, seed)
    vessel = generate_vessel_tree(config, seed)

    def draw_motion() -> MotionField:
        return sample_motion(level, int(rng.integers(0, 2**31 - 1)))

    mask_motions = [draw_motion() for _ in range(config.mask_frames)]
    masks = [warp(background, m) for m in mask_motions]

    contrast = contrast_ramp(config.live_frames, config.ramp_frames)
    live_motions = [draw_motion() for _ in range(config.live_frames)]
    lives, vessels_gt, weak_labels = [], [], []
    for c_t, motion in zip(contrast, live_motions):
        moved_b = warp(background, motion)
        moved_v = warp(vessel, motion)
        live = compose_live(moved_b, moved_v, float(c_t))
        if config.noise_sigma > 0.0:
            live = clip01(live + rng.normal(0.0, config.noise_sigma, live.shape))
        lives.append(live)
        vessels_gt.append(float(c_t) * moved_v)
        weak_labels.append(subtract(live, masks[0]))

    return DSASequence(
        config=config,
        level=level,
        seed=seed,
        masks=masks,
        mask_motions=mask_motions,
        lives=lives,
        live_motions=live_motions,
        contrast=contrast,
        vessels_gt=vessels_gt,
        weak_labels=weak_labels,
        background_canonical=background,
        vessel_canonical=vessel,
    )

"""Joint geometric augmentation of one training sample.

One transform (flip, rotation, or translate-scale) plus one crop window
per sample, applied identically to both masks, the live frame, the weak
label, and the ground truth so that the subtraction relation survives
augmentation (up to interpolation and clipping).
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..phantom.motion import MotionField, warp
from .data import TrainSample

ROTATE_MAX_DEG = 10.0
TRANSLATE_MAX_FRAC = 0.05
SCALE_RANGE = (0.9, 1.1)


def _joint_transform(frames: list[np.ndarray], choice: str, rng) -> list[np.ndarray]:
    if choice == "flip":
        axis = int(rng.integers(0, 2))
        return [np.flip(f, axis=axis).copy() for f in frames]
    if choice == "rotate":
        motion = MotionField(level=1, rotation_deg=float(rng.uniform(-1, 1) * ROTATE_MAX_DEG))
        return [warp(f, motion) for f in frames]
    # translate-scale; translation is stored at the 256^2 reference scale
    from ..phantom.motion import REF_SIZE

    shift = rng.uniform(-1, 1, 2) * TRANSLATE_MAX_FRAC * REF_SIZE
    motion = MotionField(
        level=1,
        translation=(float(shift[0]), float(shift[1])),
        scale=(float(rng.uniform(*SCALE_RANGE)), float(rng.uniform(*SCALE_RANGE))),
    )
    return [warp(f, motion) for f in frames]


def augment(
    sample: TrainSample,
    gt: np.ndarray,
    rng: np.random.Generator,
    crop_size: int,
    flip: bool = True,
    rotate: bool = True,
    translate_scale: bool = True,
) -> tuple[TrainSample, np.ndarray]:
    frames = [sample.mask_i, sample.mask_j, sample.live, sample.weak_label, gt]
    h, w = frames[0].shape
    if h < crop_size or w < crop_size:
        raise DataError(f"frames {h}x{w} smaller than crop {crop_size}")

    enabled = [name for name, on in
               [("flip", flip), ("rotate", rotate), ("translate_scale", translate_scale)] if on]
    if enabled:
        choice = enabled[int(rng.integers(0, len(enabled)))]
        frames = _joint_transform(frames, choice, rng)
        y0 = int(rng.integers(0, h - crop_size + 1))
        x0 = int(rng.integers(0, w - crop_size + 1))
    else:
        y0 = (h - crop_size) // 2
        x0 = (w - crop_size) // 2
    frames = [f[y0 : y0 + crop_size, x0 : x0 + crop_size] for f in frames]

    out = TrainSample(
        mask_i=frames[0],
        mask_j=frames[1],
        live=frames[2],
        weak_label=frames[3],
        provenance=sample.provenance,
    )
    return out, frames[4]

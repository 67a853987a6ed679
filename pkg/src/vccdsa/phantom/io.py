"""Dataset export/import: 16-bit PNG frames plus a JSON manifest."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .config import PhantomConfig
from .motion import MotionField
from .sequence import DSASequence

FORMAT_VERSION = 1
_SCALE = 65535.0


def frame_to_png(frame: np.ndarray, path: Path) -> None:
    data = np.round(np.clip(frame, 0.0, 1.0) * _SCALE).astype(np.uint16)
    Image.fromarray(data).save(path)


def png_to_frame(path: Path) -> np.ndarray:
    data = np.asarray(Image.open(path), dtype=np.float64)
    return data / _SCALE


def save_sequence(seq: DSASequence, out_dir: str | Path) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for k, frame in enumerate(seq.masks):
        frame_to_png(frame, out_dir / f"mask_{k:04d}.png")
    for t in range(seq.n_lives):
        frame_to_png(seq.lives[t], out_dir / f"live_{t:04d}.png")
        frame_to_png(seq.vessels_gt[t], out_dir / f"gt_{t:04d}.png")
        frame_to_png(seq.weak_labels[t], out_dir / f"label_{t:04d}.png")
    manifest = {
        "format_version": FORMAT_VERSION,
        "sequence_id": seq.sequence_id,
        "config": seq.config.to_dict(),
        "level": seq.level,
        "seed": seq.seed,
        "contrast": seq.contrast.tolist(),
        "mask_motions": [m.to_dict() for m in seq.mask_motions],
        "live_motions": [m.to_dict() for m in seq.live_motions],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return out_dir


def load_sequence(seq_dir: str | Path) -> DSASequence:
    seq_dir = Path(seq_dir)
    manifest = json.loads((seq_dir / "manifest.json").read_text())
    if manifest["format_version"] != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {manifest['format_version']}")
    config = PhantomConfig.from_dict(manifest["config"])
    mask_motions = [MotionField.from_dict(d) for d in manifest["mask_motions"]]
    live_motions = [MotionField.from_dict(d) for d in manifest["live_motions"]]
    masks = [png_to_frame(seq_dir / f"mask_{k:04d}.png") for k in range(len(mask_motions))]
    n_lives = len(live_motions)
    lives = [png_to_frame(seq_dir / f"live_{t:04d}.png") for t in range(n_lives)]
    gts = [png_to_frame(seq_dir / f"gt_{t:04d}.png") for t in range(n_lives)]
    labels = [png_to_frame(seq_dir / f"label_{t:04d}.png") for t in range(n_lives)]
    seq = DSASequence(
        config=config,
        level=manifest["level"],
        seed=manifest["seed"],
        masks=masks,
        mask_motions=mask_motions,
        lives=lives,
        live_motions=live_motions,
        contrast=np.asarray(manifest["contrast"], dtype=np.float64),
        vessels_gt=gts,
        weak_labels=labels,
        sequence_id=manifest["sequence_id"],
    )
    return seq

"""Phantom generation configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..errors import ConfigError
from ..image import check_size


@dataclass
class PhantomConfig:
    size: int = 64
    # vessel tree
    branch_count: int = 4
    branch_depth: int = 3
    radius_frac: tuple[float, float] = (0.004, 0.014)  # of frame size
    tortuosity: float = 0.25
    vessel_peak: float = 0.5
    # background
    bone_count: int = 3
    texture_amp: float = 0.12
    texture_scale: int = 6  # coarse-noise grid cells per side
    edge_softness: float = 0.8  # px, bone edge transition width
    tube_count: int = 2
    tube_curvature: float = 0.35
    background_peak: float = 0.9
    # sequence
    ramp_frames: int = 3
    mask_frames: int = 4
    live_frames: int = 6
    noise_sigma: float = 0.0
    seed: int = 0

    def validate(self) -> "PhantomConfig":
        check_size(self.size, self.size)
        if self.branch_count < 0 or self.bone_count < 0 or self.tube_count < 0:
            raise ConfigError("structure counts must be >= 0")
        if self.mask_frames < 2:
            raise ConfigError("mask_frames must be >= 2 (consistency sampling needs two masks)")
        if self.live_frames < 1 or self.ramp_frames < 1:
            raise ConfigError("live_frames and ramp_frames must be >= 1")
        if not 0.0 < self.vessel_peak <= 0.5:
            raise ConfigError("vessel_peak must lie in (0, 0.5]")
        if not 0.0 < self.background_peak <= 0.9:
            raise ConfigError("background_peak must lie in (0, 0.9]")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["radius_frac"] = list(self.radius_frac)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PhantomConfig":
        d = dict(d)
        if "radius_frac" in d:
            d["radius_frac"] = tuple(d["radius_frac"])
        return cls(**d)

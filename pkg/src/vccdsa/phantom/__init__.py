"""Synthetic DSA phantom: anatomy, motion, sequence assembly, disk format."""

from .background import generate_background
from .config import PhantomConfig
from .io import load_sequence, save_sequence
from .motion import MotionField, identity_motion, mean_displacement, sample_motion, warp
from .sequence import DSASequence, compose_live, contrast_ramp, make_sequence, subtract
from .vessels import generate_vessel_tree, occupancy

__all__ = [
    "DSASequence",
    "MotionField",
    "PhantomConfig",
    "compose_live",
    "contrast_ramp",
    "generate_background",
    "generate_vessel_tree",
    "identity_motion",
    "load_sequence",
    "make_sequence",
    "mean_displacement",
    "occupancy",
    "sample_motion",
    "save_sequence",
    "subtract",
    "warp",
]

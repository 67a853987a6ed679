"""Reconstruction network and its minimal autodiff engine."""

from .model import (
    ArchConfig,
    Network,
    build_network,
    load_checkpoint,
    param_count,
    rdb_forward,
    save_checkpoint,
    tail_in_channels,
)

__all__ = [
    "ArchConfig",
    "Network",
    "build_network",
    "load_checkpoint",
    "param_count",
    "rdb_forward",
    "save_checkpoint",
    "tail_in_channels",
]

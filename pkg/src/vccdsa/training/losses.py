"""Fidelity/consistency loss arithmetic (scalar side; the training step
computes the same quantities through the autodiff graph)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..image import check_frame, check_same_shape


@dataclass(frozen=True)
class LossConfig:
    lambda_weight: float = 0.85

    def __post_init__(self):
        if not 0.0 <= self.lambda_weight <= 1.0:
            raise ConfigError("lambda_weight must lie in [0, 1]")


def fidelity_loss(prediction: np.ndarray, weak_label: np.ndarray) -> float:
    """Mean absolute difference between a prediction and its weak label."""
    prediction = check_frame(prediction, "prediction")
    weak_label = check_frame(weak_label, "weak_label")
    check_same_shape(prediction, weak_label)
    return float(np.abs(prediction - weak_label).mean())


def consistency_loss(v_i: np.ndarray, v_j: np.ndarray) -> float:
    """Mean absolute difference between the two mask-branch reconstructions."""
    v_i = check_frame(v_i, "v_i")
    v_j = check_frame(v_j, "v_j")
    check_same_shape(v_i, v_j)
    return float(np.abs(v_i - v_j).mean())


def total_loss(l_fid1: float, l_fid2: float, l_con: float, cfg: LossConfig) -> float:
    lam = cfg.lambda_weight
    return (1.0 - lam) * (l_fid1 + l_fid2) / 2.0 + lam * l_con

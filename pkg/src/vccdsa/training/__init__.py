"""Training loop, losses, optimizer, augmentation."""

from .adam import AdamState, adam_step
from .augment import augment
from .data import TrainSample, epoch_index, make_sample, sample_mask_pair
from .loop import TrainConfig, TrainRecord, train_model, train_step, write_train_log
from .losses import LossConfig, consistency_loss, fidelity_loss, total_loss

__all__ = [
    "AdamState",
    "LossConfig",
    "TrainConfig",
    "TrainRecord",
    "TrainSample",
    "adam_step",
    "augment",
    "consistency_loss",
    "epoch_index",
    "fidelity_loss",
    "make_sample",
    "sample_mask_pair",
    "total_loss",
    "train_model",
    "train_step",
    "write_train_log",
]

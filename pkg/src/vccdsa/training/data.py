"""Training samples: mask pairs, live frames, weak labels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from ..phantom.sequence import DSASequence


@dataclass
class TrainSample:
    mask_i: np.ndarray
    mask_j: np.ndarray
    live: np.ndarray
    weak_label: np.ndarray
    provenance: dict = field(default_factory=dict)


def sample_mask_pair(
    sequence: DSASequence, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Uniform draw of two distinct mask frames from one sequence."""
    k = sequence.n_masks
    if k < 2:
        raise DataError(f"sequence {sequence.sequence_id} has {k} masks, need >= 2")
    i, j = rng.choice(k, size=2, replace=False)
    return sequence.masks[i], sequence.masks[j], int(i), int(j)


def make_sample(sequence: DSASequence, frame: int, rng: np.random.Generator) -> TrainSample:
    mask_i, mask_j, i, j = sample_mask_pair(sequence, rng)
    return TrainSample(
        mask_i=mask_i,
        mask_j=mask_j,
        live=sequence.lives[frame],
        weak_label=sequence.weak_labels[frame],
        provenance={
            "sequence": sequence.sequence_id,
            "frame": frame,
            "mask_indices": (i, j),
            "mixup": None,
        },
    )


def epoch_index(sequences: list[DSASequence]) -> list[tuple[int, int]]:
    """All (sequence, live frame) pairs; shuffled per epoch by the loop."""
    return [(s, t) for s, seq in enumerate(sequences) for t in range(seq.n_lives)]

"""Experiment harness: dataset generation, runs, sweeps, reports."""

from .evaluate import (
    aggregate,
    evaluate_sequences,
    export_bank,
    inference_timing,
    predict_frame,
    write_summary,
)
from .experiment import (
    DESK_ARCH,
    ExperimentConfig,
    config_hash,
    generate_dataset,
    load_config,
    load_split,
    split_counts,
    write_manifest,
)

__all__ = [
    "DESK_ARCH",
    "ExperimentConfig",
    "aggregate",
    "config_hash",
    "evaluate_sequences",
    "export_bank",
    "generate_dataset",
    "inference_timing",
    "load_config",
    "load_split",
    "predict_frame",
    "split_counts",
    "write_manifest",
    "write_summary",
]

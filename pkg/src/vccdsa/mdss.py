"""Mixup-based self-evolution: a bounded bank of the model's own vessel
reconstructions, additively mixed onto live images and weak labels."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .image import clip01


@dataclass
class MdssConfig:
    enabled: bool = False
    bank_capacity: int = 256
    warmup_steps: int | None = None  # None -> 20% of total steps
    mix_probability: float = 0.5
    insert_every: int = 10
    quality_gate: float = 0.02  # max per-sample consistency loss at insert

    def validate(self) -> "MdssConfig":
        if self.bank_capacity < 1:
            raise ConfigError("bank_capacity must be >= 1")
        if not 0.0 <= self.mix_probability <= 1.0:
            raise ConfigError("mix_probability must lie in [0, 1]")
        if self.insert_every < 1:
            raise ConfigError("insert_every must be >= 1")
        return self


@dataclass
class BankEntry:
    vessel: np.ndarray
    source_sequence: str
    step: int


@dataclass
class VascularBank:
    capacity: int
    entries: list[BankEntry] = field(default_factory=list)
    inserts: int = 0
    rejections: int = 0
    mixes: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def snapshot(self) -> list[BankEntry]:
        return list(self.entries)

    def stats(self) -> dict:
        return {
            "size": len(self.entries),
            "inserts": self.inserts,
            "rejections": self.rejections,
            "mixes": self.mixes,
        }


def bank_update(
    bank: VascularBank,
    prediction: np.ndarray,
    l_con: float,
    source_sequence: str,
    step: int,
    cfg: MdssConfig,
) -> VascularBank:
    """FIFO insert gated by warmup, cadence, and consistency quality."""
    warmup = cfg.warmup_steps if cfg.warmup_steps is not None else 0
    if step < warmup or step % cfg.insert_every != 0:
        return bank
    if l_con > cfg.quality_gate:
        bank.rejections += 1
        return bank
    bank.entries.append(BankEntry(clip01(prediction), source_sequence, step))
    bank.inserts += 1
    if len(bank.entries) > bank.capacity:
        bank.entries.pop(0)
    return bank


def mixup_apply(
    live: np.ndarray,
    weak_label: np.ndarray,
    gt: np.ndarray | None,
    source_sequence: str,
    bank: VascularBank,
    rng: np.random.Generator,
    cfg: MdssConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, dict | None]:
    """With probability mix_probability, add a bank vessel from a different
    sequence onto live, label (and gt when given). Masks are never touched."""
    if not cfg.enabled or rng.random() >= cfg.mix_probability:
        return live, weak_label, gt, None
    candidates = [
        (idx, e) for idx, e in enumerate(bank.entries)
        if e.source_sequence != source_sequence and e.vessel.shape == live.shape
    ]
    if not candidates:
        return live, weak_label, gt, None
    idx, entry = candidates[rng.integers(0, len(candidates))]
    bank.mixes += 1
    record = {"entry_index": idx, "entry_source": entry.source_sequence, "entry_step": entry.step}
    live2 = clip01(live + entry.vessel)
    label2 = clip01(weak_label + entry.vessel)
    gt2 = clip01(gt + entry.vessel) if gt is not None else None
    return live2, label2, gt2, record

"""Experiment plumbing: configuration, dataset generation, splits,
content hashes, and run manifests."""

from __future__ import annotations

import hashlib
import json
import platform
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .. import __version__
from ..baselines import RegistrationConfig
from ..errors import ConfigError
from ..mdss import MdssConfig
from ..network.model import ArchConfig
from ..phantom import DSASequence, PhantomConfig, load_sequence, make_sequence, save_sequence
from ..training.loop import TrainConfig
from ..training.losses import LossConfig

# reference lab-scale model: ~0.47M parameters, fast enough for CPU sweeps
DESK_ARCH = ArchConfig(scale_factor=0.25, rdb_growth=32)

METHODS = ("vccdsa", "live_only", "subtract", "translate_reg")
SPLIT_NAMES = ("train", "val", "test")


@dataclass
class ExperimentConfig:
    phantom: PhantomConfig = field(default_factory=PhantomConfig)
    arch: ArchConfig = field(default_factory=lambda: DESK_ARCH)
    train: TrainConfig = field(default_factory=TrainConfig)
    registration: RegistrationConfig = field(default_factory=RegistrationConfig)
    n_sequences: int = 24
    levels: tuple[int, ...] = (2,)
    data_seed: int = 0
    split: tuple[float, float, float] = (0.7, 0.1, 0.2)
    methods: tuple[str, ...] = ("vccdsa", "subtract", "translate_reg")

    def validate(self) -> "ExperimentConfig":
        if self.n_sequences < 3:
            raise ConfigError("need at least 3 sequences (one per split)")
        if not self.levels or any(not 0 <= lv <= 5 for lv in self.levels):
            raise ConfigError("levels must be a non-empty subset of 0..5")
        if abs(sum(self.split) - 1.0) > 1e-9 or any(r < 0 for r in self.split):
            raise ConfigError("split ratios must be non-negative and sum to 1")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; choose from {METHODS}")
        self.train.validate()
        self.arch.validate()
        self.phantom.validate()
        return self

    def to_dict(self) -> dict:
        return {
            "phantom": self.phantom.to_dict(),
            "arch": self.arch.to_dict(),
            "train": asdict(self.train),
            "registration": asdict(self.registration),
            "n_sequences": self.n_sequences,
            "levels": list(self.levels),
            "data_seed": self.data_seed,
            "split": list(self.split),
            "methods": list(self.methods),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        kwargs = {}
        if "phantom" in d:
            kwargs["phantom"] = PhantomConfig.from_dict(d.pop("phantom"))
        if "arch" in d:
            arch = {**DESK_ARCH.to_dict(), **d.pop("arch")}
            kwargs["arch"] = ArchConfig.from_dict(arch)
        if "train" in d:
            kwargs["train"] = train_config_from_dict(d.pop("train"))
        if "registration" in d:
            kwargs["registration"] = RegistrationConfig(**d.pop("registration"))
        for key in ("levels", "split", "methods"):
            if key in d:
                kwargs[key] = tuple(d.pop(key))
        kwargs.update(d)
        return cls(**kwargs).validate()


def train_config_from_dict(d: dict) -> TrainConfig:
    d = dict(d)
    loss = LossConfig(**d.pop("loss", {}))
    mdss = MdssConfig(**d.pop("mdss", {}))
    return TrainConfig(loss=loss, mdss=mdss, **d)


def load_config(path: str | Path | None) -> ExperimentConfig:
    """Read a YAML config file; missing keys fall back to defaults."""
    if path is None:
        return ExperimentConfig().validate()
    raw = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return ExperimentConfig.from_dict(raw)


def config_hash(d: dict) -> str:
    """Short content hash of a JSON-serializable config; stable across runs."""
    blob = json.dumps(d, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def split_counts(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    """Floor the train and val shares; the remainder goes to test."""
    n_train = int(n * ratios[0])
    n_val = int(n * ratios[1])
    return n_train, n_val, n - n_train - n_val


def generate_dataset(cfg: ExperimentConfig, out_dir: str | Path) -> dict[str, list[str]]:
    """Write n_sequences exams (levels assigned round-robin) plus split.json.

    Sequences are shuffled by data_seed before splitting so every split sees
    every motion level when n_sequences permits.
    """
    cfg.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(cfg.n_sequences):
        level = cfg.levels[i % len(cfg.levels)]
        seed = cfg.data_seed + i
        seq = make_sequence(cfg.phantom, level, seed)
        name = f"seq_{i:04d}_l{level}_s{seed}"
        save_sequence(seq, out_dir / name)
        names.append(name)

    rng = np.random.default_rng([cfg.data_seed, 0x5350])
    order = list(rng.permutation(len(names)))
    n_train, n_val, _ = split_counts(len(names), cfg.split)
    splits = {
        "train": sorted(names[i] for i in order[:n_train]),
        "val": sorted(names[i] for i in order[n_train:n_train + n_val]),
        "test": sorted(names[i] for i in order[n_train + n_val:]),
    }
    (out_dir / "split.json").write_text(json.dumps(splits, indent=2))
    (out_dir / "dataset_config.json").write_text(json.dumps(cfg.to_dict(), indent=2))
    return splits


def load_split(dataset_dir: str | Path, part: str) -> list[DSASequence]:
    dataset_dir = Path(dataset_dir)
    if part not in SPLIT_NAMES:
        raise ConfigError(f"unknown split {part!r}")
    splits = json.loads((dataset_dir / "split.json").read_text())
    return [load_sequence(dataset_dir / name) for name in splits[part]]


def file_checksums(root: str | Path, patterns: tuple[str, ...] = ("*.npz", "*.csv", "*.json", "*.png")) -> dict[str, str]:
    root = Path(root)
    sums = {}
    for pattern in patterns:
        for path in sorted(root.rglob(pattern)):
            if path.name == "run_manifest.json":
                continue
            sums[str(path.relative_to(root))] = hashlib.sha256(path.read_bytes()).hexdigest()
    return sums


def write_manifest(out_dir: str | Path, config: dict, **extras) -> Path:
    """run_manifest.json: resolved config, its hash, environment, file
    checksums, and any run-specific extras (timings, bank stats, ...)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format_version": 1,
        "package_version": __version__,
        "created_unix": time.time(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": config,
        "config_hash": config_hash(config),
        **extras,
        "checksums": file_checksums(out_dir),
    }
    path = out_dir / "run_manifest.json"
    path.write_text(json.dumps(manifest, indent=2))
    return path

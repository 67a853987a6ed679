"""The training procedure: dual shared-weight forwards over two sampled
masks, the weighted fidelity/consistency objective, Adam updates, and
the self-evolving vessel bank."""

from __future__ import annotations

import csv
import hashlib
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DivergenceError
from ..image import clip01
from ..mdss import MdssConfig, VascularBank, bank_update, mixup_apply
from ..network import autodiff as ad
from ..network.model import Network, save_checkpoint
from ..phantom.sequence import DSASequence
from .adam import AdamState, adam_step
from .augment import augment
from .data import TrainSample, epoch_index, make_sample
from .losses import LossConfig, total_loss


@dataclass
class TrainConfig:
    learning_rate: float = 2e-4
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    batch_size: int = 4
    crop_size: int = 64
    total_steps: int = 2000
    seed: int = 0
    flip: bool = True
    rotate: bool = True
    translate_scale: bool = True
    loss: LossConfig = field(default_factory=LossConfig)
    mdss: MdssConfig = field(default_factory=MdssConfig)
    dtype: str = "float32"
    checkpoint_every: int = 0  # 0 -> final checkpoint only

    def validate(self) -> "TrainConfig":
        if self.total_steps < 1:
            raise ConfigError("total_steps must be >= 1")
        if self.crop_size % 8 or self.crop_size < 16:
            raise ConfigError("crop_size must be >= 16 and divisible by 8")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        self.mdss.validate()
        return self


@dataclass
class TrainRecord:
    step: int
    l_fid1: float
    l_fid2: float
    l_con: float
    l_total: float
    wall_ms: float


def _param_digest(net: Network) -> bytes:
    h = hashlib.sha1()
    h.update(net.params["head.w"].data.tobytes())
    h.update(net.params["tail.w"].data.tobytes())
    return h.digest()


def train_step(
    net: Network,
    batch: list[TrainSample],
    cfg: TrainConfig,
    opt_state: AdamState,
    step: int,
) -> tuple[TrainRecord, np.ndarray, np.ndarray]:
    """One optimization step.

    Returns the record, per-sample consistency losses, and the first-branch
    predictions (for the vessel bank). Both branch forwards run batched
    through the same parameter values; gradients flow through both.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    t0 = time.perf_counter()
    n = len(batch)
    dtype = np.dtype(cfg.dtype)
    labels = np.stack([s.weak_label for s in batch])[..., None].astype(dtype)

    digest = _param_digest(net)
    if net.arch.in_channels == 2:
        x = np.empty((2 * n, *batch[0].live.shape, 2), dtype=dtype)
        for idx, s in enumerate(batch):
            x[idx, :, :, 0] = s.mask_i
            x[idx, :, :, 1] = s.live
            x[n + idx, :, :, 0] = s.mask_j
            x[n + idx, :, :, 1] = s.live
        out = net.forward_batch(x)
        assert _param_digest(net) == digest, "parameters changed during forward"
        v_i = ad.batch_slice(out, 0, n)
        v_j = ad.batch_slice(out, n, 2 * n)
        con = ad.l1_mean(v_i, v_j)
        per_sample_con = np.abs(v_i.data - v_j.data).mean(axis=(1, 2, 3)).astype(np.float64)
    else:  # live-only ablation: single forward, consistency forced to zero
        x = np.stack([s.live for s in batch])[..., None].astype(dtype)
        out = net.forward_batch(x)
        assert _param_digest(net) == digest, "parameters changed during forward"
        v_i = v_j = out
        con = None
        per_sample_con = np.zeros(n)

    lab = ad.constant(labels)
    f1 = ad.l1_mean(v_i, lab)
    f2 = f1 if v_j is v_i else ad.l1_mean(v_j, lab)
    lam = cfg.loss.lambda_weight
    terms = [ad.scale(f1, (1.0 - lam) / 2.0), ad.scale(f2, (1.0 - lam) / 2.0)]
    if con is not None:
        terms.append(ad.scale(con, lam))
    objective = ad.vsum(terms)

    ad.zero_grads(net.params)
    ad.backward(objective)
    adam_step(net.params, opt_state, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2)

    l_fid1 = float(f1.data)
    l_fid2 = float(f2.data)
    l_con = float(con.data) if con is not None else 0.0
    record = TrainRecord(
        step=step,
        l_fid1=l_fid1,
        l_fid2=l_fid2,
        l_con=l_con,
        l_total=total_loss(l_fid1, l_fid2, l_con, cfg.loss),
        wall_ms=(time.perf_counter() - t0) * 1e3,
    )
    if not np.isfinite(record.l_total):
        raise DivergenceError("non-finite training loss", step)
    preds = v_i.data[:, :, :, 0].astype(np.float64)
    return record, per_sample_con, preds


DIVERGENCE_FACTOR = 10.0
DIVERGENCE_PATIENCE = 100
DIVERGENCE_BASELINE_STEP = 10


def train_model(
    net: Network,
    sequences: list[DSASequence],
    cfg: TrainConfig,
    out_dir: str | Path | None = None,
) -> tuple[list[TrainRecord], VascularBank]:
    """Run the full loop over the dataset; optionally write logs/checkpoints."""
    cfg.validate()
    if not sequences:
        raise ValueError("no training sequences")
    rng = np.random.default_rng([cfg.seed, 0x5452])
    mdss_cfg = cfg.mdss
    if mdss_cfg.warmup_steps is None:
        mdss_cfg = MdssConfig(**{**mdss_cfg.__dict__, "warmup_steps": int(0.2 * cfg.total_steps)})
    opt_state = AdamState(net.params)
    bank = VascularBank(capacity=mdss_cfg.bank_capacity)
    records: list[TrainRecord] = []

    index = epoch_index(sequences)
    order: list[tuple[int, int]] = []
    baseline = None
    runaway_streak = 0

    for step in range(1, cfg.total_steps + 1):
        batch: list[TrainSample] = []
        batch_gt: list[np.ndarray] = []
        while len(batch) < cfg.batch_size:
            if not order:
                order = list(index)
                rng.shuffle(order)
            s_idx, frame = order.pop()
            seq = sequences[s_idx]
            sample = make_sample(seq, frame, rng)
            gt = seq.vessels_gt[frame]
            if mdss_cfg.enabled:
                live2, label2, gt2, mix = mixup_apply(
                    sample.live, sample.weak_label, gt,
                    seq.sequence_id, bank, rng, mdss_cfg,
                )
                sample = TrainSample(sample.mask_i, sample.mask_j, live2, label2,
                                     {**sample.provenance, "mixup": mix})
                gt = gt2
            sample, gt = augment(
                sample, gt, rng, cfg.crop_size,
                flip=cfg.flip, rotate=cfg.rotate, translate_scale=cfg.translate_scale,
            )
            batch.append(sample)
            batch_gt.append(gt)

        record, per_con, preds = train_step(net, batch, cfg, opt_state, step)
        records.append(record)

        if mdss_cfg.enabled:
            for sample, l_con, pred in zip(batch, per_con, preds):
                bank_update(bank, clip01(pred), float(l_con),
                            sample.provenance["sequence"], step, mdss_cfg)

        if step == DIVERGENCE_BASELINE_STEP:
            baseline = record.l_total
        if baseline is not None and record.l_total > DIVERGENCE_FACTOR * baseline:
            runaway_streak += 1
            if runaway_streak >= DIVERGENCE_PATIENCE:
                raise DivergenceError(
                    f"loss exceeded {DIVERGENCE_FACTOR}x its step-{DIVERGENCE_BASELINE_STEP} "
                    f"value for {DIVERGENCE_PATIENCE} consecutive steps", step)
        else:
            runaway_streak = 0

        if out_dir and cfg.checkpoint_every and step % cfg.checkpoint_every == 0:
            save_checkpoint(net, Path(out_dir) / f"checkpoint_{step:06d}.npz", step)

    if out_dir:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_train_log(records, out_dir / "train_log.csv")
        save_checkpoint(net, out_dir / "checkpoint.npz", cfg.total_steps)
    return records, bank


def write_train_log(records: list[TrainRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "L_fid1", "L_fid2", "L_con", "L_total", "wall_ms"])
        for r in records:
            writer.writerow([r.step, repr(r.l_fid1), repr(r.l_fid2), repr(r.l_con),
                             repr(r.l_total), f"{r.wall_ms:.3f}"])

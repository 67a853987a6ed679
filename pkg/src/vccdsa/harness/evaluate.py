"""Test-set evaluation: per-frame SSIM/PSNR for every method, inference
timing, summary files, and plots."""

from __future__ import annotations

import csv
import json
import statistics
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ..baselines import RegistrationConfig, translation_registration_subtract
from ..errors import ConfigError
from ..image import clip01
from ..mdss import VascularBank
from ..metrics import psnr, ssim
from ..network.model import Network
from ..phantom import DSASequence, subtract
from ..phantom.io import frame_to_png


def predict_frame(
    method: str,
    seq: DSASequence,
    frame: int,
    net: Network | None = None,
    reg_cfg: RegistrationConfig = RegistrationConfig(),
) -> np.ndarray:
    """One vessel estimate for live frame `frame`, in [0, 1]."""
    live = seq.lives[frame]
    mask = seq.masks[0]
    if method == "subtract":
        return subtract(live, mask)
    if method == "translate_reg":
        return translation_registration_subtract(live, mask, reg_cfg)
    if method in ("vccdsa", "live_only"):
        if net is None:
            raise ConfigError(f"method {method!r} needs a trained network")
        return clip01(net.forward(mask, live) if net.arch.in_channels == 2
                      else net.forward(live, live))
    raise ConfigError(f"unknown method {method!r}")


def evaluate_sequences(
    methods: list[str],
    sequences: list[DSASequence],
    nets: dict[str, Network] | None = None,
    reg_cfg: RegistrationConfig = RegistrationConfig(),
) -> list[dict]:
    """Per-frame metric rows for every (method, sequence, live frame)."""
    nets = nets or {}
    rows = []
    for seq in sequences:
        for frame in range(seq.n_lives):
            gt = seq.vessels_gt[frame]
            for method in methods:
                pred = predict_frame(method, seq, frame, nets.get(method), reg_cfg)
                rows.append({
                    "method": method,
                    "sequence_id": seq.sequence_id,
                    "level": seq.level,
                    "frame": frame,
                    "ssim": ssim(pred, gt),
                    "psnr": psnr(pred, gt),
                })
    return rows


def aggregate(rows: list[dict]) -> dict[str, dict]:
    """Mean and standard deviation of each metric, per method."""
    out: dict[str, dict] = {}
    for method in sorted({r["method"] for r in rows}):
        sub = [r for r in rows if r["method"] == method]
        out[method] = {"n_frames": len(sub)}
        for key in ("ssim", "psnr"):
            vals = [r[key] for r in sub]
            out[method][key] = statistics.fmean(vals)
            out[method][f"{key}_std"] = statistics.pstdev(vals) if len(vals) > 1 else 0.0
    return out


def inference_timing(net: Network, mask: np.ndarray, live: np.ndarray,
                     repeats: int = 20, warmup: int = 3) -> dict:
    """Median single-frame forward time after warmup passes."""
    if repeats < 20:
        raise ConfigError("timing needs at least 20 measured passes")
    for _ in range(warmup):
        net.forward(mask, live)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        net.forward(mask, live)
        times.append(time.perf_counter() - t0)
    return {
        "median_ms": statistics.median(times) * 1e3,
        "min_ms": min(times) * 1e3,
        "max_ms": max(times) * 1e3,
        "repeats": repeats,
        "warmup": warmup,
        "frame_shape": list(live.shape),
    }


def write_metrics_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["method", "sequence_id", "level", "frame", "ssim", "psnr"])
        writer.writeheader()
        writer.writerows(rows)


def write_summary(out_dir: str | Path, rows: list[dict], timing: dict | None = None,
                  **extras) -> dict:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(rows, out_dir / "metrics.csv")
    summary = {"methods": aggregate(rows), **extras}
    if timing is not None:
        summary["inference"] = timing
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    return summary


def plot_sweep(points: list[dict], x_key: str, path: str | Path, x_label: str) -> None:
    """Two-panel line plot: SSIM and PSNR against the swept quantity."""
    methods = sorted({p["method"] for p in points})
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for metric, ax, unit in (("ssim", axes[0], "SSIM (%)"), ("psnr", axes[1], "PSNR (dB)")):
        for method in methods:
            sub = sorted((p for p in points if p["method"] == method),
                         key=lambda p: p[x_key])
            ax.plot([p[x_key] for p in sub], [p[metric] for p in sub],
                    marker="o", label=method)
        ax.set_xlabel(x_label)
        ax.set_ylabel(unit)
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def export_bank(bank: VascularBank, out_dir: str | Path) -> Path:
    """Dump the vessel bank: one PNG per entry plus an index file."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    index = []
    for i, entry in enumerate(bank.snapshot()):
        name = f"bank_{i:04d}.png"
        frame_to_png(entry.vessel, out_dir / name)
        index.append({"file": name, "source_sequence": entry.source_sequence,
                      "step": entry.step})
    (out_dir / "bank_index.json").write_text(
        json.dumps({"stats": bank.stats(), "entries": index}, indent=2))
    return out_dir

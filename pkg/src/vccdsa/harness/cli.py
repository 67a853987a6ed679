"""Command-line harness.

Verbs: generate, train, eval, sweep-lambda, sweep-motion, ablate, report.
Every run writes a run_manifest.json with the resolved configuration,
its hash, and checksums of the produced files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

from ..baselines import live_only_build
from ..network.model import build_network, load_checkpoint
from ..phantom import make_sequence
from ..training.loop import train_model
from . import evaluate as ev
from .experiment import (
    ExperimentConfig,
    generate_dataset,
    load_config,
    load_split,
    write_manifest,
)
from .report import write_report


def _with(obj, **changes):
    return dataclasses.replace(obj, **changes)


def _base_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="YAML experiment config")
    p.add_argument("--out", default="runs/latest", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="training/search seed")
    p.add_argument("--deterministic", action="store_true",
                   help="record that the run must be bit-reproducible "
                        "(all randomness is seeded either way)")


def _load(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    cfg.train = _with(cfg.train, seed=args.seed)
    return cfg


def _train_one(cfg: ExperimentConfig, dataset: str, out_dir: Path, method: str = "vccdsa"):
    """Train one model on the dataset's train split; returns (net, records, bank)."""
    seqs = load_split(dataset, "train")
    if method == "live_only":
        net = live_only_build(cfg.arch, cfg.train.seed)
    else:
        net = build_network(cfg.arch, cfg.train.seed)
    records, bank = train_model(net, seqs, cfg.train, out_dir)
    return net, records, bank


def _eval_to(cfg: ExperimentConfig, out_dir: Path, sequences, nets: dict,
             methods: list[str], time_net=None) -> dict:
    rows = ev.evaluate_sequences(methods, sequences, nets, cfg.registration)
    timing = None
    if time_net is not None and sequences:
        seq = sequences[0]
        timing = ev.inference_timing(time_net, seq.masks[0], seq.lives[0])
    return ev.write_summary(out_dir, rows, timing)


def cmd_generate(args) -> int:
    cfg = _load(args)
    if args.n is not None:
        cfg.n_sequences = args.n
    if args.levels is not None:
        cfg.levels = tuple(int(v) for v in args.levels.split(","))
    cfg.data_seed = args.seed
    out = Path(args.out)
    t0 = time.perf_counter()
    splits = generate_dataset(cfg, out)
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   wall_s=time.perf_counter() - t0,
                   split_sizes={k: len(v) for k, v in splits.items()})
    print(f"wrote {cfg.n_sequences} sequences to {out} "
          f"(train/val/test = {'/'.join(str(len(splits[s])) for s in ('train', 'val', 'test'))})")
    return 0


def cmd_train(args) -> int:
    cfg = _load(args)
    if args.steps is not None:
        cfg.train = _with(cfg.train, total_steps=args.steps)
    if args.lambda_weight is not None:
        cfg.train = _with(cfg.train, loss=_with(cfg.train.loss, lambda_weight=args.lambda_weight))
    if args.mdss:
        cfg.train = _with(cfg.train, mdss=_with(cfg.train.mdss, enabled=True))
    out = Path(args.out)
    t0 = time.perf_counter()
    net, records, bank = _train_one(cfg, args.data, out, args.method)
    if cfg.train.mdss.enabled:
        ev.export_bank(bank, out / "bank")
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   method=args.method, dataset=str(args.data),
                   wall_s=time.perf_counter() - t0,
                   final_loss=records[-1].l_total, bank=bank.stats())
    print(f"trained {args.method} for {cfg.train.total_steps} steps; "
          f"final loss {records[-1].l_total:.5f}; checkpoint in {out}")
    return 0


def cmd_eval(args) -> int:
    cfg = _load(args)
    nets = {}
    if args.checkpoint:
        net, _step = load_checkpoint(args.checkpoint)
        nets["live_only" if net.arch.in_channels == 1 else "vccdsa"] = net
    methods = list(args.methods.split(",")) if args.methods else [
        m for m in cfg.methods if m in nets or m in ("subtract", "translate_reg")]
    test = load_split(args.data, args.split)
    out = Path(args.out)
    summary = _eval_to(cfg, out, test, nets, methods, time_net=nets.get("vccdsa"))
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   dataset=str(args.data), split=args.split, methods=methods)
    for method, stats in summary["methods"].items():
        print(f"{method:>14s}  SSIM {stats['ssim']:6.2f}%  PSNR {stats['psnr']:6.2f} dB")
    return 0


def cmd_sweep_lambda(args) -> int:
    cfg = _load(args)
    lambdas = [float(v) for v in args.lambdas.split(",")]
    if args.steps is not None:
        cfg.train = _with(cfg.train, total_steps=args.steps)
    out = Path(args.out)
    test = load_split(args.data, "test")
    points = []
    for lam in lambdas:
        run_cfg = _with(cfg.train, loss=_with(cfg.train.loss, lambda_weight=lam))
        sub = out / f"lambda_{lam:g}"
        cfg_lam = _with(cfg, train=run_cfg)
        net, _records, _bank = _train_one(cfg_lam, args.data, sub)
        summary = _eval_to(cfg_lam, sub, test, {"vccdsa": net}, ["vccdsa"])
        stats = summary["methods"]["vccdsa"]
        points.append({"method": "vccdsa", "lambda": lam,
                       "ssim": stats["ssim"], "psnr": stats["psnr"]})
        print(f"lambda={lam:g}  SSIM {stats['ssim']:6.2f}%  PSNR {stats['psnr']:6.2f} dB")
    (out / "sweep_lambda.json").write_text(json.dumps(points, indent=2))
    ev.plot_sweep(points, "lambda", out / "sweep_lambda.png", "consistency weight")
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   dataset=str(args.data), lambdas=lambdas)
    return 0


def cmd_sweep_motion(args) -> int:
    cfg = _load(args)
    net, _step = load_checkpoint(args.checkpoint)
    out = Path(args.out)
    levels = [int(v) for v in args.levels.split(",")]
    methods = list(cfg.methods)
    points = []
    for level in levels:
        seqs = [make_sequence(cfg.phantom, level, args.seed + 10_000 + k)
                for k in range(args.n)]
        rows = ev.evaluate_sequences(methods, seqs, {"vccdsa": net}, cfg.registration)
        for method, stats in ev.aggregate(rows).items():
            points.append({"method": method, "level": level,
                           "ssim": stats["ssim"], "psnr": stats["psnr"]})
    (out / "sweep_motion.json").parent.mkdir(parents=True, exist_ok=True)
    (out / "sweep_motion.json").write_text(json.dumps(points, indent=2))
    ev.plot_sweep(points, "level", out / "sweep_motion.png", "motion level")
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   checkpoint=str(args.checkpoint), levels=levels, n_per_level=args.n)
    for p in points:
        print(f"level {p['level']}  {p['method']:>14s}  "
              f"SSIM {p['ssim']:6.2f}%  PSNR {p['psnr']:6.2f} dB")
    return 0


ABLATIONS = {
    # supervision source: mask+live dual-branch net vs a live-only net
    "lsmp": [("full", {}), ("live_only", {"method": "live_only"})],
    # consistency objective: default weight vs fidelity-only
    "vcs": [("with_consistency", {}), ("no_consistency", {"lambda": 0.0})],
    # self-evolution: vessel bank mixup on vs off
    "mdss": [("with_mixup", {"mdss": True}), ("no_mixup", {"mdss": False})],
}


def cmd_ablate(args) -> int:
    cfg = _load(args)
    if args.steps is not None:
        cfg.train = _with(cfg.train, total_steps=args.steps)
    out = Path(args.out)
    test = load_split(args.data, "test")
    results = {}
    for name, mods in ABLATIONS[args.which]:
        run_cfg = cfg
        method = mods.get("method", "vccdsa")
        if "lambda" in mods:
            run_cfg = _with(cfg, train=_with(
                cfg.train, loss=_with(cfg.train.loss, lambda_weight=mods["lambda"])))
        if "mdss" in mods:
            run_cfg = _with(cfg, train=_with(
                cfg.train, mdss=_with(cfg.train.mdss, enabled=mods["mdss"])))
        sub = out / name
        net, _records, bank = _train_one(run_cfg, args.data, sub, method)
        eval_method = "live_only" if method == "live_only" else "vccdsa"
        summary = _eval_to(run_cfg, sub, test, {eval_method: net}, [eval_method])
        results[name] = {**summary["methods"][eval_method], "bank": bank.stats()}
        print(f"{name:>16s}  SSIM {results[name]['ssim']:6.2f}%  "
              f"PSNR {results[name]['psnr']:6.2f} dB")
    (out / f"ablate_{args.which}.json").write_text(json.dumps(results, indent=2))
    write_manifest(out, cfg.to_dict(), deterministic=args.deterministic,
                   ablation=args.which, dataset=str(args.data))
    return 0


def cmd_report(args) -> int:
    path = write_report(Path(args.out))
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vccdsa",
        description="Desk-scale DSA reconstruction lab: data generation, "
                    "training, evaluation, sweeps, and ablations.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="write a synthetic exam dataset")
    _base_flags(p)
    p.add_argument("--n", type=int, default=None, help="number of sequences")
    p.add_argument("--levels", default=None, help="comma list of motion levels 0..5")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("train", help="train a model on a dataset's train split")
    _base_flags(p)
    p.add_argument("--data", required=True, help="dataset directory")
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--lambda", dest="lambda_weight", type=float, default=None,
                   help="consistency weight in [0, 1)")
    p.add_argument("--mdss", action="store_true", help="enable vessel-bank mixup")
    p.add_argument("--method", choices=["vccdsa", "live_only"], default="vccdsa")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="score methods on a dataset split")
    _base_flags(p)
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", default=None, help="trained model (.npz)")
    p.add_argument("--split", default="test", choices=["train", "val", "test"])
    p.add_argument("--methods", default=None, help="comma list to override")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sweep-lambda", help="train/eval across consistency weights")
    _base_flags(p)
    p.add_argument("--data", required=True)
    p.add_argument("--lambdas", default="0,0.85,0.99")
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(fn=cmd_sweep_lambda)

    p = sub.add_parser("sweep-motion", help="evaluate a checkpoint across motion levels")
    _base_flags(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--levels", default="0,1,2,3,4,5")
    p.add_argument("--n", type=int, default=3, help="sequences per level")
    p.set_defaults(fn=cmd_sweep_motion)

    p = sub.add_parser("ablate", help="train/eval a component on/off pair")
    _base_flags(p)
    p.add_argument("which", choices=sorted(ABLATIONS))
    p.add_argument("--data", required=True)
    p.add_argument("--steps", type=int, default=None)
    p.set_defaults(fn=cmd_ablate)

    p = sub.add_parser("report", help="collect results under --out into report.md")
    _base_flags(p)
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())

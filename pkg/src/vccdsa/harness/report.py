"""Collect run artifacts under a directory into a single markdown report."""

from __future__ import annotations

import json
from pathlib import Path


def _method_table(methods: dict[str, dict]) -> list[str]:
    lines = ["| method | SSIM (%) | PSNR (dB) | frames |",
             "|---|---|---|---|"]
    for name, s in sorted(methods.items()):
        lines.append(f"| {name} | {s['ssim']:.2f} ± {s.get('ssim_std', 0):.2f} "
                     f"| {s['psnr']:.2f} ± {s.get('psnr_std', 0):.2f} "
                     f"| {s.get('n_frames', '-')} |")
    return lines


def _sweep_table(points: list[dict], x_key: str) -> list[str]:
    lines = [f"| {x_key} | method | SSIM (%) | PSNR (dB) |", "|---|---|---|---|"]
    for p in sorted(points, key=lambda p: (p["method"], p[x_key])):
        lines.append(f"| {p[x_key]} | {p['method']} | {p['ssim']:.2f} | {p['psnr']:.2f} |")
    return lines


def write_report(root: Path) -> Path:
    """Walk `root` for summary/sweep/ablation JSON files and render report.md."""
    root = Path(root)
    lines = ["# Results", ""]

    for path in sorted(root.rglob("summary.json")):
        rel = path.parent.relative_to(root)
        data = json.loads(path.read_text())
        lines += [f"## Evaluation: {rel or '.'}", ""]
        lines += _method_table(data.get("methods", {}))
        if "inference" in data and data["inference"]:
            t = data["inference"]
            lines += ["", f"Inference: median {t['median_ms']:.1f} ms/frame "
                          f"({t['repeats']} passes, {t['warmup']} warmup, "
                          f"frame {'x'.join(map(str, t['frame_shape']))})."]
        lines.append("")

    for path in sorted(root.rglob("sweep_lambda.json")):
        lines += [f"## Consistency-weight sweep: {path.parent.relative_to(root) or '.'}", ""]
        lines += _sweep_table(json.loads(path.read_text()), "lambda")
        if (path.parent / "sweep_lambda.png").exists():
            lines += ["", "![lambda sweep](sweep_lambda.png)"]
        lines.append("")

    for path in sorted(root.rglob("sweep_motion.json")):
        lines += [f"## Motion-level sweep: {path.parent.relative_to(root) or '.'}", ""]
        lines += _sweep_table(json.loads(path.read_text()), "level")
        if (path.parent / "sweep_motion.png").exists():
            lines += ["", "![motion sweep](sweep_motion.png)"]
        lines.append("")

    for path in sorted(root.rglob("ablate_*.json")):
        name = path.stem.removeprefix("ablate_")
        data = json.loads(path.read_text())
        lines += [f"## Ablation `{name}`: {path.parent.relative_to(root) or '.'}", ""]
        lines += _method_table({k: v for k, v in data.items()})
        lines.append("")

    if len(lines) == 2:
        lines += ["No artifacts found.", ""]
    out = root / "report.md"
    out.write_text("\n".join(lines))
    return out

"""The reconstruction network: encoder/decoder with residual dense blocks.

Input is a 2-channel stack (mask, live); output a 1-channel vessel map.
Three stride-2 downsamples, three nearest-neighbor upsamples, and a
details-shortcut that feeds the shallow Head features (and the first
dense block's output) into every decoder stage.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..image import check_frame, check_same_shape
from . import autodiff as ad
from .autodiff import Var


@dataclass(frozen=True)
class ArchConfig:
    base_channels: int = 32
    stage_channels: tuple[int, int, int] = (64, 128, 128)
    rdb_layers: int = 5
    rdb_growth: int | None = None  # None -> 2x bottleneck channels
    kernel: int = 3
    scale_factor: float = 1.0
    in_channels: int = 2

    def validate(self) -> "ArchConfig":
        if not 0.0 < self.scale_factor <= 1.0:
            raise ConfigError("scale_factor must lie in (0, 1]")
        if self.kernel % 2 == 0:
            raise ConfigError("kernel size must be odd")
        if self.rdb_layers < 2:
            raise ConfigError("a dense block needs at least 2 layers")
        if min(self.ch(self.base_channels), *(self.ch(c) for c in self.stage_channels)) < 1:
            raise ConfigError("channel counts must stay >= 1 after scaling")
        return self

    def ch(self, count: int) -> int:
        return max(1, round(count * self.scale_factor))

    @property
    def growth(self) -> int:
        if self.rdb_growth is not None:
            return max(1, self.rdb_growth)
        return self.ch(2 * self.stage_channels[2])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stage_channels"] = list(self.stage_channels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ArchConfig":
        d = dict(d)
        if "stage_channels" in d:
            d["stage_channels"] = tuple(d["stage_channels"])
        return cls(**d)


def _layer_plan(arch: ArchConfig) -> list[tuple[str, int, int, int]]:
    """(name, in_ch, out_ch, stride) for every convolution in the graph."""
    c0 = arch.ch(arch.base_channels)
    c1, c2, c3 = (arch.ch(c) for c in arch.stage_channels)
    g = arch.growth

    plan: list[tuple[str, int, int, int]] = [
        ("head", arch.in_channels, c0, 1),
        ("down1", c0, c1, 2),
        ("down2", c1, c2, 2),
    ]

    def rdb(prefix: str, channels: int):
        for li in range(1, arch.rdb_layers):
            plan.append((f"{prefix}.l{li}", channels + (li - 1) * g, g, 1))
        plan.append((f"{prefix}.l{arch.rdb_layers}",
                     channels + (arch.rdb_layers - 1) * g, channels, 1))

    rdb("rdb1", c2)
    rdb("rdb2", c2)
    plan.append(("down3", c2, c3, 2))
    plan.append(("up1", c3, c2, 1))
    plan.append(("fuse1", c2 + c0 + c2, c2, 1))
    rdb("rdb3", c2)
    plan.append(("up2", c2, c1, 1))
    plan.append(("fuse2", c1 + c0, c1, 1))
    plan.append(("up3", c1, c0, 1))
    plan.append(("tail", c0 + c0, 1, 1))
    return plan


@dataclass
class Network:
    arch: ArchConfig
    params: dict[str, Var]
    seed: int
    dtype: np.dtype

    def param_count(self) -> int:
        return sum(v.data.size for v in self.params.values())

    def param_vector(self) -> np.ndarray:
        return np.concatenate([self.params[k].data.ravel() for k in sorted(self.params)])

    def forward_batch(self, x: np.ndarray) -> Var:
        """(N, H, W, in_channels) -> (N, H, W, 1) graph output."""
        if x.ndim != 4 or x.shape[3] != self.arch.in_channels:
            raise ValueError(f"expected (N, H, W, {self.arch.in_channels}), got {x.shape}")
        h, w = x.shape[1], x.shape[2]
        if h % 8 or w % 8:
            raise ValueError(f"spatial size must be divisible by 8, got {h}x{w}")
        return _graph(self, ad.constant(np.ascontiguousarray(x, dtype=self.dtype)))

    def forward(self, mask: np.ndarray, live: np.ndarray) -> np.ndarray:
        """Single-frame inference; returns the raw (unclipped) prediction."""
        mask = check_frame(mask, "mask")
        live = check_frame(live, "live")
        check_same_shape(mask, live)
        if self.arch.in_channels == 2:
            x = np.stack([mask, live], axis=-1)[None]
        else:
            x = live[None, :, :, None]
        return self.forward_batch(x).data[0, :, :, 0].astype(np.float64)


def _conv(net: Network, name: str, x: Var, stride: int = 1, activate: bool = True) -> Var:
    out = ad.conv2d(x, net.params[f"{name}.w"], net.params[f"{name}.b"], stride)
    return ad.relu(out) if activate else out


def rdb_forward(net: Network, prefix: str, x: Var) -> Var:
    """Densely connected conv stack; final layer fuses back to the input
    width with no activation and is residually added to the block input."""
    feats = [x]
    n_layers = net.arch.rdb_layers
    for li in range(1, n_layers):
        cat = feats[0] if len(feats) == 1 else ad.concat(feats)
        feats.append(_conv(net, f"{prefix}.l{li}", cat))
    fused = _conv(net, f"{prefix}.l{n_layers}", ad.concat(feats), activate=False)
    return ad.add(fused, x)


def _graph(net: Network, x: Var) -> Var:
    h0 = _conv(net, "head", x)
    d1 = _conv(net, "down1", h0, stride=2)
    d2 = _conv(net, "down2", d1, stride=2)
    r1 = rdb_forward(net, "rdb1", d2)
    r2 = rdb_forward(net, "rdb2", r1)
    d3 = _conv(net, "down3", r2, stride=2)

    u1 = _conv(net, "up1", ad.upsample2(d3))
    f1 = _conv(net, "fuse1", ad.concat([u1, ad.avgpool(h0, 4), r1]))
    r3 = rdb_forward(net, "rdb3", f1)
    u2 = _conv(net, "up2", ad.upsample2(r3))
    f2 = _conv(net, "fuse2", ad.concat([u2, ad.avgpool(h0, 2)]))
    u3 = _conv(net, "up3", ad.upsample2(f2))
    return _conv(net, "tail", ad.concat([u3, h0]), activate=False)


def build_network(arch: ArchConfig, seed: int, dtype=np.float32) -> Network:
    """Construct the network with fan-in-scaled uniform init, zero biases."""
    arch.validate()
    dtype = np.dtype(dtype)
    rng = np.random.default_rng([seed, 0x4E45])
    params: dict[str, Var] = {}
    k = arch.kernel
    for name, cin, cout, _stride in _layer_plan(arch):
        bound = 1.0 / np.sqrt(cin * k * k)
        w = rng.uniform(-bound, bound, (cout, cin, k, k)).astype(dtype)
        params[f"{name}.w"] = Var(w)
        params[f"{name}.b"] = Var(np.zeros(cout, dtype=dtype))
    return Network(arch=arch, params=params, seed=seed, dtype=dtype)


def param_count(arch: ArchConfig) -> int:
    k = arch.kernel
    return sum(cout * cin * k * k + cout for _n, cin, cout, _s in _layer_plan(arch))


def tail_in_channels(arch: ArchConfig) -> int:
    return next(cin for name, cin, _c, _s in _layer_plan(arch) if name == "tail")


def save_checkpoint(net: Network, path: str | Path, step: int = 0) -> None:
    """Binary parameter blob (.npz) + JSON sidecar with the architecture."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, **{k: v.data for k, v in net.params.items()})
    sidecar = {
        "format_version": 1,
        "arch": net.arch.to_dict(),
        "seed": net.seed,
        "step": step,
        "dtype": net.dtype.name,
    }
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2))


def load_checkpoint(path: str | Path) -> tuple[Network, int]:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    arch = ArchConfig.from_dict(sidecar["arch"])
    net = build_network(arch, sidecar["seed"], dtype=np.dtype(sidecar["dtype"]))
    with np.load(path if path.suffix == ".npz" else path.with_suffix(".npz")) as blob:
        for key, var in net.params.items():
            var.data = blob[key]
    return net, sidecar["step"]

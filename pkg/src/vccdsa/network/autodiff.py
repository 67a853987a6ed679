"""Minimal reverse-mode autodiff over ndarrays.

Only the handful of ops the reconstruction network needs: convolution,
rectifier, concat, residual add, average pooling, nearest upsampling,
and L1 means. Values are plain numpy arrays; `Var` wraps them with a
gradient slot and a backward closure.
"""

from __future__ import annotations

import numpy as np

from .. import kernels


class Var:
    __slots__ = ("data", "grad", "parents", "backward_fn")

    def __init__(self, data: np.ndarray, parents: tuple = (), backward_fn=None):
        self.data = data
        self.grad = None
        self.parents = parents
        self.backward_fn = backward_fn

    @property
    def shape(self):
        return self.data.shape


def _accum(var: Var, g) -> None:
    if var.grad is None:
        var.grad = g.copy() if isinstance(g, np.ndarray) else g
    else:
        var.grad = var.grad + g


def backward(root: Var) -> None:
    """Reverse-accumulate gradients from a scalar root."""
    topo: list[Var] = []
    seen: set[int] = set()
    stack: list[tuple[Var, bool]] = [(root, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if id(p) not in seen:
                stack.append((p, False))
    root.grad = np.float64(1.0)
    for node in reversed(topo):
        if node.backward_fn is not None and node.grad is not None:
            node.backward_fn(node.grad)


def zero_grads(vars_: list[Var] | dict) -> None:
    items = vars_.values() if isinstance(vars_, dict) else vars_
    for v in items:
        v.grad = None


def conv2d(x: Var, w: Var, b: Var, stride: int = 1) -> Var:
    """NHWC 'same' convolution. Patch matrices from the forward pass are
    cached for backward; input gradients are skipped for graph leaves."""
    out, cache = kernels.conv2d_forward(x.data, w.data, b.data, stride, return_cache=True)
    need_gx = x.backward_fn is not None

    def bwd(g):
        g = np.ascontiguousarray(g)
        gx, gw, gb = kernels.conv2d_backward(
            x.data, w.data, g, stride, cache=cache, need_gx=need_gx
        )
        if need_gx:
            _accum(x, gx)
        _accum(w, gw)
        _accum(b, gb)

    return Var(out, (x, w, b), bwd)


def relu(x: Var) -> Var:
    mask = x.data > 0
    out = np.where(mask, x.data, 0.0).astype(x.data.dtype)

    def bwd(g):
        _accum(x, g * mask)

    return Var(out, (x,), bwd)


def add(a: Var, b: Var) -> Var:
    out = a.data + b.data

    def bwd(g):
        _accum(a, g)
        _accum(b, g)

    return Var(out, (a, b), bwd)


def concat(parts: list[Var]) -> Var:
    """Concatenate NHWC feature maps along the channel axis."""
    out = np.concatenate([p.data for p in parts], axis=3)
    splits = np.cumsum([p.data.shape[3] for p in parts])[:-1]

    def bwd(g):
        for p, gp in zip(parts, np.split(g, splits, axis=3)):
            _accum(p, gp)

    return Var(out, tuple(parts), bwd)


def avgpool(x: Var, factor: int) -> Var:
    if factor == 1:
        return x
    n, h, w, c = x.data.shape
    out = x.data.reshape(n, h // factor, factor, w // factor, factor, c).mean(axis=(2, 4))

    def bwd(g):
        gx = np.broadcast_to(
            g[:, :, None, :, None, :] / (factor * factor),
            (n, h // factor, factor, w // factor, factor, c),
        ).reshape(n, h, w, c)
        _accum(x, gx)

    return Var(out, (x,), bwd)


def upsample2(x: Var) -> Var:
    """Nearest-neighbor x2 upsampling."""
    n, h, w, c = x.data.shape
    out = np.repeat(np.repeat(x.data, 2, axis=1), 2, axis=2)

    def bwd(g):
        gx = g.reshape(n, h, 2, w, 2, c).sum(axis=(2, 4))
        _accum(x, gx)

    return Var(out, (x,), bwd)


def batch_slice(x: Var, start: int, stop: int) -> Var:
    out = x.data[start:stop]

    def bwd(g):
        gx = np.zeros_like(x.data)
        gx[start:stop] = g
        _accum(x, gx)

    return Var(out, (x,), bwd)


def l1_mean(a: Var, b: Var) -> Var:
    """Mean absolute difference between two feature maps, as a scalar Var."""
    diff = a.data - b.data
    out = np.float64(np.abs(diff).mean())
    n = diff.size

    def bwd(g):
        s = (g / n) * np.sign(diff)
        _accum(a, s)
        _accum(b, -s)

    return Var(out, (a, b), bwd)


def scale(x: Var, c: float) -> Var:
    out = x.data * c

    def bwd(g):
        _accum(x, g * c)

    return Var(out, (x,), bwd)


def vsum(parts: list[Var]) -> Var:
    out = sum(p.data for p in parts)

    def bwd(g):
        for p in parts:
            _accum(p, g)

    return Var(out, tuple(parts), bwd)


def constant(data: np.ndarray) -> Var:
    return Var(np.asarray(data))

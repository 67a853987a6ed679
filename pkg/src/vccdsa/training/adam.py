"""Adam optimizer over the network's named parameter dict."""

from __future__ import annotations

import numpy as np

from ..network.autodiff import Var


class AdamState:
    def __init__(self, params: dict[str, Var]):
        self.m = {k: np.zeros_like(v.data) for k, v in params.items()}
        self.v = {k: np.zeros_like(v.data) for k, v in params.items()}
        self.t = 0


def adam_step(
    params: dict[str, Var],
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    state.t += 1
    bc1 = 1.0 - beta1**state.t
    bc2 = 1.0 - beta2**state.t
    for key, var in params.items():
        g = var.grad
        if g is None:
            continue
        m = state.m[key]
        v = state.v[key]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * np.square(g)
        var.data -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)

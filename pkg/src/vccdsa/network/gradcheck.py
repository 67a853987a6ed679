"""Finite-difference verification of the training objective's gradients."""

from __future__ import annotations

import numpy as np

from . import autodiff as ad
from .model import ArchConfig, Network, build_network


def dual_objective(net: Network, mask_i, mask_j, live, label, lam: float) -> ad.Var:
    """The full two-branch objective on single frames, as a graph."""
    h, w = live.shape
    x = np.empty((2, h, w, 2), dtype=net.dtype)
    x[0, :, :, 0] = mask_i
    x[0, :, :, 1] = live
    x[1, :, :, 0] = mask_j
    x[1, :, :, 1] = live
    out = net.forward_batch(x)
    v_i = ad.batch_slice(out, 0, 1)
    v_j = ad.batch_slice(out, 1, 2)
    lab = ad.constant(label[None, :, :, None].astype(net.dtype))
    f1 = ad.l1_mean(v_i, lab)
    f2 = ad.l1_mean(v_j, lab)
    con = ad.l1_mean(v_i, v_j)
    return ad.vsum([
        ad.scale(f1, (1.0 - lam) / 2.0),
        ad.scale(f2, (1.0 - lam) / 2.0),
        ad.scale(con, lam),
    ])


def check_gradients(
    data_seed: int = 7,
    pick_seed: int = 2024,
    n_params: int = 50,
    step: float = 1e-4,
    lam: float = 0.85,
    size: int = 16,
) -> float:
    """Max relative error between analytic and central-difference gradients
    over `n_params` uniformly sampled parameters of a tiny double-precision
    network. The objective is piecewise linear, so away from activation and
    L1 kinks the central difference is exact."""
    rng = np.random.default_rng(data_seed)
    arch = ArchConfig(scale_factor=0.0625, rdb_growth=8)
    net = build_network(arch, data_seed, dtype=np.float64)
    mask_i = rng.random((size, size))
    mask_j = rng.random((size, size))
    live = rng.random((size, size))
    label = rng.random((size, size))

    def value() -> float:
        return float(dual_objective(net, mask_i, mask_j, live, label, lam).data)

    root = dual_objective(net, mask_i, mask_j, live, label, lam)
    ad.zero_grads(net.params)
    ad.backward(root)

    names = sorted(net.params)
    cum = np.cumsum([net.params[k].data.size for k in names])
    prng = np.random.default_rng(pick_seed)
    worst = 0.0
    for gidx in prng.choice(cum[-1], size=n_params, replace=False):
        ki = int(np.searchsorted(cum, gidx, side="right"))
        flat = net.params[names[ki]].data.ravel()
        idx = int(gidx - (cum[ki - 1] if ki else 0))
        orig = flat[idx]
        flat[idx] = orig + step
        f_plus = value()
        flat[idx] = orig - step
        f_minus = value()
        flat[idx] = orig
        numeric = (f_plus - f_minus) / (2.0 * step)
        analytic = net.params[names[ki]].grad.ravel()[idx]
        rel = abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-8)
        worst = max(worst, rel)
    return worst

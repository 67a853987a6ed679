"""Compare the compiled and pure-numpy kernel backends.

Run: python3 benchmarks/bench_kernels.py [--repeats N] [--size S]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vccdsa import backend
from vccdsa.kernels import _numba, _numpy


def timeit(fn, repeats: int) -> float:
    fn()  # warmup (and JIT compile for the numba path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best * 1e3


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--size", type=int, default=256)
    args = ap.parse_args()
    if not backend.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    s = args.size
    frame = rng.random((s, s))
    ys = np.clip(rng.normal(s / 2, s / 4, (s, s)), 0, s - 1)
    xs = np.clip(rng.normal(s / 2, s / 4, (s, s)), 0, s - 1)
    x = rng.random((4, s // 4, s // 4, 32), dtype=np.float32)
    w = rng.standard_normal((32, 32, 3, 3)).astype(np.float32)
    b = np.zeros(32, dtype=np.float32)
    gy = rng.random((4, s // 4, s // 4, 32), dtype=np.float32)

    def conv_bwd(mod):
        def run():
            y, cache = mod.conv2d_forward(x, w, b, 1, return_cache=True)
            mod.conv2d_backward(x, w, gy, 1, cache, True)
        return run

    cases = [
        ("warp_bilinear", lambda m: (lambda: m.warp_bilinear(frame, ys, xs))),
        ("shift_replicate", lambda m: (lambda: m.shift_replicate(frame, 3, -2))),
        ("sad_search r=8", lambda m: (lambda: m.sad_search(frame, frame, 8, 1))),
        ("conv2d_forward", lambda m: (lambda: m.conv2d_forward(x, w, b, 1))),
        ("conv fwd+bwd", conv_bwd),
    ]

    print(f"{'kernel':<18}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, make in cases:
        t_np = timeit(make(_numpy), args.repeats)
        t_nb = timeit(make(_numba), args.repeats)
        print(f"{name:<18}{t_np:>10.2f}{t_nb:>10.2f}{t_np / t_nb:>8.2f}x")


if __name__ == "__main__":
    main()

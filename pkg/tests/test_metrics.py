import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vccdsa.metrics import PSNR_CAP_DB, SsimParams, _gaussian_window, psnr, psnr_from_mse, ssim


def naive_ssim(x, y, params=SsimParams()):
    """Independent window-by-window reference with explicit loops."""
    k = params.window_size
    win = _gaussian_window(k, params.sigma)
    c1 = (params.k1 * params.dynamic_range) ** 2
    c2 = (params.k2 * params.dynamic_range) ** 2
    vals = []
    for i in range(x.shape[0] - k + 1):
        for j in range(x.shape[1] - k + 1):
            wx = x[i:i + k, j:j + k]
            wy = y[i:i + k, j:j + k]
            mx = (win * wx).sum()
            my = (win * wy).sum()
            vx = (win * wx * wx).sum() - mx * mx
            vy = (win * wy * wy).sum() - my * my
            cov = (win * wx * wy).sum() - mx * my
            vals.append(((2 * mx * my + c1) * (2 * cov + c2))
                        / ((mx * mx + my * my + c1) * (vx + vy + c2)))
    return float(np.mean(vals)) * 100.0


def naive_psnr(x, y, max_val=1.0):
    total = 0.0
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            total += (x[i, j] - y[i, j]) ** 2
    mse = total / x.size
    if mse == 0.0:
        return PSNR_CAP_DB
    return 20.0 * np.log10(max_val) - 10.0 * np.log10(mse)


def test_ssim_self_is_100():
    x = np.random.default_rng(0).random((32, 32))
    assert abs(ssim(x, x) - 100.0) < 1e-9


def test_ssim_constant_zero_vs_one():
    zero = np.zeros((16, 16))
    one = np.ones((16, 16))
    c1 = (0.01 * 1.0) ** 2
    expected = 100.0 * c1 / (1.0 + c1)
    assert abs(ssim(zero, one) - expected) < 1e-9


def test_ssim_symmetric():
    rng = np.random.default_rng(1)
    a, b = rng.random((20, 20)), rng.random((20, 20))
    assert ssim(a, b) == ssim(b, a)


def test_ssim_matches_naive_reference():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a, b = rng.random((24, 24)), rng.random((24, 24))
        assert abs(ssim(a, b) - naive_ssim(a, b)) < 1e-6


def test_ssim_rejects_mismatch_and_small_frames():
    with pytest.raises(ValueError):
        ssim(np.zeros((16, 16)), np.zeros((16, 24)))
    with pytest.raises(ValueError):
        ssim(np.zeros((8, 8)), np.zeros((8, 8)))
    with pytest.raises(ValueError):
        SsimParams(window_size=10)
    with pytest.raises(ValueError):
        SsimParams(k1=0.0)


def test_psnr_known_values():
    x = np.zeros((10, 10))
    y = np.full((10, 10), 0.1)  # MSE = 0.01
    assert abs(psnr(x, y, max_val=1.0) - 20.0) < 1e-6
    assert abs(psnr_from_mse(1.0, max_val=255.0) - 48.1308) < 1e-3
    assert psnr(x, x) == PSNR_CAP_DB


def test_psnr_matches_naive_reference():
    rng = np.random.default_rng(9)
    for _ in range(10):
        a, b = rng.random((20, 20)), rng.random((20, 20))
        assert abs(psnr(a, b) - naive_psnr(a, b)) < 1e-6


def test_psnr_monotone_in_noise_amplitude():
    rng = np.random.default_rng(3)
    x = rng.random((32, 32))
    noise = rng.uniform(-1, 1, x.shape)
    values = [psnr(x, np.clip(x + amp * noise, 0, 1)) for amp in (0.01, 0.02, 0.05, 0.1)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_psnr_rejects_bad_args():
    with pytest.raises(ValueError):
        psnr(np.zeros((8, 8)), np.zeros((8, 9)))
    with pytest.raises(ValueError):
        psnr(np.zeros((8, 8)), np.zeros((8, 8)), max_val=0.0)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_psnr_symmetric_property(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((12, 12)), rng.random((12, 12))
    assert psnr(a, b) == psnr(b, a)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_ssim_bounded_property(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((14, 14)), rng.random((14, 14))
    assert ssim(a, b) <= 100.0 + 1e-9

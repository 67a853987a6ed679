import numpy as np
import pytest
from scipy.signal import correlate2d

from vccdsa import backend, kernels
from vccdsa.kernels import _numba, _numpy


@pytest.fixture(autouse=True)
def restore_backend():
    prev = backend.get_backend()
    yield
    backend.set_backend(prev)


def test_backend_validation():
    with pytest.raises(ValueError):
        backend.set_backend("cuda")
    backend.set_backend("numpy")
    assert backend.get_backend() == "numpy"
    assert backend.resolve("conv2d_forward") == "numpy"
    assert backend.resolve("warp_bilinear") == "numpy"


def test_auto_dispatch_policy():
    backend.set_backend("auto")
    assert backend.resolve("conv2d_forward") == "numpy"
    assert backend.resolve("conv2d_backward") == "numpy"
    assert backend.resolve("warp_bilinear") == "numba"
    assert backend.resolve("sad_search") == "numba"


def _conv_reference(x, w, b, stride):
    """Independent zero-padded cross-correlation oracle via scipy."""
    n, h, wd, cin = x.shape
    cout = w.shape[0]
    out = np.zeros((n, h, wd, cout))
    for ni in range(n):
        for o in range(cout):
            acc = np.zeros((h, wd))
            for c in range(cin):
                acc += correlate2d(x[ni, :, :, c], w[o, c], mode="same", boundary="fill")
            out[ni, :, :, o] = acc + b[o]
    return np.ascontiguousarray(out[:, ::stride, ::stride, :])


@pytest.mark.parametrize("stride", [1, 2])
def test_conv_forward_matches_scipy_reference(stride):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((2, 12, 12, 3))
    w = rng.standard_normal((5, 3, 3, 3))
    b = rng.standard_normal(5)
    ref = _conv_reference(x, w, b, stride)
    for mod in (_numpy, _numba):
        out = mod.conv2d_forward(x, w, b, stride)
        assert np.allclose(out, ref, atol=1e-10), mod.__name__


@pytest.mark.parametrize("stride", [1, 2])
def test_conv_backward_backends_agree(stride):
    rng = np.random.default_rng(1)
    x = rng.standard_normal((2, 8, 8, 4))
    w = rng.standard_normal((6, 4, 3, 3))
    b = np.zeros(6)
    out_np, cache = _numpy.conv2d_forward(x, w, b, stride, return_cache=True)
    gy = rng.standard_normal(out_np.shape)
    gx_np, gw_np, gb_np = _numpy.conv2d_backward(x, w, gy, stride, cache, True)
    gx_nb, gw_nb, gb_nb = _numba.conv2d_backward(x, w, gy, stride, None, True)
    assert np.allclose(gx_np, gx_nb, atol=1e-10)
    assert np.allclose(gw_np, gw_nb, atol=1e-10)
    assert np.allclose(gb_np, gb_nb, atol=1e-10)


def test_warp_bilinear_backends_agree():
    rng = np.random.default_rng(2)
    src = rng.random((24, 24))
    ys = rng.uniform(-3, 27, (24, 24))
    xs = rng.uniform(-3, 27, (24, 24))
    assert np.allclose(_numpy.warp_bilinear(src, ys, xs),
                       _numba.warp_bilinear(src, ys, xs), atol=1e-12)


def test_warp_bilinear_identity_grid():
    rng = np.random.default_rng(3)
    src = rng.random((16, 16))
    ys, xs = np.meshgrid(np.arange(16.0), np.arange(16.0), indexing="ij")
    for mod in (_numpy, _numba):
        assert np.allclose(mod.warp_bilinear(src, ys, xs), src, atol=1e-14)


def test_shift_replicate_semantics_and_agreement():
    rng = np.random.default_rng(4)
    img = rng.random((10, 10))
    for dy, dx in ((0, 0), (2, -3), (-1, 1), (9, 9)):
        a = _numpy.shift_replicate(img, dy, dx)
        b = _numba.shift_replicate(img, dy, dx)
        assert np.array_equal(a, b)
    shifted = kernels.shift_replicate(img, 2, 0)
    assert np.array_equal(shifted[2:, :], img[:-2, :])
    assert np.array_equal(shifted[0], img[0])  # replicated edge


def test_sad_search_backends_agree_and_format():
    rng = np.random.default_rng(5)
    live = rng.random((20, 20))
    mask = rng.random((20, 20))
    a = _numpy.sad_search(live, mask, 3, 1)
    b = _numba.sad_search(live, mask, 3, 1)
    assert a.shape == (49, 3)
    assert np.allclose(a, b, atol=1e-12)
    offsets = [tuple(row[:2]) for row in a]
    assert offsets == sorted(offsets)  # lexicographic (dy, dx) rows


def test_dispatch_respects_set_backend():
    rng = np.random.default_rng(6)
    x = rng.standard_normal((1, 8, 8, 2))
    w = rng.standard_normal((3, 2, 3, 3))
    b = np.zeros(3)
    backend.set_backend("numpy")
    out_np = kernels.conv2d_forward(x, w, b)
    backend.set_backend("numba")
    out_nb = kernels.conv2d_forward(x, w, b)
    assert np.allclose(out_np, out_nb, atol=1e-10)

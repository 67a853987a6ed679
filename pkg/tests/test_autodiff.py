import numpy as np
import pytest

from vccdsa.network import autodiff as ad
from vccdsa.network.gradcheck import check_gradients


def tracked(data):
    """Leaf Var whose input gradient is requested (non-None backward_fn)."""
    return ad.Var(np.asarray(data, dtype=np.float64), (), lambda g: None)


def fd_grad(fn, x, h=1e-6):
    """Central finite differences of a scalar function of an ndarray."""
    g = np.zeros_like(x)
    flat = x.ravel()
    gf = g.ravel()
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = fn()
        flat[i] = orig - h
        fm = fn()
        flat[i] = orig
        gf[i] = (fp - fm) / (2 * h)
    return g


def scalar_of(graph_fn, x):
    root = graph_fn(tracked(x))
    return float(root.data)


def check_op(graph_fn, x, tol=1e-7):
    xv = tracked(x)
    root = graph_fn(xv)
    ad.backward(root)
    numeric = fd_grad(lambda: scalar_of(graph_fn, x), x)
    assert np.allclose(xv.grad, numeric, atol=tol), np.abs(xv.grad - numeric).max()


def _readout(v):
    # smooth scalar readout: l1 distance to a constant far below the data
    # range, so no |.| kink is crossed during finite differencing
    target = ad.constant(np.full(v.data.shape, -10.0))
    return ad.l1_mean(v, target)


def test_relu_gradient():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((2, 4, 4, 3)) + 0.05  # keep away from the kink
    check_op(lambda v: _readout(ad.relu(v)), x)


def test_avgpool_gradient():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((1, 4, 4, 2))
    check_op(lambda v: _readout(ad.avgpool(v, 2)), x)


def test_upsample2_gradient():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((1, 3, 3, 2))
    check_op(lambda v: _readout(ad.upsample2(v)), x)


def test_concat_and_slice_gradient():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((2, 3, 3, 2))

    def graph(v):
        c = ad.concat([v, ad.scale(v, 2.0)])
        return _readout(ad.batch_slice(c, 0, 1))

    check_op(graph, x)


def test_conv2d_gradient_wrt_input_and_weights():
    rng = np.random.default_rng(4)
    x = rng.standard_normal((1, 6, 6, 2))
    w0 = rng.standard_normal((3, 2, 3, 3)) * 0.3
    b0 = rng.standard_normal(3) * 0.1
    wv = ad.Var(w0.copy())
    bv = ad.Var(b0.copy())

    def graph(v):
        return _readout(ad.conv2d(v, wv, bv, stride=1))

    xv = tracked(x)
    root = graph(xv)
    ad.backward(root)
    gx = fd_grad(lambda: scalar_of(graph, x), x)
    assert np.allclose(xv.grad, gx, atol=1e-6)
    gw = fd_grad(lambda: scalar_of(graph, x), wv.data)
    assert np.allclose(wv.grad, gw, atol=1e-6)
    gb = fd_grad(lambda: scalar_of(graph, x), bv.data)
    assert np.allclose(bv.grad, gb, atol=1e-6)


def test_conv2d_skips_leaf_input_gradient():
    rng = np.random.default_rng(5)
    leaf = ad.constant(rng.standard_normal((1, 4, 4, 2)))
    w = ad.Var(rng.standard_normal((2, 2, 3, 3)))
    b = ad.Var(np.zeros(2))
    root = _readout(ad.conv2d(leaf, w, b))
    ad.backward(root)
    assert leaf.grad is None
    assert w.grad is not None and b.grad is not None


def test_l1_mean_matches_bruteforce():
    rng = np.random.default_rng(6)
    a = rng.random((2, 5, 5, 1))
    b = rng.random((2, 5, 5, 1))
    out = ad.l1_mean(ad.constant(a), ad.constant(b))
    brute = sum(abs(float(x) - float(y)) for x, y in zip(a.ravel(), b.ravel())) / a.size
    assert abs(float(out.data) - brute) < 1e-12


def test_diamond_graph_accumulates():
    x = tracked(np.array([[[[2.0]]]]))
    y = ad.add(x, x)  # dy/dx = 2
    root = ad.l1_mean(y, ad.constant(np.array([[[[0.0]]]])))
    ad.backward(root)
    assert np.allclose(x.grad, 2.0)


def test_scale_zero_kills_gradient():
    rng = np.random.default_rng(7)
    x = tracked(rng.standard_normal((1, 4, 4, 1)))
    root = ad.scale(_readout(x), 0.0)
    ad.backward(root)
    assert np.allclose(x.grad, 0.0)


def test_zero_grads():
    x = tracked(np.ones((1, 2, 2, 1)))
    ad.backward(_readout(x))
    assert x.grad is not None
    ad.zero_grads([x])
    assert x.grad is None


def test_full_objective_gradcheck_small():
    worst = check_gradients(data_seed=7, pick_seed=2024, n_params=10)
    assert worst < 1e-3, worst

import numpy as np
import pytest

from vccdsa.errors import ConfigError
from vccdsa.network import autodiff as ad
from vccdsa.network.model import (
    ArchConfig,
    build_network,
    load_checkpoint,
    param_count,
    rdb_forward,
    save_checkpoint,
    tail_in_channels,
)

from conftest import TINY_ARCH


def test_tail_input_channels_at_scale_1():
    assert tail_in_channels(ArchConfig()) == 64


def test_param_count_full_scale_near_reference():
    count = param_count(ArchConfig())
    assert count == 19_008_769
    assert abs(count - 19_320_000) / 19_320_000 < 0.25


def test_param_count_matches_built_network():
    net = build_network(TINY_ARCH, seed=0)
    assert net.param_count() == param_count(TINY_ARCH)


def test_build_deterministic():
    a = build_network(TINY_ARCH, seed=3)
    b = build_network(TINY_ARCH, seed=3)
    assert np.array_equal(a.param_vector(), b.param_vector())
    c = build_network(TINY_ARCH, seed=4)
    assert not np.array_equal(a.param_vector(), c.param_vector())


def test_forward_shape_and_determinism(rng):
    net = build_network(TINY_ARCH, seed=0)
    mask = rng.random((32, 32))
    live = rng.random((32, 32))
    out1 = net.forward(mask, live)
    out2 = net.forward(mask, live)
    assert out1.shape == (32, 32)
    assert np.array_equal(out1, out2)


def test_forward_rejects_bad_shapes(rng):
    net = build_network(TINY_ARCH, seed=0)
    with pytest.raises(ValueError):
        net.forward(rng.random((20, 20)), rng.random((20, 20)))  # not /8
    with pytest.raises(ValueError):
        net.forward(rng.random((32, 32)), rng.random((32, 24)))


def test_zero_tail_gives_zero_output(rng):
    net = build_network(TINY_ARCH, seed=0)
    net.params["tail.w"].data[:] = 0.0
    net.params["tail.b"].data[:] = 0.0
    out = net.forward(rng.random((32, 32)), rng.random((32, 32)))
    assert not out.any()


def test_rdb_residual_zero_identity(rng):
    net = build_network(TINY_ARCH, seed=1)
    last = f"rdb1.l{TINY_ARCH.rdb_layers}"
    net.params[f"{last}.w"].data[:] = 0.0
    net.params[f"{last}.b"].data[:] = 0.0
    c2 = TINY_ARCH.ch(TINY_ARCH.stage_channels[1])
    x = ad.constant(rng.random((1, 8, 8, c2)).astype(np.float32))
    out = rdb_forward(net, "rdb1", x)
    assert np.array_equal(out.data, x.data)


def test_rdb_preserves_channel_count(rng):
    net = build_network(TINY_ARCH, seed=1)
    c2 = TINY_ARCH.ch(TINY_ARCH.stage_channels[1])
    x = ad.constant(rng.random((1, 8, 8, c2)).astype(np.float32))
    assert rdb_forward(net, "rdb1", x).data.shape[3] == c2


def test_rdb_receptive_field_spans_11(rng):
    """Five stacked 3x3 layers: a center perturbation must reach >= 5 px out."""
    net = build_network(TINY_ARCH, seed=2)
    c2 = TINY_ARCH.ch(TINY_ARCH.stage_channels[1])
    base = rng.random((1, 16, 16, c2)).astype(np.float32)
    bumped = base.copy()
    bumped[0, 8, 8, 0] += 0.5
    diff = np.abs(rdb_forward(net, "rdb1", ad.constant(bumped)).data
                  - rdb_forward(net, "rdb1", ad.constant(base)).data).sum(axis=(0, 3))
    ys, xs = np.nonzero(diff)
    assert ys.max() - ys.min() + 1 >= 11
    assert xs.max() - xs.min() + 1 >= 11


def test_spatial_equivariance_to_shift_8():
    """Fully convolutional: moving a blob by 8 px moves the response by 8 px
    in regions whose receptive field stays clear of the frame border."""
    net = build_network(TINY_ARCH, seed=0)
    h = w = 96

    def frame_with_blob(cy):
        f = np.full((h, w), 0.3)
        f[cy - 2 : cy + 2, 46:50] += 0.4
        return f

    mask = np.full((h, w), 0.3)
    out_a = net.forward(mask, frame_with_blob(40))
    out_b = net.forward(mask, frame_with_blob(48))
    # compare the central band, shifted by 8
    a = out_a[32:48, 40:56]
    b = out_b[40:56, 40:56]
    assert np.abs(a - b).max() < 1e-4


def test_checkpoint_roundtrip_bit_identical(tmp_path, rng):
    net = build_network(TINY_ARCH, seed=5)
    mask, live = rng.random((32, 32)), rng.random((32, 32))
    before = net.forward(mask, live)
    save_checkpoint(net, tmp_path / "ckpt.npz", step=17)
    loaded, step = load_checkpoint(tmp_path / "ckpt.npz")
    assert step == 17
    assert loaded.arch == net.arch
    assert np.array_equal(loaded.forward(mask, live), before)


def test_arch_validation():
    with pytest.raises(ConfigError):
        ArchConfig(kernel=4).validate()
    with pytest.raises(ConfigError):
        ArchConfig(scale_factor=0.0).validate()
    with pytest.raises(ConfigError):
        ArchConfig(rdb_layers=1).validate()


def test_scaled_channels_floor_at_one():
    arch = ArchConfig(scale_factor=0.01, rdb_growth=1)
    assert arch.ch(32) == 1
    arch.validate()
    net = build_network(arch, 0)
    assert net.param_count() > 0


def test_default_growth_is_twice_bottleneck():
    assert ArchConfig().growth == 256
    assert ArchConfig(scale_factor=0.25).growth == 64
    assert ArchConfig(rdb_growth=32).growth == 32

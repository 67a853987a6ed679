import numpy as np
import pytest

from vccdsa.phantom.motion import (
    ELASTIC_PX_PER_LEVEL,
    MotionField,
    ROT_DEG_PER_LEVEL,
    SCALE_PER_LEVEL,
    SHEAR_PER_LEVEL,
    TRANS_PX_PER_LEVEL,
    identity_motion,
    mean_displacement,
    sample_motion,
    warp,
)


def test_level0_is_exact_identity():
    m = sample_motion(0, seed=99)
    assert m.is_identity
    assert m.rotation_deg == 0.0 and m.translation == (0.0, 0.0)
    assert m.scale == (1.0, 1.0) and m.shear == 0.0 and m.elastic_amp == 0.0


def test_level_out_of_range():
    with pytest.raises(ValueError):
        sample_motion(6, 0)
    with pytest.raises(ValueError):
        sample_motion(-1, 0)


@pytest.mark.parametrize("level", [1, 3, 5])
def test_parameter_bounds(level):
    for seed in range(20):
        m = sample_motion(level, seed)
        assert abs(m.rotation_deg) <= level * ROT_DEG_PER_LEVEL
        assert all(abs(t) <= level * TRANS_PX_PER_LEVEL for t in m.translation)
        assert all(abs(s - 1.0) <= level * SCALE_PER_LEVEL for s in m.scale)
        assert abs(m.shear) <= level * SHEAR_PER_LEVEL
        assert m.elastic_amp == level * ELASTIC_PX_PER_LEVEL
        assert np.abs(m.elastic_dy).max() <= m.elastic_amp
        assert np.abs(m.elastic_dx).max() <= m.elastic_amp


def test_sampling_deterministic():
    a = sample_motion(4, 7)
    b = sample_motion(4, 7)
    assert a.to_dict() == b.to_dict()


def test_mean_displacement_strictly_increasing_in_level():
    n_seeds = 200
    means = []
    for level in range(6):
        vals = [mean_displacement(sample_motion(level, s), 64, 64) for s in range(n_seeds)]
        means.append(float(np.mean(vals)))
    assert means[0] == 0.0
    assert all(a < b for a, b in zip(means, means[1:]))
    # level 3 sits strictly between its neighbors
    assert means[2] < means[3] < means[4]


def test_warp_identity_bit_exact():
    rng = np.random.default_rng(0)
    frame = rng.random((32, 32))
    out = warp(frame, identity_motion())
    assert np.array_equal(out, frame)
    assert out is not frame  # defensive copy


def test_warp_integer_translation_exact():
    rng = np.random.default_rng(1)
    frame = rng.random((64, 64))
    # translation is stored at the 256^2 reference; 64^2 scales it by 0.25
    m = MotionField(level=1, translation=(12.0, 0.0))  # 3 px down at 64^2
    out = warp(frame, m)
    assert np.allclose(out[3:, :], frame[:-3, :], atol=1e-12)


def test_warp_rotation_roundtrip_small_error():
    # smooth field: interpolation loss on band-limited content stays small
    ys, xs = np.meshgrid(np.linspace(0, 4 * np.pi, 64), np.linspace(0, 4 * np.pi, 64),
                         indexing="ij")
    frame = 0.5 + 0.25 * np.sin(ys) * np.cos(xs)
    fwd = warp(frame, MotionField(level=5, rotation_deg=5.0))
    back = warp(fwd, MotionField(level=5, rotation_deg=-5.0))
    interior = (slice(8, -8), slice(8, -8))
    mad = np.abs(back[interior] - frame[interior]).mean()
    assert mad < 0.01


def test_motion_dict_roundtrip():
    m = sample_motion(3, 11)
    m2 = MotionField.from_dict(m.to_dict())
    assert m2.to_dict() == m.to_dict()
    assert np.array_equal(m2.elastic_dy, m.elastic_dy)


def test_mean_displacement_identity_is_zero():
    assert mean_displacement(identity_motion(), 32, 32) == 0.0

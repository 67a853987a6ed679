import json

import numpy as np
import pytest

from vccdsa.phantom import load_sequence, save_sequence
from vccdsa.phantom.io import frame_to_png, png_to_frame

QUANT = 1.0 / 65535.0


def test_png_roundtrip_quantization(tmp_path, rng):
    frame = rng.random((32, 32))
    frame_to_png(frame, tmp_path / "f.png")
    back = png_to_frame(tmp_path / "f.png")
    assert np.abs(back - frame).max() <= 0.5 * QUANT + 1e-12


def test_png_roundtrip_exact_at_grid(tmp_path):
    frame = np.round(np.linspace(0, 1, 1024) * 65535).reshape(32, 32) / 65535.0
    frame_to_png(frame, tmp_path / "f.png")
    assert np.array_equal(png_to_frame(tmp_path / "f.png"), frame)


def test_sequence_roundtrip(tmp_path, level2_seq):
    save_sequence(level2_seq, tmp_path / "seq")
    loaded = load_sequence(tmp_path / "seq")
    assert loaded.sequence_id == level2_seq.sequence_id
    assert loaded.level == level2_seq.level
    assert loaded.config.to_dict() == level2_seq.config.to_dict()
    assert np.allclose(loaded.contrast, level2_seq.contrast)
    for a, b in zip(loaded.mask_motions, level2_seq.mask_motions):
        assert a.to_dict() == b.to_dict()
    for group in ("masks", "lives", "vessels_gt", "weak_labels"):
        for a, b in zip(getattr(loaded, group), getattr(level2_seq, group)):
            assert np.abs(a - b).max() <= QUANT


def test_sequence_roundtrip_deterministic_bytes(tmp_path, level2_seq):
    save_sequence(level2_seq, tmp_path / "a")
    save_sequence(level2_seq, tmp_path / "b")
    for path in sorted((tmp_path / "a").iterdir()):
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()


def test_unknown_format_version_rejected(tmp_path, level2_seq):
    save_sequence(level2_seq, tmp_path / "seq")
    manifest = json.loads((tmp_path / "seq" / "manifest.json").read_text())
    manifest["format_version"] = 999
    (tmp_path / "seq" / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(ValueError):
        load_sequence(tmp_path / "seq")

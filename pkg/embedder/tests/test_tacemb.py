import json
import shutil
import struct
import subprocess

import numpy as np
import pytest

from tacsum_embed import render_tacemb, write_tacemb

_needs_tacsum = pytest.mark.skipif(
    shutil.which("tacsum") is None, reason="tacsum CLI not installed"
)


def _sample_payload():
    rng = np.random.default_rng(3)
    feats = rng.normal(size=(6, 5)).astype(np.float32)
    indices = [2, 9, 17, 24, 31, 38]
    return feats, indices


def test_header_layout():
    feats, indices = _sample_payload()
    blob = render_tacemb(feats, indices, total_frames=40, fps=8.0, rate=1.5)
    magic, version, count, dim, total, fps, rate = struct.unpack_from("<4sIIIQff", blob)
    assert magic == b"TACE"
    assert version == 1
    assert (count, dim, total) == (6, 5, 40)
    assert fps == pytest.approx(8.0)
    assert rate == pytest.approx(1.5)
    assert len(blob) == 32 + 6 * 5 * 4 + 6 * 4


def test_body_roundtrips_bytes():
    feats, indices = _sample_payload()
    blob = render_tacemb(feats, indices, 40, 8.0, 1.5)
    body = np.frombuffer(blob, dtype="<f4", count=30, offset=32).reshape(6, 5)
    tail = np.frombuffer(blob, dtype="<u4", count=6, offset=32 + 120)
    np.testing.assert_array_equal(body, feats)
    np.testing.assert_array_equal(tail, np.asarray(indices, dtype=np.uint32))


@pytest.mark.parametrize(
    "mutate",
    [
        dict(indices=[2, 9, 9, 24, 31, 38]),  # not increasing
        dict(indices=[2, 9, 17, 24, 31, 40]),  # out of range
        dict(total_frames=0),
        dict(fps=0.0),
        dict(rate=-1.0),
    ],
)
def test_writer_rejects_inconsistent_payloads(mutate):
    feats, indices = _sample_payload()
    kwargs = dict(features=feats, indices=indices, total_frames=40, fps=8.0, rate=1.5)
    kwargs.update(mutate)
    with pytest.raises(ValueError):
        render_tacemb(**kwargs)


def test_writer_rejects_nonfinite_features():
    feats, indices = _sample_payload()
    feats[2, 2] = np.nan
    with pytest.raises(ValueError, match="non-finite"):
        render_tacemb(feats, indices, 40, 8.0, 1.5)


def test_write_is_atomic_and_leaves_no_temp_files(tmp_path):
    feats, indices = _sample_payload()
    out = tmp_path / "a.tacemb"
    write_tacemb(out, feats, indices, 40, 8.0, 1.5)
    write_tacemb(out, feats, indices, 40, 8.0, 1.5)  # overwrite in place
    assert out.exists()
    assert list(tmp_path.glob("*.tmp")) == []
    assert len(list(tmp_path.iterdir())) == 1


@_needs_tacsum
def test_summarizer_reads_written_file(tmp_path):
    feats, indices = _sample_payload()
    out = tmp_path / "a.tacemb"
    write_tacemb(out, feats, indices, 40, 8.0, 1.5)
    run = subprocess.run(
        ["tacsum", "inspect", str(out), "--json"], capture_output=True, text=True
    )
    assert run.returncode == 0, run.stderr
    doc = json.loads(run.stdout)
    assert doc["n_samples"] == 6
    assert doc["dim"] == 5
    assert doc["total_frames"] == 40
    assert doc["fps"] == pytest.approx(8.0)
    assert doc["sample_indices"] == indices


@_needs_tacsum
def test_summarizer_rejects_bumped_version(tmp_path):
    feats, indices = _sample_payload()
    blob = bytearray(render_tacemb(feats, indices, 40, 8.0, 1.5))
    blob[4:8] = struct.pack("<I", 9)
    bad = tmp_path / "bad.tacemb"
    bad.write_bytes(bytes(blob))
    run = subprocess.run(
        ["tacsum", "inspect", str(bad), "--json"], capture_output=True, text=True
    )
    assert run.returncode == 2

import json
import os
import shutil
import subprocess
from pathlib import Path

import h5py
import numpy as np
import pytest
import scipy.io

from tacsum_embed import (
    ConvertError,
    cli,
    convert_summe,
    load_segments_h5,
    sample_indices,
    uniform_segments,
    write_tacemb,
)

_needs_tacsum = pytest.mark.skipif(
    shutil.which("tacsum") is None, reason="tacsum CLI not installed"
)

_VIDEOS = (("Alpha_Video", 90), ("Beta_Video", 120), ("Gamma_Video", 75))


def _write_mat(path, n_frames, n_users=3, fps=30.0, seed=5, drop=()):
    rng = np.random.default_rng(seed)
    user = (rng.random((n_frames, n_users)) < 0.25).astype(float)
    doc = {
        "user_score": user,
        "nFrames": float(n_frames),
        "FPS": fps,
        "gt_score": user.mean(axis=1, keepdims=True),
    }
    for key in drop:
        del doc[key]
    scipy.io.savemat(str(path), doc)


def _inclusive_thirds(n_frames):
    a, b = n_frames // 3, 2 * n_frames // 3
    return [[0, a - 1], [a, b - 1], [b, n_frames - 1]]


def _write_h5(path, entries):
    """entries: list of (video_name, inclusive change point rows)."""
    with h5py.File(path, "w") as f:
        for i, (name, points) in enumerate(entries, start=1):
            g = f.create_group(f"video_{i}")
            g.create_dataset("video_name", data=name.encode())
            g.create_dataset("change_points", data=np.asarray(points, dtype=np.int64))
    return path


@pytest.fixture
def fake_summe(tmp_path):
    gt = tmp_path / "summe" / "GT"
    gt.mkdir(parents=True)
    for seed, (name, n) in enumerate(_VIDEOS):
        _write_mat(gt / f"{name}.mat", n, seed=seed)
    h5 = _write_h5(
        tmp_path / "segments.h5", [(name, _inclusive_thirds(n)) for name, n in _VIDEOS]
    )
    return tmp_path / "summe", h5


def test_converts_every_video(fake_summe, tmp_path):
    dataset, h5 = fake_summe
    out = tmp_path / "out"
    reports = convert_summe(dataset, out, segments=h5)
    assert [r.ok for r in reports] == [True, True, True]
    assert sorted(p.name for p in out.glob("*.json")) == [
        "Alpha_Video.json",
        "Beta_Video.json",
        "Gamma_Video.json",
    ]


def test_converted_schema_and_exclusive_change_points(fake_summe, tmp_path):
    dataset, h5 = fake_summe
    out = tmp_path / "out"
    convert_summe(dataset, out, segments=h5)
    doc = json.loads((out / "Alpha_Video.json").read_text())
    assert doc["video_id"] == "Alpha_Video"
    assert doc["n_frames"] == 90
    assert doc["fps"] == pytest.approx(30.0)
    assert doc["change_points"] == [[0, 30], [30, 60], [60, 90]]
    assert len(doc["user_summaries"]) == 3
    for row in doc["user_summaries"]:
        assert len(row) == 90
        assert set(row) <= {0, 1}
    assert len(doc["gt_scores"]) == 90


def test_name_matching_survives_spaces_and_case(tmp_path):
    gt = tmp_path / "ds"
    gt.mkdir()
    _write_mat(gt / "Air_Force_One.mat", 60)
    h5 = _write_h5(tmp_path / "seg.h5", [("air force one", [[0, 29], [30, 59]])])
    reports = convert_summe(gt, tmp_path / "out", segments=h5)
    assert reports[0].ok, reports[0].message


def test_missing_field_reported_others_converted(fake_summe, tmp_path):
    dataset, h5 = fake_summe
    _write_mat(dataset / "GT" / "Broken_Video.mat", 50, drop=("user_score",))
    h5_all = _write_h5(
        tmp_path / "seg2.h5",
        [(name, _inclusive_thirds(n)) for name, n in _VIDEOS]
        + [("Broken_Video", _inclusive_thirds(50))],
    )
    out = tmp_path / "out"
    reports = convert_summe(dataset, out, segments=h5_all)
    by_id = {r.video_id: r for r in reports}
    assert not by_id["Broken_Video"].ok
    assert "user_score" in by_id["Broken_Video"].message
    assert by_id["Alpha_Video"].ok
    assert not (out / "Broken_Video.json").exists()
    assert (out / "Alpha_Video.json").exists()


def test_video_absent_from_segmentation_is_reported(fake_summe, tmp_path):
    dataset, _ = fake_summe
    h5 = _write_h5(tmp_path / "partial.h5", [("Alpha_Video", _inclusive_thirds(90))])
    reports = convert_summe(dataset, tmp_path / "out", segments=h5)
    by_id = {r.video_id: r for r in reports}
    assert by_id["Alpha_Video"].ok
    assert not by_id["Beta_Video"].ok
    assert "no change points" in by_id["Beta_Video"].message


def test_coverage_mismatch_errors_unless_clipped(tmp_path):
    gt = tmp_path / "ds"
    gt.mkdir()
    _write_mat(gt / "Short_Video.mat", 90)
    # Segmentation believes the video has 96 frames.
    h5 = _write_h5(tmp_path / "seg.h5", [("Short_Video", [[0, 47], [48, 95]])])
    reports = convert_summe(gt, tmp_path / "out1", segments=h5)
    assert not reports[0].ok
    assert "--clip-segments" in reports[0].message

    reports = convert_summe(gt, tmp_path / "out2", segments=h5, clip_segments=True)
    assert reports[0].ok
    doc = json.loads((tmp_path / "out2" / "Short_Video.json").read_text())
    assert doc["change_points"] == [[0, 48], [48, 90]]


def test_uniform_segments_fallback(fake_summe, tmp_path):
    dataset, _ = fake_summe
    out = tmp_path / "out"
    reports = convert_summe(dataset, out, uniform=40)
    assert all(r.ok for r in reports)
    doc = json.loads((out / "Alpha_Video.json").read_text())
    assert doc["change_points"] == [[0, 40], [40, 80], [80, 90]]


def test_uniform_segments_helper_covers_exactly():
    assert uniform_segments(10, 4) == [[0, 4], [4, 8], [8, 10]]
    assert uniform_segments(8, 4) == [[0, 4], [4, 8]]
    with pytest.raises(ConvertError):
        uniform_segments(10, 0)


def test_requires_exactly_one_segment_source(fake_summe, tmp_path):
    dataset, h5 = fake_summe
    with pytest.raises(ConvertError):
        convert_summe(dataset, tmp_path / "o", segments=h5, uniform=30)
    with pytest.raises(ConvertError):
        convert_summe(dataset, tmp_path / "o")


def test_load_segments_h5_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.h5"
    bad.write_bytes(b"not an hdf5 file")
    with pytest.raises(ConvertError, match="cannot open"):
        load_segments_h5(bad)


def test_cli_convert_reports_and_exit_codes(fake_summe, tmp_path, capsys):
    dataset, h5 = fake_summe
    out = tmp_path / "out"
    code = cli.main(
        ["convert-summe", str(dataset), "-o", str(out), "--segments", str(h5)]
    )
    assert code == 0
    assert "converted 3/3" in capsys.readouterr().err

    _write_mat(dataset / "GT" / "Broken_Video.mat", 50, drop=("user_score",))
    code = cli.main(
        ["convert-summe", str(dataset), "-o", str(out), "--segments", str(h5)]
    )
    err = capsys.readouterr().err
    assert code == 2
    assert "skip Broken_Video" in err


def test_cli_requires_a_segment_source(fake_summe, tmp_path, capsys):
    dataset, _ = fake_summe
    code = cli.main(["convert-summe", str(dataset), "-o", str(tmp_path / "o")])
    assert code == 1
    assert "--segments or --uniform-segments" in capsys.readouterr().err


@_needs_tacsum
def test_summarizer_baseline_runs_on_converted_corpus(fake_summe, tmp_path):
    dataset, h5 = fake_summe
    out = tmp_path / "corpus"
    convert_summe(dataset, out, segments=h5)
    run = subprocess.run(
        ["tacsum", "baseline", str(out), "--runs", "3", "--seed", "1"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stderr
    lines = run.stdout.strip().splitlines()
    assert lines[0] == "video_id,f_measure"
    assert len(lines) == 5  # header + 3 videos + mean


@_needs_tacsum
def test_summarizer_evaluates_converted_corpus_with_synthetic_embeddings(
    fake_summe, tmp_path
):
    dataset, h5 = fake_summe
    corpus = tmp_path / "corpus"
    convert_summe(dataset, corpus, segments=h5)
    rng = np.random.default_rng(11)
    for name, n in _VIDEOS:
        idx = sample_indices(n, 30.0, 4.0)
        feats = rng.normal(size=(len(idx), 6)).astype(np.float32)
        write_tacemb(corpus / f"{name}.tacemb", feats, idx, n, 30.0, 4.0)
    run = subprocess.run(
        ["tacsum", "evaluate", str(corpus), "--pca-dim", "3", "--k-max", "4", "--seed", "0"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stderr
    lines = run.stdout.strip().splitlines()
    assert lines[0] == "video_id,f_measure,n_partitions,n_keyframes"
    assert len(lines) == 5


_REAL_DIR = os.environ.get("TACSUM_SUMME_DIR")


@pytest.mark.skipif(
    not _REAL_DIR, reason="TACSUM_SUMME_DIR not set; benchmark data unavailable here"
)
def test_real_dataset_conversion(tmp_path):
    h5 = os.environ.get("TACSUM_SUMME_H5")
    assert h5, "TACSUM_SUMME_H5 must point at the precomputed change-point file"
    out = tmp_path / "out"
    reports = convert_summe(Path(_REAL_DIR), out, segments=Path(h5))
    assert sum(r.ok for r in reports) == 25
    for path in out.glob("*.json"):
        doc = json.loads(path.read_text())
        assert 15 <= len(doc["user_summaries"]) <= 18
        for row in doc["user_summaries"]:
            assert len(row) == doc["n_frames"]

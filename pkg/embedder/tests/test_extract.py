import json
import shutil
import subprocess

import pytest

from tacsum_embed import ExtractError, cli, extract_to_file
from tacsum_embed.backbones import load

from vidstub import STUB_DIM, STUB_NAME

_needs_tacsum = pytest.mark.skipif(
    shutil.which("tacsum") is None, reason="tacsum CLI not installed"
)


def test_extract_produces_expected_samples(short_video, tmp_path):
    out = tmp_path / "clip.tacemb"
    report = extract_to_file(short_video, STUB_NAME, 4.0, out)
    assert out.exists()
    assert report.n_samples == 4
    assert report.dim == STUB_DIM
    assert report.total_frames == 30
    assert report.fps == pytest.approx(30.0)


@_needs_tacsum
def test_extracted_file_round_trips_through_summarizer_inspect(short_video, tmp_path):
    out = tmp_path / "clip.tacemb"
    extract_to_file(short_video, STUB_NAME, 4.0, out)
    run = subprocess.run(
        ["tacsum", "inspect", str(out), "--json"], capture_output=True, text=True
    )
    assert run.returncode == 0, run.stderr
    doc = json.loads(run.stdout)
    assert doc["n_samples"] == 4
    assert doc["dim"] == STUB_DIM
    assert doc["total_frames"] == 30
    assert doc["sample_indices"] == [4, 12, 19, 26]


@_needs_tacsum
def test_summarizer_runs_on_extracted_file(long_video, tmp_path):
    emb = tmp_path / "long.tacemb"
    extract_to_file(long_video, STUB_NAME, 4.0, emb)
    out = tmp_path / "summary.json"
    run = subprocess.run(
        ["tacsum", "summarize", str(emb), "--pca-dim", "3", "--seed", "0", "-o", str(out)],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stderr
    doc = json.loads(out.read_text())
    assert len(doc["frame_scores"]) == 120


def test_same_video_twice_is_bit_identical(short_video, tmp_path):
    a = tmp_path / "a.tacemb"
    b = tmp_path / "b.tacemb"
    extract_to_file(short_video, STUB_NAME, 4.0, a)
    extract_to_file(short_video, STUB_NAME, 4.0, b)
    assert a.read_bytes() == b.read_bytes()


def test_batch_size_does_not_change_output(long_video, tmp_path):
    a = tmp_path / "a.tacemb"
    b = tmp_path / "b.tacemb"
    extract_to_file(long_video, STUB_NAME, 4.0, a, batch_size=1)
    extract_to_file(long_video, STUB_NAME, 4.0, b, batch_size=16)
    assert a.read_bytes() == b.read_bytes()


def test_undecodable_video_raises(tmp_path):
    fake = tmp_path / "fake.avi"
    fake.write_text("this is not a video")
    backbone = load(STUB_NAME)
    with pytest.raises(ExtractError):
        extract_to_file(fake, STUB_NAME, 4.0, tmp_path / "out.tacemb")
    assert backbone.dim == STUB_DIM  # loading the stub itself is fine


def test_missing_video_raises(tmp_path):
    with pytest.raises(ExtractError, match="no such video"):
        extract_to_file(tmp_path / "absent.avi", STUB_NAME, 4.0, tmp_path / "o.tacemb")


def test_cli_extract_with_stub(short_video, tmp_path, capsys):
    out = tmp_path / "clip.tacemb"
    code = cli.main(
        ["extract", str(short_video), "--model", STUB_NAME, "--rate", "4", "-o", str(out)]
    )
    assert code == 0
    assert out.exists()
    assert "4 samples" in capsys.readouterr().err


def test_cli_unknown_model_is_usage_error(short_video, tmp_path, capsys):
    code = cli.main(
        ["extract", str(short_video), "--model", "nope", "-o", str(tmp_path / "o.tacemb")]
    )
    assert code == 1
    assert "unknown model" in capsys.readouterr().err


def test_cli_undecodable_video_is_data_error(tmp_path, capsys):
    fake = tmp_path / "fake.avi"
    fake.write_text("still not a video")
    code = cli.main(
        ["extract", str(fake), "--model", STUB_NAME, "-o", str(tmp_path / "o.tacemb")]
    )
    assert code == 2


def test_cli_bad_rate_is_usage_error(short_video, tmp_path):
    code = cli.main(
        ["extract", str(short_video), "--model", STUB_NAME, "--rate", "0",
         "-o", str(tmp_path / "o.tacemb")]
    )
    assert code == 1


def test_cli_missing_output_flag_is_usage_error(short_video):
    with pytest.raises(SystemExit) as exc:
        cli.main(["extract", str(short_video), "--model", STUB_NAME])
    assert exc.value.code == 1

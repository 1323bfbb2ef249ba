"""SumMe ground truth to annotation JSON.

The benchmark ships one MATLAB file per video holding per-user binary frame
selections (`user_score`, one column per user), the frame count, and the
frame rate. Segment boundaries for the knapsack protocol live in a separate
precomputed HDF5 whose per-video groups carry `change_points` with inclusive
end frames. Conversion joins the two and writes one JSON per video in the
summarizer's annotation schema (end-exclusive change points covering every
frame).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import h5py
import numpy as np
import scipy.io

from .tacemb import atomic_write_bytes


class ConvertError(ValueError):
    """The dataset directory or one of its files is unusable."""


@dataclass(frozen=True)
class VideoReport:
    video_id: str
    ok: bool
    message: str


def _norm_name(name: str) -> str:
    # "Air_Force_One" and "Air Force One.mat" both key as "airforceone".
    return re.sub(r"[^a-z0-9]", "", name.lower())


def _mat_files(dataset_dir: Path) -> list[Path]:
    gt = dataset_dir / "GT"
    root = gt if gt.is_dir() else dataset_dir
    mats = sorted(root.glob("*.mat"))
    if not mats:
        raise ConvertError(f"no .mat ground-truth files under {dataset_dir}")
    return mats


def load_segments_h5(path: str | Path) -> dict[str, list[list[int]]]:
    """Map normalized video name to end-exclusive change points."""
    table: dict[str, list[list[int]]] = {}
    try:
        handle = h5py.File(path, "r")
    except OSError as exc:
        raise ConvertError(f"cannot open segmentation file {path}: {exc}") from exc
    with handle as f:
        for key in f:
            group = f[key]
            if "change_points" not in group or "video_name" not in group:
                continue
            raw = group["video_name"][()]
            name = raw.decode() if isinstance(raw, bytes) else str(raw)
            points = np.asarray(group["change_points"][()], dtype=np.int64)
            if points.ndim != 2 or points.shape[1] != 2:
                raise ConvertError(f"{path}: {key} has malformed change_points")
            table[_norm_name(name)] = [[int(s), int(e) + 1] for s, e in points]
    if not table:
        raise ConvertError(f"{path}: no usable change-point groups")
    return table


def uniform_segments(n_frames: int, length: int) -> list[list[int]]:
    """Fixed-length fallback segmentation; the last piece absorbs the remainder cut."""
    if length < 1:
        raise ConvertError(f"segment length must be >= 1, got {length}")
    return [[start, min(start + length, n_frames)] for start in range(0, n_frames, length)]


def _fit_segments(
    segments: list[list[int]], n_frames: int, clip: bool
) -> list[list[int]]:
    segs = [list(seg) for seg in segments]
    if segs[-1][1] != n_frames:
        if not clip:
            raise ConvertError(
                f"segmentation covers {segs[-1][1]} frames, video has {n_frames}"
                " (pass --clip-segments to force agreement)"
            )
        segs = [seg for seg in segs if seg[0] < n_frames]
        if not segs:
            raise ConvertError("segmentation lies entirely beyond the video")
        segs[-1][1] = n_frames
    cursor = 0
    for start, end in segs:
        if start != cursor or end <= start:
            raise ConvertError(f"segments not contiguous at frame {cursor}")
        cursor = end
    return segs


def _convert_one(
    mat_path: Path,
    out_dir: Path,
    segment_table: dict[str, list[list[int]]] | None,
    uniform: int | None,
    clip: bool,
) -> None:
    try:
        mat = scipy.io.loadmat(str(mat_path))
    except Exception as exc:
        raise ConvertError(f"unreadable .mat: {exc}") from exc
    for field in ("user_score", "nFrames", "FPS"):
        if field not in mat:
            raise ConvertError(f"missing field {field!r}")
    n_frames = int(np.ravel(mat["nFrames"])[0])
    fps = float(np.ravel(mat["FPS"])[0])
    if n_frames < 1 or not fps > 0:
        raise ConvertError(f"bad metadata: nFrames={n_frames}, FPS={fps}")

    user_score = np.asarray(mat["user_score"], dtype=np.float64)
    if user_score.ndim != 2:
        raise ConvertError(f"user_score must be 2-d, got shape {user_score.shape}")
    if user_score.shape[0] != n_frames:
        if user_score.shape[1] == n_frames:
            user_score = user_score.T
        else:
            raise ConvertError(
                f"user_score shape {user_score.shape} does not match nFrames={n_frames}"
            )
    summaries = (user_score > 0).astype(int).T.tolist()  # one row per user

    if segment_table is not None:
        segs = segment_table.get(_norm_name(mat_path.stem))
        if segs is None:
            raise ConvertError("no change points in segmentation file")
        segs = _fit_segments(segs, n_frames, clip)
    else:
        assert uniform is not None
        segs = uniform_segments(n_frames, uniform)

    doc = {
        "video_id": mat_path.stem,
        "n_frames": n_frames,
        "fps": fps,
        "change_points": segs,
        "user_summaries": summaries,
    }
    gt = mat.get("gt_score")
    if gt is not None:
        gt = np.ravel(np.asarray(gt, dtype=np.float64))
        if gt.shape[0] == n_frames:
            doc["gt_scores"] = gt.tolist()
    atomic_write_bytes(
        out_dir / f"{mat_path.stem}.json", (json.dumps(doc) + "\n").encode()
    )


def convert_summe(
    dataset_dir: str | Path,
    out_dir: str | Path,
    segments: str | Path | None = None,
    uniform: int | None = None,
    clip_segments: bool = False,
) -> list[VideoReport]:
    """Convert every ground-truth file found; one report row per video.

    Per-video problems are reported, not fatal: the rest of the corpus still
    converts. Exactly one of ``segments`` (precomputed HDF5) and ``uniform``
    (fallback fixed length) must be given.
    """
    if (segments is None) == (uniform is None):
        raise ConvertError("exactly one of segments and uniform must be set")
    root = Path(dataset_dir)
    if not root.is_dir():
        raise ConvertError(f"not a directory: {dataset_dir}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = load_segments_h5(segments) if segments is not None else None

    reports = []
    for mat_path in _mat_files(root):
        try:
            _convert_one(mat_path, out, table, uniform, clip_segments)
        except ConvertError as exc:
            reports.append(VideoReport(mat_path.stem, False, str(exc)))
        else:
            reports.append(VideoReport(mat_path.stem, True, "ok"))
    return reports

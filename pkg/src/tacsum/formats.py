"""File formats: TACEMB embedding files, annotation JSON, result writers.

TACEMB v1 layout (little-endian):
  magic "TACE" | u32 version | u32 n_samples | u32 dim | u64 total_frames
  | f32 fps | f32 rate | n_samples*dim f32 row-major | n_samples u32 indices

Annotation JSON carries the ground truth for one video: frame count, fps,
end-exclusive change points, and one binary vector per annotator.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from pathlib import Path

import numpy as np

from .evaluator import AnnotatedVideo, EvalResult
from .model import EmbeddingSet, SampleMap, SummaryResult, VideoMeta
from .pipeline import PipelineArtifacts

TACEMB_MAGIC = b"TACE"
TACEMB_VERSION = 1
_HEADER = struct.Struct("<4sIIIQff")


class FormatError(ValueError):
    """A file does not conform to the format it claims."""


def write_tacemb(path: str | Path, embeddings: EmbeddingSet) -> None:
    embeddings.check()
    n, dim = embeddings.data.shape
    header = _HEADER.pack(
        TACEMB_MAGIC,
        TACEMB_VERSION,
        n,
        dim,
        embeddings.meta.total_frames,
        embeddings.meta.fps,
        embeddings.map.rate,
    )
    body = embeddings.data.astype("<f4").tobytes(order="C")
    tail = embeddings.map.sample_indices.astype("<u4").tobytes()
    Path(path).write_bytes(header + body + tail)


def read_tacemb(path: str | Path) -> EmbeddingSet:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"file too short for a header ({len(raw)} bytes)")
    magic, version, n, dim, total, fps, rate = _HEADER.unpack_from(raw)
    if magic != TACEMB_MAGIC:
        raise FormatError("bad magic")
    if version != TACEMB_VERSION:
        raise FormatError(f"unsupported version {version}")
    expected = _HEADER.size + n * dim * 4 + n * 4
    if len(raw) != expected:
        raise FormatError(f"expected {expected} bytes for {n}x{dim} samples, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", count=n * dim, offset=_HEADER.size)
    indices = np.frombuffer(raw, dtype="<u4", count=n, offset=_HEADER.size + n * dim * 4)
    emb = EmbeddingSet(
        VideoMeta(int(total), float(fps)),
        SampleMap(indices.astype(np.int64), float(rate)),
        data.astype(np.float64).reshape(n, dim),
    )
    try:
        return emb.check()
    except ValueError as exc:
        raise FormatError(f"inconsistent embedding file: {exc}") from exc


def read_annotation(path: str | Path) -> tuple[str, AnnotatedVideo]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from exc
    try:
        video_id = str(doc["video_id"])
        meta = VideoMeta(int(doc["n_frames"]), float(doc["fps"]))
        change_points = tuple((int(s), int(e)) for s, e in doc["change_points"])
        summaries = np.array(doc["user_summaries"], dtype=np.int64)
        gt = doc.get("gt_scores")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed annotation {path}: {exc}") from exc
    video = AnnotatedVideo(
        meta,
        change_points,
        summaries,
        np.asarray(gt, dtype=np.float64) if gt is not None else None,
    )
    try:
        return video_id, video.check()
    except ValueError as exc:
        raise FormatError(f"inconsistent annotation {path}: {exc}") from exc


def write_annotation(path: str | Path, video_id: str, video: AnnotatedVideo) -> None:
    doc = {
        "video_id": video_id,
        "n_frames": video.meta.total_frames,
        "fps": video.meta.fps,
        "change_points": [list(seg) for seg in video.change_points],
        "user_summaries": video.user_summaries.tolist(),
    }
    if video.gt_scores is not None:
        doc["gt_scores"] = video.gt_scores.tolist()
    Path(path).write_text(json.dumps(doc) + "\n")


def summary_json(artifacts: PipelineArtifacts) -> str:
    """Canonical JSON for one summarization run (stable key order, one line)."""
    result = artifacts.result
    doc = {
        "keyframes": result.keyframes.tolist(),
        "sample_scores": result.sample_scores.tolist(),
        "frame_scores": result.frame_scores.tolist(),
        "partitions": [[p.start, p.end, p.label] for p in artifacts.partitions.partitions],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def evaluation_csv(rows: list[tuple[str, EvalResult, PipelineArtifacts]]) -> str:
    """Per-video table plus a trailing mean row; f-measure in percent."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["video_id", "f_measure", "n_partitions", "n_keyframes"])
    for video_id, result, artifacts in sorted(rows, key=lambda r: r[0]):
        writer.writerow(
            [
                video_id,
                f"{100.0 * result.f_measure:.4f}",
                artifacts.partitions.count,
                artifacts.result.keyframes.shape[0],
            ]
        )
    if rows:
        mean = sum(r[1].f_measure for r in rows) / len(rows)
        writer.writerow(["mean", f"{100.0 * mean:.4f}", "", ""])
    return buf.getvalue()


def baseline_csv(rows: list[tuple[str, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["video_id", "f_measure"])
    for video_id, score in sorted(rows):
        writer.writerow([video_id, f"{100.0 * score:.4f}"])
    if rows:
        mean = sum(score for _, score in rows) / len(rows)
        writer.writerow(["mean", f"{100.0 * mean:.4f}"])
    return buf.getvalue()

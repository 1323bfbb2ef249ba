"""Writer for the summarizer's embedding container (TACEMB, version 1).

Layout, little-endian: magic ``TACE``, u32 version, u32 sample count, u32
feature dim, u64 total frame count, f32 fps, f32 sampling rate, then
count x dim f32 features row-major, then count u32 sampled frame indices.
"""

from __future__ import annotations

import os
import struct
import tempfile
from pathlib import Path

import numpy as np

MAGIC = b"TACE"
VERSION = 1
_HEADER = struct.Struct("<4sIIIQff")


def render_tacemb(
    features: np.ndarray,
    indices,
    total_frames: int,
    fps: float,
    rate: float,
) -> bytes:
    """Serialize one video's sample embeddings to the container bytes."""
    feats = np.ascontiguousarray(np.asarray(features), dtype="<f4")
    idx = np.asarray(indices, dtype=np.int64)
    if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
        raise ValueError(f"features must be a non-empty 2-d matrix, got shape {feats.shape}")
    if not np.all(np.isfinite(feats)):
        raise ValueError("features contain non-finite entries")
    if idx.ndim != 1 or idx.shape[0] != feats.shape[0]:
        raise ValueError("indices must be 1-d and row-aligned with features")
    if np.any(np.diff(idx) <= 0):
        raise ValueError("indices must be strictly increasing")
    if total_frames < 1:
        raise ValueError(f"total_frames must be >= 1, got {total_frames}")
    if idx[0] < 0 or idx[-1] >= total_frames:
        raise ValueError("indices out of frame range")
    if not fps > 0:
        raise ValueError(f"fps must be positive, got {fps}")
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate}")
    header = _HEADER.pack(
        MAGIC, VERSION, feats.shape[0], feats.shape[1], total_frames, fps, rate
    )
    return header + feats.tobytes() + idx.astype("<u4").tobytes()


def atomic_write_bytes(path: str | Path, payload: bytes) -> None:
    """Write via a sibling temp file and rename; a crash leaves no partial file."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=str(target.parent), prefix=target.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_tacemb(
    path: str | Path,
    features: np.ndarray,
    indices,
    total_frames: int,
    fps: float,
    rate: float,
) -> None:
    atomic_write_bytes(path, render_tacemb(features, indices, total_frames, fps, rate))

"""End-to-end extraction: video in, embedding container out."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .backbones import Backbone, ConfigError, ModelError, load
from .sampling import sample_indices
from .tacemb import write_tacemb
from .video import VideoInfo, frames_at, probe


@dataclass(frozen=True)
class ExtractReport:
    path: str
    n_samples: int
    dim: int
    total_frames: int
    fps: float


def extract_embeddings(
    video_path: str | Path,
    backbone: Backbone,
    rate: float,
    batch_size: int = 16,
) -> tuple[np.ndarray, list[int], VideoInfo]:
    """Decode, sample, and embed one video.

    Frames stream through the backbone in ``batch_size`` groups, so memory
    stays flat for long videos; intra-batch parallelism is the backend's.
    """
    info = probe(video_path)
    indices = sample_indices(info.total_frames, info.fps, rate)
    chunks: list[np.ndarray] = []
    batch: list[np.ndarray] = []
    for frame in frames_at(video_path, indices):
        batch.append(frame)
        if len(batch) == batch_size:
            chunks.append(backbone.embed(batch))
            batch = []
    if batch:
        chunks.append(backbone.embed(batch))
    features = np.vstack(chunks).astype(np.float32, copy=False)
    if features.shape != (len(indices), backbone.dim):
        raise ModelError(
            f"{backbone.name} returned shape {features.shape}, "
            f"expected {(len(indices), backbone.dim)}"
        )
    return features, indices, info


def extract_to_file(
    video_path: str | Path,
    model_name: str,
    rate: float,
    output: str | Path,
    batch_size: int = 16,
    device: str = "cpu",
) -> ExtractReport:
    if not (rate > 0) or not math.isfinite(rate):
        raise ConfigError(f"rate must be positive, got {rate}")
    if batch_size < 1:
        raise ConfigError(f"batch size must be >= 1, got {batch_size}")
    backbone = load(model_name, device)
    features, indices, info = extract_embeddings(video_path, backbone, rate, batch_size)
    write_tacemb(output, features, indices, info.total_frames, info.fps, rate)
    return ExtractReport(
        str(output), len(indices), backbone.dim, info.total_frames, info.fps
    )

"""Snippet-based frame sampling and per-frame expansion of sample values.

Each second of video is cut into near-equal snippets and the middle frame of
every snippet becomes one sample, which normalizes videos of different frame
rates to a common target rate.
"""

from __future__ import annotations

import math

import numpy as np

from .model import SampleMap, VideoMeta


def _snippet_representatives(start: int, stop: int, snippets: int) -> list[int]:
    """Middle frame of each of ``snippets`` contiguous chunks of [start, stop).

    Chunk lengths differ by at most one, longer chunks first; empty chunks
    (more snippets than frames) produce no sample.
    """
    n = stop - start
    base, extra = divmod(n, snippets)
    reps = []
    frame = start
    for i in range(snippets):
        length = base + 1 if i < extra else base
        if length == 0:
            continue
        reps.append(frame + length // 2)
        frame += length
    return reps


def sample_indices(meta: VideoMeta, rate: float) -> SampleMap:
    """Choose one representative frame per snippet at ``rate`` samples/second.

    Whole seconds are cut into ``round(rate)`` snippets; a trailing partial
    second gets ``max(1, round(rate * fraction))``. Second boundaries for
    non-integer fps are floored to frame indices. When ``fps <= rate`` every
    frame is its own sample.
    """
    meta.check()
    if not (rate > 0) or not math.isfinite(rate):
        raise ValueError(f"rate must be positive, got {rate}")
    total, fps = meta.total_frames, meta.fps
    if fps <= rate:
        return SampleMap(np.arange(total, dtype=np.int64), rate)

    per_second = max(1, round(rate))
    indices: list[int] = []
    second = 0
    while True:
        start = math.floor(second * fps)
        stop = math.floor((second + 1) * fps)
        if stop > total:
            break
        if stop > start:
            indices.extend(_snippet_representatives(start, stop, per_second))
        second += 1
    start = math.floor(second * fps)
    if start < total:
        fraction = (total - start) / fps
        snippets = max(1, round(rate * fraction))
        indices.extend(_snippet_representatives(start, total, snippets))
    return SampleMap(np.asarray(indices, dtype=np.int64), rate)


def expand(smap: SampleMap, sample_values, total_frames: int) -> np.ndarray:
    """Spread per-sample values back onto all frames.

    Each frame takes the value of the nearest sample index; exact midpoints go
    to the earlier sample.
    """
    values = np.asarray(sample_values, dtype=np.float64)
    if values.ndim != 1 or values.shape[0] != len(smap):
        raise ValueError(
            f"expected {len(smap)} sample values, got shape {values.shape}"
        )
    smap.check(total_frames)
    idx = smap.sample_indices
    # Frame f belongs to sample i iff f <= (idx[i] + idx[i+1]) // 2.
    cuts = (idx[:-1] + idx[1:]) // 2
    assignment = np.searchsorted(cuts, np.arange(total_frames), side="left")
    return values[assignment]

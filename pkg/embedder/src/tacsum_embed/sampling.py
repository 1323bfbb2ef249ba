"""Snippet-middle frame sampling, kept in lockstep with the summarizer.

The summarizer derives which frames an embedding file must cover from
nothing but (total_frames, fps, rate), so the extractor repeats that index
arithmetic here instead of importing it. Parity is enforced by tests that
compare against ``tacsum inspect``.
"""

from __future__ import annotations

import math


def _snippet_middles(start: int, stop: int, snippets: int) -> list[int]:
    # Cut [start, stop) into `snippets` near-equal runs, longer runs first;
    # runs shorter than one frame contribute nothing.
    n = stop - start
    base, extra = divmod(n, snippets)
    out = []
    frame = start
    for i in range(snippets):
        length = base + 1 if i < extra else base
        if length == 0:
            continue
        out.append(frame + length // 2)
        frame += length
    return out


def sample_indices(total_frames: int, fps: float, rate: float) -> list[int]:
    """Frame indices to embed for a video of ``total_frames`` at ``fps``.

    Every whole second contributes ``round(rate)`` snippet middles; a
    trailing partial second contributes ``max(1, round(rate * fraction))``.
    Second boundaries are floored to frame indices. At fps <= rate every
    frame is its own sample.
    """
    if total_frames < 1:
        raise ValueError(f"total_frames must be >= 1, got {total_frames}")
    if not (fps > 0) or not math.isfinite(fps):
        raise ValueError(f"fps must be positive, got {fps}")
    if not (rate > 0) or not math.isfinite(rate):
        raise ValueError(f"rate must be positive, got {rate}")
    if fps <= rate:
        return list(range(total_frames))

    per_second = max(1, round(rate))
    indices: list[int] = []
    second = 0
    while True:
        start = math.floor(second * fps)
        stop = math.floor((second + 1) * fps)
        if stop > total_frames:
            break
        if stop > start:
            indices.extend(_snippet_middles(start, stop, per_second))
        second += 1
    start = math.floor(second * fps)
    if start < total_frames:
        fraction = (total_frames - start) / fps
        snippets = max(1, round(rate * fraction))
        indices.extend(_snippet_middles(start, total_frames, snippets))
    return indices

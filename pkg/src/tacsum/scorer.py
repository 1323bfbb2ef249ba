"""Keyframe selection and importance scoring over partitions.

Scores start flat (each sample scores its partition's length) and are then
bent toward the keyframes: an interpolation kernel peaks at every key
position and decays to a floor at the midpoint between consecutive keys.
Two kernels (cosine, linear) and two bias directions (raise keys, lower
everything else) are supported.
"""

from __future__ import annotations

import math

import numpy as np

from .model import PartitionSet, PipelineConfig, ReducedEmbedding

_RULES = ("mean", "middle", "ends", "middle+ends")


def keyframes(parts: PartitionSet, reduced: ReducedEmbedding, rule: str) -> np.ndarray:
    """Representative sample indices per partition, deduplicated and sorted.

    mean picks the sample nearest the partition centroid (ties to the
    earliest), middle the central sample, ends both boundary samples.
    """
    if rule not in _RULES:
        raise ValueError(f"rule must be one of {_RULES}, got {rule!r}")
    data = np.asarray(reduced.data, dtype=np.float64)
    chosen: set[int] = set()
    for p in parts.partitions:
        if rule == "mean":
            rows = data[p.start : p.end]
            centroid = rows.mean(axis=0)
            offset = int(np.argmin(np.linalg.norm(rows - centroid, axis=1)))
            chosen.add(p.start + offset)
            continue
        if rule in ("middle", "middle+ends"):
            chosen.add(p.start + p.length // 2)
        if rule in ("ends", "middle+ends"):
            chosen.add(p.start)
            chosen.add(p.end - 1)
    return np.array(sorted(chosen), dtype=np.int64)


def flat_scores(parts: PartitionSet) -> np.ndarray:
    """Score every sample with the length of the partition containing it."""
    out = np.empty(parts.total, dtype=np.float64)
    for p in parts.partitions:
        out[p.start : p.end] = float(p.length)
    return out


def _kernel_weight(t: int, a: int, b: int, interp: str) -> float:
    """1 at the key positions a and b, 0 at their midpoint."""
    frac = min(t - a, b - t) / (b - a)
    if interp == "cosine":
        return (1.0 + math.cos(2.0 * math.pi * frac)) / 2.0
    return 1.0 - 2.0 * frac


def biased_scores(
    flat: np.ndarray,
    keys: np.ndarray,
    parts: PartitionSet,
    interp: str = "cosine",
    bias_mode: str = "increase-keyframes",
    bias: float = 0.5,
) -> np.ndarray:
    """Bend the flat scores toward the key positions.

    increase-keyframes lifts each key to flat*(1+bias) and relaxes back to
    the flat value mid-way between keys; decrease-others keeps keys at their
    flat value and sinks the mid-way floor to flat*(1-bias). Outside the
    outermost keys the score holds that key's value.
    """
    if interp not in ("cosine", "linear"):
        raise ValueError(f"unknown interpolation {interp!r}")
    if bias_mode not in ("increase-keyframes", "decrease-others"):
        raise ValueError(f"unknown bias mode {bias_mode!r}")
    if not 0.0 <= bias <= 1.0:
        raise ValueError("bias out of range")
    v_hat = np.asarray(flat, dtype=np.float64)
    n = v_hat.shape[0]
    if n != parts.total:
        raise ValueError(f"flat scores cover {n} samples, partitions cover {parts.total}")
    keys = np.asarray(keys, dtype=np.int64)
    if keys.size == 0:
        raise ValueError("keyframes must be non-empty")
    if keys[0] < 0 or keys[-1] >= n or np.any(np.diff(keys) <= 0):
        raise ValueError("keyframes must be sorted, unique, and in range")

    def at(t: int, w: float) -> float:
        if bias_mode == "increase-keyframes":
            return v_hat[t] * (1.0 + bias * w)
        return v_hat[t] * (1.0 - bias * (1.0 - w))

    out = np.empty(n, dtype=np.float64)
    out[: keys[0] + 1] = at(int(keys[0]), 1.0)
    out[keys[-1] :] = at(int(keys[-1]), 1.0)
    for a, b in zip(keys[:-1], keys[1:]):
        a, b = int(a), int(b)
        out[a] = at(a, 1.0)
        out[b] = at(b, 1.0)
        for t in range(a + 1, b):
            out[t] = at(t, _kernel_weight(t, a, b, interp))
    return out


def score_samples(
    parts: PartitionSet, reduced: ReducedEmbedding, config: PipelineConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Keyframes plus flat and biased per-sample scores in one call."""
    keys = keyframes(parts, reduced, config.keyframe_rule)
    flat = flat_scores(parts)
    biased = biased_scores(flat, keys, parts, config.interp, config.bias_mode, config.bias)
    return keys, flat, biased

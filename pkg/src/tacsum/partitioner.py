"""Turn per-sample cluster labels into contiguous temporal partitions.

Three cleanup steps run before cutting: isolated single-sample label flips
are absorbed, a sliding mode filter smooths remaining jitter, and partitions
shorter than a minimum length are redistributed into their neighbors. Every
step preserves total coverage of the sample axis.
"""

from __future__ import annotations

import numpy as np

from .model import LabelSequence, Partition, PartitionSet, PipelineConfig


def eliminate_outliers(labels: LabelSequence) -> LabelSequence:
    """Absorb single-sample runs whose two neighbors agree with each other.

    One left-to-right pass over a working copy; sequence ends never change
    because they lack a neighbor on one side.
    """
    out = np.array(labels.labels, copy=True)
    for i in range(1, out.shape[0] - 1):
        if out[i - 1] == out[i + 1] and out[i] != out[i - 1]:
            out[i] = out[i - 1]
    return LabelSequence(out, labels.num_clusters)


def smooth(labels: LabelSequence, window: int) -> LabelSequence:
    """Sliding mode filter with the window clipped at the sequence bounds.

    Mode ties go to the label occurring closest to the center position,
    then to the smaller label. Reads only the input sequence, so a single
    pass suffices and no fixpoint iteration happens.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd")
    src = labels.labels
    n = src.shape[0]
    half = window // 2
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        counts: dict[int, int] = {}
        nearest: dict[int, int] = {}
        for j in range(lo, hi):
            lab = int(src[j])
            counts[lab] = counts.get(lab, 0) + 1
            d = abs(j - i)
            if lab not in nearest or d < nearest[lab]:
                nearest[lab] = d
        best_count = max(counts.values())
        out[i] = min(
            (lab for lab, c in counts.items() if c == best_count),
            key=lambda lab: (nearest[lab], lab),
        )
    return LabelSequence(out, labels.num_clusters)


def to_partitions(labels: LabelSequence) -> PartitionSet:
    """Cut the sequence at every label change; one partition per maximal run."""
    src = labels.labels
    parts = []
    run_start = 0
    for i in range(1, src.shape[0]):
        if src[i] != src[i - 1]:
            parts.append(Partition(run_start, i, int(src[run_start])))
            run_start = i
    parts.append(Partition(run_start, src.shape[0], int(src[run_start])))
    return PartitionSet(tuple(parts)).check(total=src.shape[0])


def refine(parts: PartitionSet, min_len: int) -> PartitionSet:
    """Dissolve partitions shorter than ``min_len`` into their neighbors.

    Each round removes the shortest partition (ties to the earliest): an
    interior one is split at its midpoint with the left ceil-half joining the
    left neighbor, while a boundary one merges whole into its only neighbor.
    Stops once every length reaches ``min_len`` or one partition remains, so
    at most count-1 rounds run.
    """
    if min_len < 1:
        raise ValueError(f"min_len must be >= 1, got {min_len}")
    work = list(parts.partitions)
    while len(work) > 1:
        lengths = [p.length for p in work]
        shortest = min(lengths)
        if shortest >= min_len:
            break
        i = lengths.index(shortest)
        if i == 0:
            right = work[1]
            work[0:2] = [Partition(0, right.end, right.label)]
        elif i == len(work) - 1:
            left = work[-2]
            work[-2:] = [Partition(left.start, work[-1].end, left.label)]
        else:
            left, mid, right = work[i - 1], work[i], work[i + 1]
            cut = mid.start + (mid.length + 1) // 2  # left side takes the ceil half
            work[i - 1 : i + 2] = [
                Partition(left.start, cut, left.label),
                Partition(cut, right.end, right.label),
            ]
    return PartitionSet(tuple(work)).check(total=parts.total)


def partition_labels(labels: LabelSequence, config: PipelineConfig) -> PartitionSet:
    """Full label-to-partition path: outliers, smoothing, cutting, refinement."""
    cleaned = eliminate_outliers(labels)
    smoothed = smooth(cleaned, config.window)
    return refine(to_partitions(smoothed), config.min_len)

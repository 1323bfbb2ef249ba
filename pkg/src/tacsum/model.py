"""Value types shared by all pipeline stages.

Every type is immutable after construction and carries a ``check`` method
asserting its structural invariants. Indices are 0-based everywhere; scores
are non-negative reals with no normalization imposed at the type level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

VALID_KEYFRAME_RULES = ("mean", "middle", "ends", "middle+ends")
VALID_INTERP = ("cosine", "linear")
VALID_BIAS_MODES = ("increase-keyframes", "decrease-others")
VALID_USER_AGG = ("max", "mean")


class InvariantError(ValueError):
    """A value object violates one of its structural invariants."""


class ConfigError(ValueError):
    """A configuration field is outside its allowed range."""


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class VideoMeta:
    """Shape of the source video: total frame count and frame rate."""

    total_frames: int
    fps: float

    @property
    def duration_s(self) -> float:
        return self.total_frames / self.fps

    def check(self) -> "VideoMeta":
        if self.total_frames < 1:
            raise InvariantError(f"total_frames must be >= 1, got {self.total_frames}")
        if not math.isfinite(self.fps) or self.fps <= 0:
            raise InvariantError(f"fps must be positive and finite, got {self.fps}")
        return self


@dataclass(frozen=True)
class SampleMap:
    """Original-frame indices of the chosen samples, plus the target rate."""

    sample_indices: np.ndarray  # (n_samples,) int64, strictly increasing
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "sample_indices", _frozen_array(self.sample_indices, np.int64))

    def __len__(self) -> int:
        return int(self.sample_indices.shape[0])

    def check(self, total_frames: int | None = None) -> "SampleMap":
        idx = self.sample_indices
        if idx.ndim != 1 or idx.shape[0] < 1:
            raise InvariantError("sample_indices must be a non-empty 1-d sequence")
        if np.any(np.diff(idx) <= 0):
            raise InvariantError("sample_indices must be strictly increasing")
        if idx[0] < 0:
            raise InvariantError("sample_indices must be non-negative")
        if total_frames is not None and idx[-1] >= total_frames:
            raise InvariantError(
                f"sample index {int(idx[-1])} out of range for {total_frames} frames"
            )
        if self.rate <= 0:
            raise InvariantError(f"rate must be positive, got {self.rate}")
        return self


@dataclass(frozen=True)
class EmbeddingSet:
    """Per-sample embedding matrix with the metadata tying rows to frames."""

    meta: VideoMeta
    map: SampleMap
    data: np.ndarray  # (n_samples, dim) float64

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen_array(self.data, np.float64))

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def check(self) -> "EmbeddingSet":
        self.meta.check()
        self.map.check(self.meta.total_frames)
        if self.data.ndim != 2:
            raise InvariantError("embedding data must be 2-d")
        if self.data.shape[0] != len(self.map):
            raise InvariantError(
                f"embedding rows ({self.data.shape[0]}) != sample count ({len(self.map)})"
            )
        if not np.all(np.isfinite(self.data)):
            raise InvariantError("embedding data contains non-finite entries")
        return self


@dataclass(frozen=True)
class ReducedEmbedding:
    """Low-dimensional projection of an :class:`EmbeddingSet`, row-aligned."""

    data: np.ndarray  # (n_samples, reduced_dim) float64

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen_array(self.data, np.float64))

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def check(self, source: EmbeddingSet | None = None) -> "ReducedEmbedding":
        if self.data.ndim != 2:
            raise InvariantError("reduced data must be 2-d")
        if not np.all(np.isfinite(self.data)):
            raise InvariantError("reduced data contains non-finite entries")
        if source is not None:
            if len(self) != len(source):
                raise InvariantError("reduced row count differs from source")
            if self.dim >= source.dim:
                raise InvariantError("reduced dim must be smaller than source dim")
        return self


@dataclass(frozen=True)
class LabelSequence:
    """Per-sample cluster ids in temporal order."""

    labels: np.ndarray  # (n_samples,) int64
    num_clusters: int

    def __post_init__(self):
        object.__setattr__(self, "labels", _frozen_array(self.labels, np.int64))

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def check(self, compact: bool = False) -> "LabelSequence":
        if self.labels.ndim != 1 or self.labels.shape[0] < 1:
            raise InvariantError("labels must be a non-empty 1-d sequence")
        if self.num_clusters < 1:
            raise InvariantError("num_clusters must be >= 1")
        if np.any(self.labels < 0) or np.any(self.labels >= self.num_clusters):
            raise InvariantError("labels must lie in [0, num_clusters)")
        if compact and np.unique(self.labels).shape[0] != self.num_clusters:
            raise InvariantError("every cluster id must occur at least once")
        return self

    def compact(self) -> "LabelSequence":
        """Remap the ids that actually occur onto [0, n_distinct), order-preserving."""
        present = np.unique(self.labels)
        remap = np.full(self.num_clusters, -1, dtype=np.int64)
        remap[present] = np.arange(present.shape[0])
        return LabelSequence(remap[self.labels], int(present.shape[0]))


@dataclass(frozen=True)
class Partition:
    """Half-open sample range [start, end) carrying one cluster label."""

    start: int
    end: int
    label: int

    @property
    def length(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class PartitionSet:
    """Ordered, contiguous, exhaustive partitions of the sample axis."""

    partitions: tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "partitions", tuple(self.partitions))

    @property
    def count(self) -> int:
        return len(self.partitions)

    @property
    def total(self) -> int:
        return self.partitions[-1].end if self.partitions else 0

    def lengths(self) -> list[int]:
        return [p.length for p in self.partitions]

    def sample_partition_ids(self) -> np.ndarray:
        """Index of the partition containing each sample."""
        out = np.empty(self.total, dtype=np.int64)
        for i, p in enumerate(self.partitions):
            out[p.start : p.end] = i
        return out

    def check(
        self,
        total: int | None = None,
        min_len: int | None = None,
        adjacent_distinct: bool = False,
    ) -> "PartitionSet":
        if not self.partitions:
            raise InvariantError("partition set is empty")
        if self.partitions[0].start != 0:
            raise InvariantError("first partition must start at 0")
        prev = self.partitions[0]
        if prev.length < 1:
            raise InvariantError("partition lengths must be >= 1")
        for p in self.partitions[1:]:
            if p.start != prev.end:
                raise InvariantError(f"gap or overlap at sample {p.start}")
            if p.length < 1:
                raise InvariantError("partition lengths must be >= 1")
            if adjacent_distinct and p.label == prev.label:
                raise InvariantError("adjacent partitions share a label")
            prev = p
        if total is not None and self.partitions[-1].end != total:
            raise InvariantError(
                f"partitions end at {self.partitions[-1].end}, expected {total}"
            )
        if min_len is not None and self.count > 1:
            if min(self.lengths()) < min_len:
                raise InvariantError(f"partition shorter than {min_len}")
        return self


@dataclass(frozen=True)
class SummaryResult:
    """Keyframes, importance scores, and the knapsack-selected segments."""

    keyframes: np.ndarray  # sorted sample indices
    sample_scores: np.ndarray  # (n_samples,) float64
    frame_scores: np.ndarray  # (total_frames,) float64
    selected_segments: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "keyframes", _frozen_array(self.keyframes, np.int64))
        object.__setattr__(self, "sample_scores", _frozen_array(self.sample_scores, np.float64))
        object.__setattr__(self, "frame_scores", _frozen_array(self.frame_scores, np.float64))
        object.__setattr__(self, "selected_segments", tuple(self.selected_segments))

    def check(self) -> "SummaryResult":
        n = self.sample_scores.shape[0]
        if self.keyframes.ndim != 1 or self.keyframes.shape[0] < 1:
            raise InvariantError("keyframes must be non-empty")
        if np.any(np.diff(self.keyframes) <= 0):
            raise InvariantError("keyframes must be sorted and unique")
        if self.keyframes[0] < 0 or self.keyframes[-1] >= n:
            raise InvariantError("keyframes out of sample range")
        for name, arr in (("sample_scores", self.sample_scores), ("frame_scores", self.frame_scores)):
            if not np.all(np.isfinite(arr)):
                raise InvariantError(f"{name} contains non-finite entries")
            if np.any(arr < 0):
                raise InvariantError(f"{name} contains negative entries")
        return self


@dataclass(frozen=True)
class PipelineConfig:
    """Tunable parameters of the whole pipeline, with published defaults."""

    rate: float = 4.0  # target samples per second
    pca_dim: int = 34
    tsne_dim: int = 2
    perplexity: float = 30.0
    tsne_iters: int = 1000
    tsne_learning_rate: float = 200.0
    k_max: int = 16  # sigmoid ceiling for the fine cluster count
    k_midpoint: float = 200.0
    k_scale: float = 100.0
    birch_branching: int = 50
    birch_threshold_factor: float = 0.5  # scales the median pairwise distance
    window: int = 5  # mode-filter width, odd
    min_len: int = 4  # minimum partition length after refinement
    keyframe_rule: str = "middle+ends"
    interp: str = "cosine"
    bias_mode: str = "increase-keyframes"
    bias: float = 0.5
    seed: int = 0
    summary_budget: float = 0.15  # summary length as a fraction of total frames
    user_agg: str = "max"  # f-measure aggregation across annotators
    temporal: bool = True  # False skips the semantic-partitioning stage


def validate(config: PipelineConfig) -> PipelineConfig:
    """Return ``config`` unchanged iff every field is in range.

    Raises :class:`ConfigError` naming the offending field otherwise.
    """
    if not (config.rate > 0) or not math.isfinite(config.rate):
        raise ConfigError(f"rate must be positive, got {config.rate}")
    if config.tsne_dim < 1:
        raise ConfigError(f"tsne_dim must be >= 1, got {config.tsne_dim}")
    if config.pca_dim <= config.tsne_dim:
        raise ConfigError(
            f"pca_dim must exceed tsne_dim, got {config.pca_dim} <= {config.tsne_dim}"
        )
    if config.perplexity <= 0:
        raise ConfigError(f"perplexity must be positive, got {config.perplexity}")
    if config.tsne_iters < 1:
        raise ConfigError(f"tsne_iters must be >= 1, got {config.tsne_iters}")
    if config.tsne_learning_rate <= 0:
        raise ConfigError(f"tsne_learning_rate must be positive, got {config.tsne_learning_rate}")
    if config.k_max < 2:
        raise ConfigError(f"k_max must be >= 2, got {config.k_max}")
    if config.k_scale <= 0:
        raise ConfigError(f"k_scale must be positive, got {config.k_scale}")
    if config.birch_branching < 2:
        raise ConfigError(f"birch_branching must be >= 2, got {config.birch_branching}")
    if config.birch_threshold_factor <= 0:
        raise ConfigError(
            f"birch_threshold_factor must be positive, got {config.birch_threshold_factor}"
        )
    if config.window < 1 or config.window % 2 == 0:
        raise ConfigError("window must be odd")
    if config.min_len < 1:
        raise ConfigError(f"min_len must be >= 1, got {config.min_len}")
    if config.keyframe_rule not in VALID_KEYFRAME_RULES:
        raise ConfigError(f"keyframe_rule must be one of {VALID_KEYFRAME_RULES}")
    if config.interp not in VALID_INTERP:
        raise ConfigError(f"interp must be one of {VALID_INTERP}")
    if config.bias_mode not in VALID_BIAS_MODES:
        raise ConfigError(f"bias_mode must be one of {VALID_BIAS_MODES}")
    if not (0.0 <= config.bias <= 1.0):
        raise ConfigError("bias out of range")
    if not (0.0 < config.summary_budget < 1.0):
        raise ConfigError(f"summary_budget must be in (0, 1), got {config.summary_budget}")
    if config.user_agg not in VALID_USER_AGG:
        raise ConfigError(f"user_agg must be one of {VALID_USER_AGG}")
    return config

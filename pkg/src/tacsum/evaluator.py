"""Segment selection under a length budget and scoring against annotators.

Frame scores become a summary by solving an exact 0/1 knapsack over the
video's pre-computed segments: weight = segment length, value = mean frame
score inside it. The resulting frame mask is compared per annotator with
precision/recall f1 and aggregated (max by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EmbeddingSet, InvariantError, PipelineConfig, VideoMeta, validate
from .pipeline import PipelineArtifacts, summarize

Segment = tuple[int, int]  # [start, end) in frames


@dataclass(frozen=True)
class AnnotatedVideo:
    """Ground truth for one video: segmentation plus per-user frame picks."""

    meta: VideoMeta
    change_points: tuple[Segment, ...]
    user_summaries: np.ndarray  # (n_users, total_frames) of {0,1}
    gt_scores: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "change_points", tuple((int(s), int(e)) for s, e in self.change_points))
        summaries = np.array(self.user_summaries, dtype=np.int64, copy=True)
        summaries.setflags(write=False)
        object.__setattr__(self, "user_summaries", summaries)
        if self.gt_scores is not None:
            gt = np.array(self.gt_scores, dtype=np.float64, copy=True)
            gt.setflags(write=False)
            object.__setattr__(self, "gt_scores", gt)

    def check(self) -> "AnnotatedVideo":
        self.meta.check()
        t = self.meta.total_frames
        if not self.change_points:
            raise InvariantError("change_points is empty")
        if self.change_points[0][0] != 0 or self.change_points[-1][1] != t:
            raise InvariantError(f"change_points must cover [0, {t})")
        prev_end = 0
        for start, end in self.change_points:
            if start != prev_end or end <= start:
                raise InvariantError(f"bad segment ({start}, {end}) after frame {prev_end}")
            prev_end = end
        if self.user_summaries.ndim != 2 or self.user_summaries.shape[0] < 1:
            raise InvariantError("need at least one user summary")
        if self.user_summaries.shape[1] != t:
            raise InvariantError(
                f"user summaries have {self.user_summaries.shape[1]} frames, video has {t}"
            )
        if not np.all((self.user_summaries == 0) | (self.user_summaries == 1)):
            raise InvariantError("user summaries must be binary")
        if self.gt_scores is not None and self.gt_scores.shape != (t,):
            raise InvariantError("gt_scores length must equal total_frames")
        return self


@dataclass(frozen=True)
class EvalResult:
    """Per-annotator f1 scores (in [0,1]) and the aggregated f-measure."""

    per_user_f1: tuple[float, ...]
    f_measure: float
    selected_segments: tuple[int, ...]
    summary_mask: np.ndarray  # (total_frames,) of {0,1}

    def __post_init__(self):
        object.__setattr__(self, "per_user_f1", tuple(float(x) for x in self.per_user_f1))
        object.__setattr__(self, "selected_segments", tuple(int(i) for i in self.selected_segments))
        mask = np.array(self.summary_mask, dtype=np.int64, copy=True)
        mask.setflags(write=False)
        object.__setattr__(self, "summary_mask", mask)

    def check(self, agg: str = "max", budget_frames: int | None = None) -> "EvalResult":
        if not self.per_user_f1:
            raise InvariantError("per_user_f1 is empty")
        if any(not 0.0 <= f <= 1.0 for f in self.per_user_f1):
            raise InvariantError("per-user f1 values must lie in [0, 1]")
        expected = max(self.per_user_f1) if agg == "max" else float(np.mean(self.per_user_f1))
        if not math.isclose(self.f_measure, expected, rel_tol=0, abs_tol=1e-12):
            raise InvariantError(f"f_measure {self.f_measure} != {agg} of per-user f1")
        if budget_frames is not None and int(self.summary_mask.sum()) > budget_frames:
            raise InvariantError("summary exceeds the frame budget")
        return self


def knapsack_select(
    segments: tuple[Segment, ...] | list[Segment],
    frame_scores: np.ndarray,
    budget_frames: int,
) -> list[int]:
    """Exact 0/1 knapsack: maximize summed mean-score over chosen segments.

    Capacity is in frames and weights are segment lengths. The backtrack
    resolves ties by preferring to exclude the highest-index segment, which
    pins a unique answer for equal-value optima.
    """
    if budget_frames < 0:
        raise ValueError(f"budget_frames must be >= 0, got {budget_frames}")
    scores = np.asarray(frame_scores, dtype=np.float64)
    weights = [int(e) - int(s) for s, e in segments]
    if any(w < 1 for w in weights):
        raise ValueError("segments must be non-empty frame ranges")
    values = [float(scores[s:e].mean()) for s, e in segments]

    n = len(weights)
    cap = int(budget_frames)
    dp = np.zeros((n + 1, cap + 1))
    for i in range(1, n + 1):
        w, v = weights[i - 1], values[i - 1]
        dp[i] = dp[i - 1]
        if w <= cap:
            np.maximum(dp[i - 1][w:], dp[i - 1][: cap + 1 - w] + v, out=dp[i][w:])

    chosen = []
    c = cap
    for i in range(n, 0, -1):
        if dp[i][c] == dp[i - 1][c]:
            continue
        chosen.append(i - 1)
        c -= weights[i - 1]
    chosen.reverse()
    return chosen


def mask_from_segments(
    segments: tuple[Segment, ...] | list[Segment],
    selected: list[int] | tuple[int, ...],
    total_frames: int,
) -> np.ndarray:
    mask = np.zeros(total_frames, dtype=np.int64)
    for i in selected:
        s, e = segments[i]
        mask[s:e] = 1
    return mask


def f_measure(
    summary_mask: np.ndarray, user_summaries: np.ndarray, agg: str = "max"
) -> tuple[list[float], float]:
    """Per-user f1 list plus the aggregate (max across annotators by default)."""
    if agg not in ("max", "mean"):
        raise ValueError(f"agg must be 'max' or 'mean', got {agg!r}")
    mask = np.asarray(summary_mask).astype(bool)
    users = np.atleast_2d(np.asarray(user_summaries)).astype(bool)
    if users.shape[1] != mask.shape[0]:
        raise ValueError("mask and user summaries must have equal length")
    per_user = []
    mask_size = int(mask.sum())
    for u in users:
        overlap = int(np.sum(mask & u))
        user_size = int(u.sum())
        p = overlap / mask_size if mask_size else 0.0
        r = overlap / user_size if user_size else 0.0
        per_user.append(2 * p * r / (p + r) if p + r > 0 else 0.0)
    aggregate = max(per_user) if agg == "max" else float(np.mean(per_user))
    return per_user, aggregate


def random_baseline(
    video: AnnotatedVideo,
    budget_fraction: float = 0.15,
    runs: int = 100,
    seed: int = 0,
) -> float:
    """Mean f-measure of uniform-random frame scores, over ``runs`` draws."""
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    rng = np.random.default_rng(seed)
    t = video.meta.total_frames
    budget = int(budget_fraction * t)
    total = 0.0
    for _ in range(runs):
        scores = rng.random(t)
        selected = knapsack_select(video.change_points, scores, budget)
        mask = mask_from_segments(video.change_points, selected, t)
        _, f = f_measure(mask, video.user_summaries)
        total += f
    return total / runs


def evaluate_pipeline(
    video: AnnotatedVideo, embeddings: EmbeddingSet, config: PipelineConfig
) -> tuple[EvalResult, PipelineArtifacts]:
    """Run the full pipeline on one video and score it against its annotators."""
    validate(config)
    if embeddings.meta != video.meta:
        raise ValueError(
            f"embedding metadata {embeddings.meta} does not match video {video.meta}"
        )
    artifacts = summarize(embeddings, config)
    t = video.meta.total_frames
    budget = int(config.summary_budget * t)
    selected = knapsack_select(video.change_points, artifacts.result.frame_scores, budget)
    mask = mask_from_segments(video.change_points, selected, t)
    per_user, aggregate = f_measure(mask, video.user_summaries, config.user_agg)
    result = EvalResult(tuple(per_user), aggregate, tuple(selected), mask)
    return result.check(agg=config.user_agg, budget_frames=budget), artifacts

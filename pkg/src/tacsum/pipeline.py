"""End-to-end summarization: embeddings in, scored summary out.

Glue only; the stages live in their own modules. The artifact bundle keeps
every intermediate result so callers (CLI inspection, tests, notebooks) can
look inside a run without re-running stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clusterer import cluster_samples
from .model import (
    EmbeddingSet,
    LabelSequence,
    PartitionSet,
    PipelineConfig,
    ReducedEmbedding,
    SummaryResult,
    validate,
)
from .partitioner import partition_labels, to_partitions
from .reducer import PcaModel, reduce_embeddings
from .sampler import expand
from .scorer import score_samples


@dataclass(frozen=True)
class PipelineArtifacts:
    """Every intermediate stage output of one summarization run."""

    embeddings: EmbeddingSet
    pca: PcaModel
    reduced: ReducedEmbedding
    labels: LabelSequence
    partitions: PartitionSet
    flat_scores: np.ndarray
    result: SummaryResult


def summarize(embeddings: EmbeddingSet, config: PipelineConfig | None = None) -> PipelineArtifacts:
    """Reduce, cluster, partition, and score one video's sample embeddings.

    With ``temporal`` disabled the cluster labels are cut into runs as-is,
    skipping outlier removal, smoothing, and length refinement.
    """
    config = validate(config if config is not None else PipelineConfig())
    embeddings.check()
    pca, reduced = reduce_embeddings(embeddings, config)
    labels = cluster_samples(reduced, config)
    if config.temporal:
        parts = partition_labels(labels, config)
    else:
        parts = to_partitions(labels)
    keys, flat, biased = score_samples(parts, reduced, config)
    frame_scores = expand(embeddings.map, biased, embeddings.meta.total_frames)
    result = SummaryResult(keys, biased, frame_scores).check()
    return PipelineArtifacts(embeddings, pca, reduced, labels, parts, flat, result)

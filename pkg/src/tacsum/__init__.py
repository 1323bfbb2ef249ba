"""Training-free video summarization with temporal-aware clustering.

The pipeline condenses a video into per-sample embeddings, reduces them,
clusters with temporal cleanup, and scores samples by partition structure.
"""

from .clusterer import agglomerate, birch_coarse, target_cluster_count
from .evaluator import (
    AnnotatedVideo,
    EvalResult,
    evaluate_pipeline,
    f_measure,
    knapsack_select,
    random_baseline,
)
from .formats import read_annotation, read_tacemb, write_annotation, write_tacemb
from .model import (
    ConfigError,
    EmbeddingSet,
    InvariantError,
    LabelSequence,
    Partition,
    PartitionSet,
    PipelineConfig,
    ReducedEmbedding,
    SampleMap,
    SummaryResult,
    VideoMeta,
    validate,
)
from .partitioner import eliminate_outliers, refine, smooth, to_partitions
from .pipeline import PipelineArtifacts, summarize
from .reducer import pca_fit_transform, reduce_embeddings, tsne, tsne_run
from .sampler import expand, sample_indices
from .scorer import biased_scores, flat_scores, keyframes

__version__ = "0.1.0"

__all__ = [
    "AnnotatedVideo",
    "ConfigError",
    "EmbeddingSet",
    "EvalResult",
    "InvariantError",
    "LabelSequence",
    "Partition",
    "PartitionSet",
    "PipelineArtifacts",
    "PipelineConfig",
    "ReducedEmbedding",
    "SampleMap",
    "SummaryResult",
    "VideoMeta",
    "agglomerate",
    "biased_scores",
    "birch_coarse",
    "eliminate_outliers",
    "evaluate_pipeline",
    "expand",
    "f_measure",
    "flat_scores",
    "keyframes",
    "knapsack_select",
    "pca_fit_transform",
    "random_baseline",
    "read_annotation",
    "read_tacemb",
    "reduce_embeddings",
    "refine",
    "sample_indices",
    "smooth",
    "summarize",
    "target_cluster_count",
    "to_partitions",
    "tsne",
    "tsne_run",
    "validate",
    "write_annotation",
    "write_tacemb",
]

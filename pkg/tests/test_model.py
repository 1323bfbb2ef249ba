import numpy as np
import pytest

from tacsum.model import (
    ConfigError,
    EmbeddingSet,
    InvariantError,
    LabelSequence,
    Partition,
    PartitionSet,
    PipelineConfig,
    SampleMap,
    SummaryResult,
    VideoMeta,
    validate,
)


def test_video_meta_duration_and_checks():
    meta = VideoMeta(300, 25.0).check()
    assert meta.duration_s == 12.0
    with pytest.raises(InvariantError):
        VideoMeta(0, 25.0).check()
    with pytest.raises(InvariantError):
        VideoMeta(10, 0.0).check()


def test_sample_map_rejects_unsorted_and_out_of_range():
    SampleMap(np.array([0, 4, 9]), 4.0).check(total_frames=10)
    with pytest.raises(InvariantError):
        SampleMap(np.array([0, 4, 4]), 4.0).check()
    with pytest.raises(InvariantError):
        SampleMap(np.array([0, 4, 10]), 4.0).check(total_frames=10)
    with pytest.raises(InvariantError):
        SampleMap(np.array([-1, 4]), 4.0).check()


def test_arrays_are_frozen():
    smap = SampleMap(np.array([0, 5]), 2.0)
    with pytest.raises(ValueError):
        smap.sample_indices[0] = 3
    emb = EmbeddingSet(VideoMeta(10, 2.0), smap, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        emb.data[0, 0] = 1.0


def test_embedding_set_row_count_must_match_map():
    meta = VideoMeta(10, 2.0)
    smap = SampleMap(np.array([0, 5]), 2.0)
    EmbeddingSet(meta, smap, np.zeros((2, 3))).check()
    with pytest.raises(InvariantError):
        EmbeddingSet(meta, smap, np.zeros((3, 3))).check()
    with pytest.raises(InvariantError):
        EmbeddingSet(meta, smap, np.array([[np.nan, 0.0], [0.0, 0.0]])).check()


def test_label_sequence_range_and_compaction():
    labels = LabelSequence(np.array([0, 2, 2, 5]), 6).check()
    compacted = labels.compact()
    assert compacted.labels.tolist() == [0, 1, 1, 2]
    assert compacted.num_clusters == 3
    compacted.check(compact=True)
    with pytest.raises(InvariantError):
        LabelSequence(np.array([0, 3]), 3).check()
    with pytest.raises(InvariantError):
        labels.check(compact=True)


def test_partition_set_contiguity():
    parts = PartitionSet((Partition(0, 4, 0), Partition(4, 9, 1)))
    parts.check(total=9, adjacent_distinct=True)
    assert parts.lengths() == [4, 5]
    assert parts.sample_partition_ids().tolist() == [0] * 4 + [1] * 5
    with pytest.raises(InvariantError):
        PartitionSet((Partition(0, 4, 0), Partition(5, 9, 1))).check()
    with pytest.raises(InvariantError):
        PartitionSet((Partition(0, 4, 0), Partition(4, 9, 0))).check(adjacent_distinct=True)
    with pytest.raises(InvariantError):
        parts.check(total=10)
    with pytest.raises(InvariantError):
        parts.check(min_len=5)


def test_summary_result_checks():
    SummaryResult(np.array([0, 3]), np.ones(5), np.ones(20)).check()
    with pytest.raises(InvariantError):
        SummaryResult(np.array([3, 0]), np.ones(5), np.ones(20)).check()
    with pytest.raises(InvariantError):
        SummaryResult(np.array([0, 5]), np.ones(5), np.ones(20)).check()
    with pytest.raises(InvariantError):
        SummaryResult(np.array([0]), np.array([1.0, -0.5]), np.ones(20)).check()


def test_validate_accepts_defaults():
    assert validate(PipelineConfig()) is not None


@pytest.mark.parametrize(
    "field,value,message",
    [
        ("window", 4, "window must be odd"),
        ("bias", 1.5, "bias out of range"),
        ("bias", -0.1, "bias out of range"),
    ],
)
def test_validate_error_messages(field, value, message):
    from dataclasses import replace

    with pytest.raises(ConfigError, match=message):
        validate(replace(PipelineConfig(), **{field: value}))


@pytest.mark.parametrize(
    "field,value",
    [
        ("rate", 0.0),
        ("rate", -2.0),
        ("pca_dim", 2),  # must exceed tsne_dim
        ("perplexity", 0.0),
        ("k_max", 1),
        ("min_len", 0),
        ("keyframe_rule", "median"),
        ("interp", "cubic"),
        ("bias_mode", "boost"),
        ("summary_budget", 1.0),
        ("user_agg", "min"),
    ],
)
def test_validate_rejects_bad_fields(field, value):
    from dataclasses import replace

    with pytest.raises(ConfigError):
        validate(replace(PipelineConfig(), **{field: value}))

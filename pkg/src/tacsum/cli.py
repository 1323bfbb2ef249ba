"""Command-line interface.

Subcommands: summarize one embedding file, evaluate a corpus directory,
score the random baseline, and inspect sampling/metadata. Exit codes are 0
on success, 1 for usage problems, 2 for bad or missing data.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .clusterer import target_cluster_count
from .evaluator import EvalResult, random_baseline, evaluate_pipeline
from .formats import (
    FormatError,
    baseline_csv,
    evaluation_csv,
    read_annotation,
    read_tacemb,
    summary_json,
)
from .model import ConfigError, InvariantError, PipelineConfig, VideoMeta, validate
from .pipeline import PipelineArtifacts, summarize
from .sampler import sample_indices

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline configuration")
    g.add_argument("--rate", type=float, default=None, help="target samples per second")
    g.add_argument("--pca-dim", type=int, default=None)
    g.add_argument("--perplexity", type=float, default=None)
    g.add_argument("--tsne-iters", type=int, default=None)
    g.add_argument("--k-max", type=int, default=None, help="cluster-count ceiling")
    g.add_argument("--window", type=int, default=None, help="label smoothing window (odd)")
    g.add_argument("--min-len", type=int, default=None, help="minimum partition length")
    g.add_argument("--rule", choices=("mean", "middle", "ends", "middle+ends"), default=None)
    g.add_argument("--interp", choices=("cosine", "linear"), default=None)
    g.add_argument("--bias-mode", choices=("increase-keyframes", "decrease-others"), default=None)
    g.add_argument("--bias", type=float, default=None)
    g.add_argument("--budget", type=float, default=None, help="summary budget as frame fraction")
    g.add_argument("--agg", choices=("max", "mean"), default=None, help="annotator aggregation")
    g.add_argument("--seed", type=int, default=None, help="RNG seed (default: $TACSUM_SEED or 0)")
    g.add_argument(
        "--no-temporal",
        action="store_true",
        help="skip outlier removal, smoothing, and refinement (ablation)",
    )


_FLAG_TO_FIELD = {
    "rate": "rate",
    "pca_dim": "pca_dim",
    "perplexity": "perplexity",
    "tsne_iters": "tsne_iters",
    "k_max": "k_max",
    "window": "window",
    "min_len": "min_len",
    "rule": "keyframe_rule",
    "interp": "interp",
    "bias_mode": "bias_mode",
    "bias": "bias",
    "budget": "summary_budget",
    "agg": "user_agg",
}


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides = {}
    for flag, field in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    seed = getattr(args, "seed", None)
    if seed is None:
        raw = os.environ.get("TACSUM_SEED", "0")
        try:
            seed = int(raw)
        except ValueError:
            raise ConfigError(f"TACSUM_SEED must be an integer, got {raw!r}")
    overrides["seed"] = seed
    if getattr(args, "no_temporal", False):
        overrides["temporal"] = False
    return validate(replace(PipelineConfig(), **overrides))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_summarize(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    embeddings = read_tacemb(args.embedding_file)
    artifacts = summarize(embeddings, config)
    _emit(summary_json(artifacts), args.output)
    if args.plot:
        from .plots import plot_scores

        plot_scores(artifacts, args.plot, title=Path(args.embedding_file).stem)
    return 0


def _scan_corpus(corpus_dir: str) -> list[Path]:
    root = Path(corpus_dir)
    if not root.is_dir():
        raise FormatError(f"not a directory: {corpus_dir}")
    annotations = sorted(root.glob("*.json"))
    if not annotations:
        raise FormatError("no videos found")
    return annotations


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    annotations = _scan_corpus(args.corpus_dir)
    jobs: list[tuple[str, Path, Path]] = []
    failed = False
    for ann_path in annotations:
        emb_path = ann_path.with_suffix(".tacemb")
        if not emb_path.exists():
            print(f"warning: {ann_path.name} has no {emb_path.name}, skipped", file=sys.stderr)
            failed = True
            continue
        jobs.append((ann_path.stem, ann_path, emb_path))

    def run_one(job: tuple[str, Path, Path]) -> tuple[str, EvalResult, PipelineArtifacts]:
        _, ann_path, emb_path = job
        video_id, video = read_annotation(ann_path)
        embeddings = read_tacemb(emb_path)
        result, artifacts = evaluate_pipeline(video, embeddings, config)
        return video_id, result, artifacts

    rows = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        for row in pool.map(run_one, jobs):
            rows.append(row)
    _emit(evaluation_csv(rows), args.output)
    if rows:
        mean = sum(r[1].f_measure for r in rows) / len(rows)
        print(f"mean f-measure over {len(rows)} videos: {100.0 * mean:.2f}", file=sys.stderr)
    return _DATA_EXIT if failed else 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    if args.runs < 1:
        raise ConfigError(f"--runs must be >= 1, got {args.runs}")
    config = _config_from_args(args)
    annotations = _scan_corpus(args.corpus_dir)
    rows = []
    for ann_path in annotations:
        video_id, video = read_annotation(ann_path)
        score = random_baseline(video, config.summary_budget, args.runs, config.seed)
        rows.append((video_id, score))
    _emit(baseline_csv(rows), args.output)
    mean = sum(score for _, score in rows) / len(rows)
    print(f"baseline mean over {len(rows)} videos: {100.0 * mean:.2f}", file=sys.stderr)
    return 0


def _parse_meta(text: str) -> VideoMeta:
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--meta expects TOTAL_FRAMES,FPS, got {text!r}")
    try:
        return VideoMeta(int(parts[0]), float(parts[1])).check()
    except (ValueError, InvariantError) as exc:
        raise ConfigError(f"bad --meta value: {exc}")


def _cmd_inspect(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    report: dict = {}
    artifacts = None
    if args.embedding_file is not None:
        embeddings = read_tacemb(args.embedding_file)
        meta = embeddings.meta
        report["rate"] = embeddings.map.rate
        report["dim"] = embeddings.dim
        smap = embeddings.map
        if args.partitions:
            artifacts = summarize(embeddings, config)
    elif args.meta is not None:
        meta = _parse_meta(args.meta)
        report["rate"] = config.rate
        smap = sample_indices(meta, config.rate)
    else:
        raise ConfigError("inspect needs an embedding file or --meta")

    report["total_frames"] = meta.total_frames
    report["fps"] = meta.fps
    report["seed"] = config.seed
    report["n_samples"] = len(smap)
    report["sample_indices"] = smap.sample_indices.tolist()
    report["target_clusters"] = target_cluster_count(
        len(smap), config.k_max, config.k_midpoint, config.k_scale
    )
    if artifacts is not None:
        report["partitions"] = [[p.start, p.end, p.label] for p in artifacts.partitions.partitions]

    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for key in sorted(report):
            print(f"{key}: {report[key]}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="tacsum", description="Training-free video summarization.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sum = sub.add_parser("summarize", help="summarize one embedding file to JSON")
    p_sum.add_argument("embedding_file")
    p_sum.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    p_sum.add_argument("--plot", default=None, metavar="SVG", help="also render a score figure")
    _add_config_flags(p_sum)
    p_sum.set_defaults(func=_cmd_summarize)

    p_eval = sub.add_parser("evaluate", help="evaluate a corpus of annotation+embedding pairs")
    p_eval.add_argument("corpus_dir")
    p_eval.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    p_eval.add_argument("--jobs", type=int, default=1, help="videos processed concurrently")
    _add_config_flags(p_eval)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_base = sub.add_parser("baseline", help="random-score baseline over a corpus")
    p_base.add_argument("corpus_dir")
    p_base.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    p_base.add_argument("--runs", type=int, default=100)
    _add_config_flags(p_base)
    p_base.set_defaults(func=_cmd_baseline)

    p_ins = sub.add_parser("inspect", help="show sampling and clustering facts")
    p_ins.add_argument("embedding_file", nargs="?", default=None)
    p_ins.add_argument("--meta", default=None, metavar="FRAMES,FPS", help="synthesize metadata")
    p_ins.add_argument("--json", action="store_true", help="machine-readable output")
    p_ins.add_argument("--partitions", action="store_true", help="run the pipeline and dump partitions")
    _add_config_flags(p_ins)
    p_ins.set_defaults(func=_cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"tacsum: error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (FormatError, InvariantError) as exc:
        print(f"tacsum: error: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except OSError as exc:
        print(f"tacsum: error: {exc}", file=sys.stderr)
        return _DATA_EXIT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

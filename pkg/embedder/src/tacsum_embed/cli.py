"""Command-line interface.

Two subcommands: extract embeddings from a video into a .tacemb container,
and convert the SumMe benchmark's ground truth into annotation JSON. Exit
codes match the summarizer's convention: 0 on success, 1 for usage
problems, 2 for bad data or a backbone that cannot load or run.
"""

from __future__ import annotations

import argparse
import sys

from .backbones import ConfigError, ModelError
from .extract import extract_to_file
from .summe import ConvertError, convert_summe
from .video import ExtractError

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; we reserve 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _cmd_extract(args: argparse.Namespace) -> int:
    report = extract_to_file(
        args.video,
        args.model,
        args.rate,
        args.output,
        batch_size=args.batch_size,
        device=args.device,
    )
    print(
        f"{report.path}: {report.n_samples} samples x {report.dim} dims "
        f"({report.total_frames} frames @ {report.fps:g} fps)",
        file=sys.stderr,
    )
    return 0


def _cmd_convert_summe(args: argparse.Namespace) -> int:
    if (args.segments is None) == (args.uniform_segments is None):
        raise ConfigError("exactly one of --segments or --uniform-segments is required")
    if args.uniform_segments is not None and args.uniform_segments < 1:
        raise ConfigError(f"--uniform-segments must be >= 1, got {args.uniform_segments}")
    reports = convert_summe(
        args.dataset_dir,
        args.outdir,
        segments=args.segments,
        uniform=args.uniform_segments,
        clip_segments=args.clip_segments,
    )
    converted = 0
    for report in reports:
        if report.ok:
            converted += 1
        else:
            print(f"skip {report.video_id}: {report.message}", file=sys.stderr)
    print(f"converted {converted}/{len(reports)} videos -> {args.outdir}", file=sys.stderr)
    return 0 if converted == len(reports) else _DATA_EXIT


def _build_parser() -> _Parser:
    parser = _Parser(prog="tacsum-embed", description="Produce summarizer inputs from videos.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_ext = sub.add_parser("extract", help="embed a video's sampled frames to .tacemb")
    p_ext.add_argument("video")
    p_ext.add_argument("--model", required=True, help="backbone name, e.g. dino-b16 or clip-base-16")
    p_ext.add_argument("--rate", type=float, default=4.0, help="target samples per second")
    p_ext.add_argument("-o", "--output", required=True, help="output .tacemb path")
    p_ext.add_argument("--batch-size", type=int, default=16)
    p_ext.add_argument("--device", default="cpu", help="inference device (default cpu)")
    p_ext.set_defaults(func=_cmd_extract)

    p_conv = sub.add_parser("convert-summe", help="convert SumMe ground truth to annotation JSON")
    p_conv.add_argument("dataset_dir")
    p_conv.add_argument("-o", "--outdir", required=True)
    p_conv.add_argument("--segments", default=None, metavar="H5", help="precomputed change-point file")
    p_conv.add_argument(
        "--uniform-segments",
        type=int,
        default=None,
        metavar="N",
        help="fallback fixed segment length when no change-point file is available",
    )
    p_conv.add_argument(
        "--clip-segments",
        action="store_true",
        help="force the last segment to end at the video's frame count",
    )
    p_conv.set_defaults(func=_cmd_convert_summe)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (ExtractError, ConvertError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _DATA_EXIT


def entrypoint() -> None:
    sys.exit(main())

"""Video decoding through OpenCV: metadata probing and indexed frame access."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import cv2
import numpy as np


class ExtractError(ValueError):
    """The video cannot be decoded the way extraction needs."""


@dataclass(frozen=True)
class VideoInfo:
    path: str
    total_frames: int
    fps: float


def probe(path: str | Path) -> VideoInfo:
    p = str(path)
    if not Path(p).is_file():
        raise ExtractError(f"no such video: {p}")
    cap = cv2.VideoCapture(p)
    try:
        if not cap.isOpened():
            raise ExtractError(f"cannot decode {p}")
        total = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        fps = float(cap.get(cv2.CAP_PROP_FPS))
    finally:
        cap.release()
    if total < 1:
        raise ExtractError(f"{p}: container reports no frames")
    if not fps > 0:
        raise ExtractError(f"{p}: container reports no frame rate")
    return VideoInfo(p, total, fps)


def frames_at(path: str | Path, indices: Sequence[int]) -> Iterator[np.ndarray]:
    """Yield RGB frames at the given strictly increasing frame positions.

    Decodes sequentially; position seeking is unreliable across containers
    and codecs, and the sampled indices are dense enough that skipping
    undecoded frames with grab() is cheap.
    """
    cap = cv2.VideoCapture(str(path))
    if not cap.isOpened():
        raise ExtractError(f"cannot decode {path}")
    try:
        wanted = iter(indices)
        target = next(wanted, None)
        pos = 0
        while target is not None:
            if not cap.grab():
                raise ExtractError(
                    f"{path}: stream ended at frame {pos}, frame {target} still needed"
                )
            if pos == target:
                ok, frame = cap.retrieve()
                if not ok:
                    raise ExtractError(f"{path}: failed to decode frame {pos}")
                yield cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
                target = next(wanted, None)
            pos += 1
    finally:
        cap.release()

"""Frozen vision backbones and the registry ``--model`` resolves against.

The two shipped entries wrap pretrained checkpoints loaded through
transformers. Tests register lightweight stand-ins through the same
`register` call, so everything downstream of `load` runs without network
access or weight files.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

import numpy as np


class ConfigError(ValueError):
    """Bad model selection or option value."""


class ModelError(RuntimeError):
    """A backbone failed to load or to produce embeddings."""


class Backbone(Protocol):
    name: str
    dim: int

    def embed(self, frames: Sequence[np.ndarray]) -> np.ndarray:
        """Return (n, dim) float32 for n RGB uint8 frames."""
        ...


@dataclass(frozen=True)
class BackboneSpec:
    """Registry row: the dim is known without loading any weights."""

    name: str
    dim: int
    factory: Callable[[str], Backbone]


_REGISTRY: dict[str, BackboneSpec] = {}


def register(name: str, dim: int, factory: Callable[[str], Backbone]) -> None:
    _REGISTRY[name] = BackboneSpec(name, dim, factory)


def spec(name: str) -> BackboneSpec:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ConfigError(f"unknown model {name!r} (available: {known})") from None


def load(name: str, device: str = "cpu") -> Backbone:
    entry = spec(name)
    try:
        model = entry.factory(device)
    except Exception as exc:
        raise ModelError(f"failed to load {name}: {exc}") from exc
    if model.dim != entry.dim:
        raise ModelError(f"{name} produced dim {model.dim}, registry says {entry.dim}")
    return model


def _torch_deterministic():
    # Shared inference setup: fixed seed and deterministic kernels where the
    # runtime supports them; otherwise eval-mode CPU inference is already
    # reproducible in practice.
    import torch

    torch.manual_seed(0)
    try:
        torch.use_deterministic_algorithms(True, warn_only=True)
    except (AttributeError, TypeError):
        pass
    return torch


class _DinoB16:
    """ViT-B/16 pretrained with self-distillation; embedding = the cls token."""

    name = "dino-b16"
    dim = 768

    def __init__(self, device: str = "cpu"):
        self._torch = _torch_deterministic()
        from transformers import AutoImageProcessor, AutoModel

        self._processor = AutoImageProcessor.from_pretrained("facebook/dino-vitb16")
        self._model = AutoModel.from_pretrained("facebook/dino-vitb16").to(device).eval()
        self._device = device

    def embed(self, frames: Sequence[np.ndarray]) -> np.ndarray:
        inputs = self._processor(images=list(frames), return_tensors="pt").to(self._device)
        with self._torch.no_grad():
            out = self._model(**inputs)
        return out.last_hidden_state[:, 0].cpu().numpy().astype(np.float32)


class _ClipB16:
    """CLIP ViT-B/16 image tower; embedding = the projected image features.

    The cls-vs-pooled choice is not pinned upstream for this tower; the
    packaged image-embedding head is the standard one.
    """

    name = "clip-base-16"
    dim = 512

    def __init__(self, device: str = "cpu"):
        self._torch = _torch_deterministic()
        from transformers import AutoProcessor, CLIPModel

        self._processor = AutoProcessor.from_pretrained("openai/clip-vit-base-patch16")
        self._model = CLIPModel.from_pretrained("openai/clip-vit-base-patch16").to(device).eval()
        self._device = device

    def embed(self, frames: Sequence[np.ndarray]) -> np.ndarray:
        inputs = self._processor(images=list(frames), return_tensors="pt").to(self._device)
        with self._torch.no_grad():
            feats = self._model.get_image_features(**inputs)
        return feats.cpu().numpy().astype(np.float32)


register("dino-b16", 768, _DinoB16)
register("clip-base-16", 512, _ClipB16)

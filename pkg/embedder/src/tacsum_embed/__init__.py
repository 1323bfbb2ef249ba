"""Summarizer input production: frame embeddings and benchmark annotations."""

from .backbones import Backbone, BackboneSpec, ConfigError, ModelError, load, register, spec
from .extract import ExtractReport, extract_embeddings, extract_to_file
from .sampling import sample_indices
from .summe import ConvertError, VideoReport, convert_summe, load_segments_h5, uniform_segments
from .tacemb import MAGIC, VERSION, atomic_write_bytes, render_tacemb, write_tacemb
from .video import ExtractError, VideoInfo, frames_at, probe

__version__ = "0.1.0"

__all__ = [
    "Backbone",
    "BackboneSpec",
    "ConfigError",
    "ConvertError",
    "ExtractError",
    "ExtractReport",
    "MAGIC",
    "ModelError",
    "VERSION",
    "VideoInfo",
    "VideoReport",
    "atomic_write_bytes",
    "convert_summe",
    "extract_embeddings",
    "extract_to_file",
    "frames_at",
    "load",
    "load_segments_h5",
    "probe",
    "register",
    "render_tacemb",
    "sample_indices",
    "spec",
    "uniform_segments",
    "write_tacemb",
]

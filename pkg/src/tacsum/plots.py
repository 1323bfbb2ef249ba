"""Score-curve figures rendered to SVG files.

Head-less by construction: the Agg backend is forced before pyplot loads,
and the SVG hash salt is pinned so repeated renders of the same run are
byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "tacsum"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .pipeline import PipelineArtifacts


def plot_scores(artifacts: PipelineArtifacts, path: str | Path, title: str = "") -> None:
    """Overlay the flat and biased score curves with key positions marked."""
    result = artifacts.result
    n = result.sample_scores.shape[0]
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.step(range(n), artifacts.flat_scores, where="mid", label="flat", color="#999999")
    ax.plot(range(n), result.sample_scores, label="biased", color="#1f5fa8")
    keys = result.keyframes
    ax.plot(keys, result.sample_scores[keys], "o", color="#c23b22", markersize=4, label="keyframes")
    for p in artifacts.partitions.partitions[1:]:
        ax.axvline(p.start - 0.5, color="#dddddd", linewidth=0.8, zorder=0)
    ax.set_xlabel("sample index")
    ax.set_ylabel("importance")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)

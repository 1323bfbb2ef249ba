"""Two-stage dimensionality reduction: PCA followed by exact t-SNE.

PCA is computed from the SVD of the centered data with a fixed sign
convention so results are reproducible. t-SNE is the exact O(n^2) algorithm:
Gaussian input affinities whose per-point bandwidth is found by bisection,
Student-t output affinities, and KL minimization by momentum gradient descent
with early exaggeration. No tree approximation: sample counts stay small
enough (a few hundred per video at typical rates) that the quadratic cost is
acceptable and much easier to verify.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import EmbeddingSet, InvariantError, PipelineConfig, ReducedEmbedding

_LN2 = math.log(2.0)

# Optimizer schedule: exaggerate input affinities x12 and keep the low
# momentum for the first 250 iterations, then release both.
_EXAGGERATION = 12.0
_EXAGGERATION_ITERS = 250
_MOMENTUM_EARLY = 0.5
_MOMENTUM_LATE = 0.8
_MIN_GAIN = 0.01
_P_FLOOR = 1e-12

_ENTROPY_TOL_BITS = 1e-6
_BANDWIDTH_MAX_ITERS = 200


@dataclass(frozen=True)
class PcaModel:
    """Mean vector plus orthonormal principal axes (rows) and their variances."""

    mean: np.ndarray  # (dim,)
    components: np.ndarray  # (pca_dim, dim), rows orthonormal
    explained_variance: np.ndarray  # (pca_dim,), non-increasing

    def check(self) -> "PcaModel":
        gram = self.components @ self.components.T
        if not np.allclose(gram, np.eye(self.components.shape[0]), atol=1e-6):
            raise InvariantError("principal axes are not orthonormal")
        if np.any(np.diff(self.explained_variance) > 1e-12):
            raise InvariantError("explained variance must be non-increasing")
        return self

    def transform(self, data: np.ndarray) -> np.ndarray:
        return (np.asarray(data, dtype=np.float64) - self.mean) @ self.components.T


def _as_matrix(data) -> np.ndarray:
    if isinstance(data, EmbeddingSet):
        return np.asarray(data.data, dtype=np.float64)
    return np.asarray(data, dtype=np.float64)


def pca_fit_transform(data, pca_dim: int) -> tuple[PcaModel, np.ndarray]:
    """Project ``data`` onto its top ``pca_dim`` principal axes.

    Components are the right singular vectors of the centered data; each one
    has its largest-magnitude entry made positive, which pins the otherwise
    arbitrary sign.
    """
    x = _as_matrix(data)
    if x.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    n, dim = x.shape
    if n < 2:
        raise ValueError(f"need at least 2 rows to fit PCA, got {n}")
    if not 1 <= pca_dim <= min(n, dim):
        raise ValueError(f"pca_dim must be in [1, {min(n, dim)}], got {pca_dim}")

    mean = x.mean(axis=0)
    centered = x - mean
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:pca_dim].copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    projected = centered @ components.T
    variance = (singular[:pca_dim] ** 2) / (n - 1)
    return PcaModel(mean, components, variance), projected


def _entropy_bits(sq_dists: np.ndarray, beta: float) -> tuple[float, np.ndarray]:
    """Shannon entropy (bits) and probabilities of p_j ~ exp(-beta * d_j^2)."""
    logits = -beta * sq_dists
    logits -= logits.max()
    p = np.exp(logits)
    total = p.sum()
    p /= total
    nonzero = p > 0
    entropy_nats = -float(np.sum(p[nonzero] * np.log(p[nonzero])))
    return entropy_nats / _LN2, p


def _bandwidth_search(sq_dists: np.ndarray, target_bits: float) -> tuple[np.ndarray, float]:
    """Bisect the Gaussian precision until the entropy matches ``target_bits``."""
    beta = 1.0
    beta_min, beta_max = 0.0, math.inf
    entropy, p = _entropy_bits(sq_dists, beta)
    for _ in range(_BANDWIDTH_MAX_ITERS):
        diff = entropy - target_bits
        if abs(diff) <= _ENTROPY_TOL_BITS:
            break
        if diff > 0:  # too flat: narrow the kernel
            beta_min = beta
            beta = beta * 2.0 if math.isinf(beta_max) else (beta + beta_max) / 2.0
        else:
            beta_max = beta
            beta = beta / 2.0 if beta_min == 0.0 else (beta + beta_min) / 2.0
        entropy, p = _entropy_bits(sq_dists, beta)
    return p, abs(entropy - target_bits)


def _squared_distances(x: np.ndarray) -> np.ndarray:
    sq_norms = np.sum(x * x, axis=1)
    d = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (x @ x.T)
    np.maximum(d, 0.0, out=d)
    np.fill_diagonal(d, 0.0)
    return d


def joint_affinities(x: np.ndarray, perplexity: float) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized, normalized input affinities plus per-point entropy error (bits)."""
    n = x.shape[0]
    sq = _squared_distances(x)
    target_bits = math.log2(perplexity)
    cond = np.zeros((n, n))
    errors = np.zeros(n)
    mask = ~np.eye(n, dtype=bool)
    for i in range(n):
        p, errors[i] = _bandwidth_search(sq[i, mask[i]], target_bits)
        cond[i, mask[i]] = p
    joint = (cond + cond.T) / (2.0 * n)
    np.maximum(joint, _P_FLOOR, out=joint)
    return joint, errors


def _effective_perplexity(n: int, perplexity: float) -> float:
    if n > 3 * perplexity:
        return perplexity
    lowered = max(1.0, float((n - 1) // 3))
    warnings.warn(
        f"perplexity {perplexity} too large for {n} samples; using {lowered}",
        RuntimeWarning,
        stacklevel=3,
    )
    return lowered


def _kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.sum(p * np.log(p / q)))


def _student_affinities(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    num = 1.0 / (1.0 + _squared_distances(y))
    np.fill_diagonal(num, 0.0)
    q = num / num.sum()
    np.maximum(q, _P_FLOOR, out=q)
    return q, num


@dataclass(frozen=True)
class TsneRun:
    """t-SNE output plus the diagnostics the quality checks look at."""

    embedding: ReducedEmbedding
    kl_history: np.ndarray  # kl_history[k-1] = KL after k gradient updates
    entropy_error_bits: np.ndarray  # per-point bandwidth-search residual


def tsne_run(
    x: np.ndarray,
    tsne_dim: int = 2,
    perplexity: float = 30.0,
    seed: int = 0,
    iters: int = 1000,
    learning_rate: float = 200.0,
    record_kl: bool = False,
) -> TsneRun:
    """Exact t-SNE with the published optimizer schedule.

    Deterministic given ``seed``. ``kl_history`` (only filled when
    ``record_kl``) tracks the KL divergence against the un-exaggerated input
    affinities after every update.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise ValueError("t-SNE needs at least 2 points")
    perplexity = _effective_perplexity(n, perplexity)
    p, entropy_err = joint_affinities(x, perplexity)

    rng = np.random.default_rng(seed)
    y = rng.standard_normal((n, tsne_dim)) * 1e-2  # N(0, 1e-4)
    velocity = np.zeros_like(y)
    gains = np.ones_like(y)
    kl_history = np.zeros(iters) if record_kl else np.zeros(0)

    for it in range(iters):
        p_eff = p * _EXAGGERATION if it < _EXAGGERATION_ITERS else p
        q, num = _student_affinities(y)
        if record_kl and it > 0:
            kl_history[it - 1] = _kl_divergence(p, q)

        w = (p_eff - q) * num
        grad = 4.0 * (w.sum(axis=1)[:, None] * y - w @ y)
        if not np.all(np.isfinite(grad)):
            raise FloatingPointError(
                f"non-finite t-SNE gradient at iteration {it} (n={n}, perplexity={perplexity})"
            )

        momentum = _MOMENTUM_EARLY if it < _EXAGGERATION_ITERS else _MOMENTUM_LATE
        same_sign = (grad > 0) == (velocity > 0)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        np.maximum(gains, _MIN_GAIN, out=gains)
        velocity = momentum * velocity - learning_rate * (gains * grad)
        y += velocity
        y -= y.mean(axis=0)

    if record_kl:
        q, _ = _student_affinities(y)
        kl_history[iters - 1] = _kl_divergence(p, q)

    return TsneRun(ReducedEmbedding(y), kl_history, entropy_err)


def tsne(
    x: np.ndarray,
    tsne_dim: int = 2,
    perplexity: float = 30.0,
    seed: int = 0,
    iters: int = 1000,
    learning_rate: float = 200.0,
) -> ReducedEmbedding:
    return tsne_run(x, tsne_dim, perplexity, seed, iters, learning_rate).embedding


def reduce_embeddings(embeddings: EmbeddingSet, config: PipelineConfig) -> tuple[PcaModel, ReducedEmbedding]:
    """Full PCA -> t-SNE reduction with the configured dimensions.

    The PCA width is clamped to what the input can support (short or narrow
    videos), with a warning when that changes the configured value.
    """
    n, dim = embeddings.data.shape
    pca_dim = min(config.pca_dim, n, dim)
    if pca_dim != config.pca_dim:
        warnings.warn(
            f"pca_dim {config.pca_dim} clamped to {pca_dim} for a {n}x{dim} embedding",
            RuntimeWarning,
            stacklevel=2,
        )
    if pca_dim < config.tsne_dim:
        raise ValueError(
            f"input supports at most {pca_dim} PCA dims, below tsne_dim={config.tsne_dim}"
        )
    model, projected = pca_fit_transform(embeddings, pca_dim)
    reduced = tsne(
        projected,
        tsne_dim=config.tsne_dim,
        perplexity=config.perplexity,
        seed=config.seed,
        iters=config.tsne_iters,
        learning_rate=config.tsne_learning_rate,
    )
    return model, reduced

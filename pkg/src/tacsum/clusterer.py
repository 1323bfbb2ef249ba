"""Coarse-to-fine clustering of reduced embeddings.

A CF-tree (the BIRCH data structure) makes one pass over the samples and
yields coarse clusters cheaply; average-linkage agglomeration then merges
those down to a target count K that grows with video length through a
logistic curve. Samples are inserted in temporal order, so the whole stage
is deterministic for a given input.
"""

from __future__ import annotations

import math

import numpy as np

from .model import LabelSequence, PipelineConfig, ReducedEmbedding

_SUBSAMPLE_CAP = 200  # points used to estimate the absorption threshold


def target_cluster_count(
    n_samples: int,
    k_max: int = 16,
    k_midpoint: float = 200.0,
    k_scale: float = 100.0,
) -> int:
    """Logistic ramp from 2 up to ``k_max`` clusters as videos get longer.

    Sits at k_max/2 when ``n_samples`` equals the midpoint and saturates for
    long inputs. Never exceeds the sample count itself.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max}")
    raw = k_max / (1.0 + math.exp(-(n_samples - k_midpoint) / k_scale))
    return min(max(int(round(raw)), 2), k_max, n_samples)


class _Entry:
    """Clustering feature: count, linear sum, squared sum.

    Also the tree edge: ``child`` points at a subtree for internal entries
    and is None for leaf entries, which stand for one coarse cluster each.
    """

    __slots__ = ("n", "linear_sum", "squared_sum", "child", "cluster_id")

    def __init__(self, dim: int, child: "_Node | None" = None, cluster_id: int = -1):
        self.n = 0
        self.linear_sum = np.zeros(dim)
        self.squared_sum = 0.0
        self.child = child
        self.cluster_id = cluster_id

    def centroid(self) -> np.ndarray:
        return self.linear_sum / self.n

    def radius_sq(self) -> float:
        c = self.centroid()
        return self.squared_sum / self.n - float(c @ c)

    def add_point(self, x: np.ndarray) -> None:
        self.n += 1
        self.linear_sum += x
        self.squared_sum += float(x @ x)

    def absorb(self, other: "_Entry") -> None:
        self.n += other.n
        self.linear_sum += other.linear_sum
        self.squared_sum += other.squared_sum


class _Node:
    __slots__ = ("leaf", "entries")

    def __init__(self, leaf: bool):
        self.leaf = leaf
        self.entries: list[_Entry] = []


def _nearest(entries: list[_Entry], x: np.ndarray) -> tuple[int, float]:
    """Index and distance of the entry whose centroid is closest (ties: first)."""
    best, best_d = 0, math.inf
    for i, e in enumerate(entries):
        d = float(np.linalg.norm(x - e.centroid()))
        if d < best_d:
            best, best_d = i, d
    return best, best_d


def _split(node: _Node, dim: int) -> tuple[_Entry, _Entry]:
    """Farthest-pair split of an overfull node into two sibling entries."""
    cents = np.array([e.centroid() for e in node.entries])
    diff = cents[:, None, :] - cents[None, :, :]
    dists = np.sqrt(np.sum(diff * diff, axis=2))
    i, j = np.unravel_index(int(np.argmax(dists)), dists.shape)
    seed_a, seed_b = (i, j) if i < j else (j, i)

    left = _Node(node.leaf)
    right = _Node(node.leaf)
    for idx, entry in enumerate(node.entries):
        da = dists[idx, seed_a]
        db = dists[idx, seed_b]
        (left if da <= db else right).entries.append(entry)

    def wrap(child: _Node) -> _Entry:
        e = _Entry(dim, child=child)
        for sub in child.entries:
            e.absorb(sub)
        return e

    return wrap(left), wrap(right)


class _CfTree:
    def __init__(self, dim: int, branching: int, threshold: float):
        self.dim = dim
        self.branching = branching
        self.threshold = threshold
        self.root = _Node(leaf=True)
        self.next_id = 0

    def insert(self, x: np.ndarray) -> int:
        label, split = self._insert(self.root, x)
        if split is not None:
            new_root = _Node(leaf=False)
            new_root.entries.extend(split)
            self.root = new_root
        return label

    def _insert(self, node: _Node, x: np.ndarray) -> tuple[int, tuple[_Entry, _Entry] | None]:
        if node.leaf:
            if node.entries:
                idx, dist = _nearest(node.entries, x)
                if dist <= self.threshold:
                    node.entries[idx].add_point(x)
                    return node.entries[idx].cluster_id, None
            entry = _Entry(self.dim, cluster_id=self.next_id)
            self.next_id += 1
            entry.add_point(x)
            node.entries.append(entry)
            if len(node.entries) > self.branching:
                return entry.cluster_id, _split(node, self.dim)
            return entry.cluster_id, None

        idx, _ = _nearest(node.entries, x)
        chosen = node.entries[idx]
        label, split = self._insert(chosen.child, x)
        if split is None:
            chosen.add_point(x)
            return label, None
        # Child overflowed: its replacement pair already carries x.
        node.entries[idx : idx + 1] = list(split)
        if len(node.entries) > self.branching:
            return label, _split(node, self.dim)
        return label, None


def _absorption_threshold(data: np.ndarray, factor: float, seed: int) -> float:
    """``factor`` times the median pairwise distance of a capped subsample.

    The reduced space has no intrinsic scale, so the threshold must be
    data-relative. Capping the subsample keeps this O(1) in video length.
    """
    n = data.shape[0]
    if n < 2:
        return 0.0
    if n > _SUBSAMPLE_CAP:
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(n, size=_SUBSAMPLE_CAP, replace=False))
        sub = data[pick]
    else:
        sub = data
    diff = sub[:, None, :] - sub[None, :, :]
    dists = np.sqrt(np.sum(diff * diff, axis=2))
    iu = np.triu_indices(sub.shape[0], k=1)
    return factor * float(np.median(dists[iu]))


def birch_coarse(
    reduced: ReducedEmbedding,
    branching: int = 50,
    threshold_factor: float = 0.5,
    seed: int = 0,
) -> LabelSequence:
    """One-pass CF-tree clustering; each leaf entry is one coarse cluster.

    A zero threshold (all points identical) degenerates gracefully: every
    duplicate still lands in the first entry at distance 0.
    """
    data = np.asarray(reduced.data, dtype=np.float64)
    if branching < 2:
        raise ValueError(f"branching must be at least 2, got {branching}")
    threshold = _absorption_threshold(data, threshold_factor, seed)
    tree = _CfTree(data.shape[1], branching, threshold)
    labels = np.empty(data.shape[0], dtype=np.int64)
    for i, row in enumerate(data):
        labels[i] = tree.insert(row)
    return LabelSequence(labels, tree.next_id).check()


def agglomerate(reduced: ReducedEmbedding, coarse: LabelSequence, k: int) -> LabelSequence:
    """Average-linkage merge of coarse-cluster centroids down to ``k`` groups.

    Groups are tracked by the smallest coarse id they contain; among
    equally-close pairs the lexicographically smallest id pair merges first,
    and the final labels are compacted to [0, k) in id order. Asking for at
    least as many clusters as exist is a no-op.
    """
    labels = np.asarray(coarse.labels)
    ids = np.unique(labels)
    m = ids.size
    if k >= m:
        if k > m:
            return coarse
        remap = {int(orig): new for new, orig in enumerate(ids)}
        return LabelSequence(np.array([remap[int(v)] for v in labels], dtype=np.int64), m).check()
    if k < 1:
        raise ValueError(f"cluster count must be positive, got {k}")

    data = np.asarray(reduced.data, dtype=np.float64)
    centroids = np.array([data[labels == i].mean(axis=0) for i in ids])
    diff = centroids[:, None, :] - centroids[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    # Upper triangle only; inf elsewhere so argmin lands on the smallest
    # (row, col) pair among ties thanks to row-major scanning.
    dist[np.tril_indices(m)] = math.inf

    sizes = np.ones(m)  # centroids per group, the average-linkage weights
    active = np.ones(m, dtype=bool)
    members: list[list[int]] = [[i] for i in range(m)]
    for _ in range(m - k):
        flat = int(np.argmin(dist))
        a, b = divmod(flat, m)
        for c in range(m):
            if not active[c] or c == a or c == b:
                continue
            d_ac = dist[min(a, c), max(a, c)]
            d_bc = dist[min(b, c), max(b, c)]
            merged = (sizes[a] * d_ac + sizes[b] * d_bc) / (sizes[a] + sizes[b])
            dist[min(a, c), max(a, c)] = merged
        sizes[a] += sizes[b]
        active[b] = False
        dist[b, :] = math.inf
        dist[:, b] = math.inf
        members[a].extend(members[b])
        members[b] = []

    # Surviving groups keep their minimum id as key; order those keys.
    final = np.empty(labels.shape[0], dtype=np.int64)
    remap = {}
    for new, slot in enumerate(i for i in range(m) if active[i]):
        for member_slot in members[slot]:
            remap[int(ids[member_slot])] = new
    for i, lab in enumerate(labels):
        final[i] = remap[int(lab)]
    return LabelSequence(final, k).check()


def cluster_samples(reduced: ReducedEmbedding, config: PipelineConfig) -> LabelSequence:
    """Coarse pass then agglomeration to the sigmoid-determined count."""
    k = target_cluster_count(
        len(reduced.data), config.k_max, config.k_midpoint, config.k_scale
    )
    coarse = birch_coarse(
        reduced,
        branching=config.birch_branching,
        threshold_factor=config.birch_threshold_factor,
        seed=config.seed,
    )
    return agglomerate(reduced, coarse, k)

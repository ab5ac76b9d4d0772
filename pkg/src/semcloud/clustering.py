"""Bisecting k-means over tag similarity profiles, plus similarity ordering.

The partition step repeatedly splits the largest cluster with a seeded
2-means (cosine geometry, spherical centroids), keeping the best of several
trials per split.  The ordering step chains clusters and tags greedily so
that neighbours are similar: similar tags end up side by side, similar
clusters end up on adjacent rows.

Everything is deterministic for a fixed (matrix, k, seed, trials): trial RNG
streams are derived by hashing (seed, split index, trial index), and all
floating-point reductions use elementwise multiply + ``np.sum`` so the
operation order does not depend on the BLAS in use.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .similarity import SimilarityMatrix

SPLIT_RULES = ("largest", "weakest")


@dataclass(frozen=True)
class ClusterSet:
    """A partition of tag indices into non-empty clusters."""

    clusters: tuple[tuple[int, ...], ...]
    k_requested: int
    seed: int

    def member_count(self) -> int:
        return sum(len(c) for c in self.clusters)

    def to_dict(self, tags: Sequence[str] | None = None) -> dict:
        clusters = [
            [tags[i] for i in c] if tags is not None else list(c)
            for c in self.clusters
        ]
        return {"k_requested": self.k_requested, "seed": self.seed, "clusters": clusters}

    def to_json(self, tags: Sequence[str] | None = None) -> str:
        return json.dumps(self.to_dict(tags), sort_keys=True)


def _derive_seed(seed: int, split_index: int, trial: int) -> int:
    """Platform-stable per-trial RNG seed."""
    data = f"{seed}:{split_index}:{trial}".encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def _unit_rows(matrix: SimilarityMatrix, space: str) -> np.ndarray:
    rows = matrix.profile_matrix(space)
    norms = np.sqrt(np.sum(rows * rows, axis=1))
    return rows / norms[:, np.newaxis]


def _mean_direction(points: np.ndarray) -> np.ndarray:
    centroid = points.mean(axis=0)
    norm = float(np.sqrt(np.sum(centroid * centroid)))
    if norm == 0.0:
        # unreachable for non-negative profiles with positive diagonals, but a
        # zero centroid must not poison the trial: it yields all-tie sims,
        # which the caller rejects as a degenerate split
        return centroid
    return centroid / norm


def _two_means(
    unit: np.ndarray, members: list[int], seed_pair: tuple[int, int], max_iter: int = 100
):
    """One 2-means run.  Returns (half0, half1, quality) or None if degenerate."""
    sub = unit[members]
    c0 = unit[seed_pair[0]]
    c1 = unit[seed_pair[1]]

    s0 = np.sum(sub * c0, axis=1)
    s1 = np.sum(sub * c1, axis=1)
    assign = s1 > s0  # ties go to the first centroid
    if assign.all() or not assign.any():
        return None
    for _ in range(max_iter):
        c0 = _mean_direction(sub[~assign])
        c1 = _mean_direction(sub[assign])
        s0 = np.sum(sub * c0, axis=1)
        s1 = np.sum(sub * c1, axis=1)
        new_assign = s1 > s0
        if new_assign.all() or not new_assign.any():
            return None
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign

    quality = float(np.mean(np.where(assign, s1, s0)))
    half0 = [m for m, flag in zip(members, assign) if not flag]
    half1 = [m for m, flag in zip(members, assign) if flag]
    return half0, half1, quality


def _min_tag(cluster: Sequence[int], tags: Sequence[str]) -> str:
    return min(tags[i] for i in cluster)


def _bisect(
    unit: np.ndarray,
    members: list[int],
    tags: Sequence[str],
    seed: int,
    split_index: int,
    trials: int,
) -> tuple[list[int], list[int]]:
    best_quality = None
    best_halves = None
    for trial in range(trials):
        rng = random.Random(_derive_seed(seed, split_index, trial))
        seed_pair = tuple(rng.sample(members, 2))
        result = _two_means(unit, members, seed_pair)
        if result is None:
            continue
        half0, half1, quality = result
        if best_quality is None or quality > best_quality:
            best_quality = quality
            best_halves = (half0, half1)

    if best_halves is None:
        # every trial collapsed into one half: peel off the member farthest
        # from the cluster centroid so the split always makes progress
        centroid = _mean_direction(unit[members])
        sims = np.sum(unit[members] * centroid, axis=1)
        low = sims.min()
        outliers = [m for m, s in zip(members, sims) if s == low]
        peel = min(outliers, key=lambda i: tags[i])
        best_halves = ([peel], [m for m in members if m != peel])

    half0, half1 = (sorted(h) for h in best_halves)
    if _min_tag(half1, tags) < _min_tag(half0, tags):
        half0, half1 = half1, half0
    return half0, half1


def _pairwise_mean(dense: np.ndarray, cluster: Sequence[int]) -> float:
    """Mean RC over unordered within-cluster pairs; nan for singletons."""
    k = len(cluster)
    if k < 2:
        return float("nan")
    idx = np.asarray(cluster)
    block = dense[np.ix_(idx, idx)]
    total = float(np.sum(np.triu(block, 1)))
    return total / (k * (k - 1) / 2)


def _pick_split(
    clusters: list[list[int]], dense: np.ndarray, tags: Sequence[str], rule: str
) -> int:
    splittable = [pos for pos, c in enumerate(clusters) if len(c) >= 2]
    if rule == "largest":
        return min(
            splittable, key=lambda pos: (-len(clusters[pos]), _min_tag(clusters[pos], tags))
        )
    # weakest: lowest mean intra-cluster RC
    return min(
        splittable,
        key=lambda pos: (_pairwise_mean(dense, clusters[pos]), _min_tag(clusters[pos], tags)),
    )


def bisecting_kmeans(
    matrix: SimilarityMatrix,
    k: int,
    seed: int = 0,
    trials: int = 10,
    *,
    space: str = "jaccard",
    split_rule: str = "largest",
) -> ClusterSet:
    """Partition the matrix's tags into min(k, n) clusters.

    Starts from a single cluster and repeatedly bisects until k clusters
    exist.  Each bisection runs ``trials`` seeded 2-means attempts and keeps
    the one whose members sit closest to their half's centroid (mean cosine).
    The returned clusters are canonically ordered (by lexicographically
    smallest member tag); use ``order_cluster_set`` for the layout order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if split_rule not in SPLIT_RULES:
        raise ValueError(f"unknown split rule {split_rule!r}")

    n = len(matrix)
    unit = _unit_rows(matrix, space)
    dense = matrix.profile_matrix("jaccard")
    tags = matrix.tags

    clusters: list[list[int]] = [list(range(n))]
    split_index = 0
    while len(clusters) < min(k, n):
        pos = _pick_split(clusters, dense, tags, split_rule)
        half0, half1 = _bisect(unit, clusters[pos], tags, seed, split_index, trials)
        clusters[pos : pos + 1] = [half0, half1]
        split_index += 1

    canonical = sorted(
        (tuple(sorted(c)) for c in clusters), key=lambda c: _min_tag(c, tags)
    )
    return ClusterSet(clusters=tuple(canonical), k_requested=k, seed=seed)


def cluster_similarity(
    matrix: SimilarityMatrix, cluster_a: Sequence[int], cluster_b: Sequence[int]
) -> float:
    """Mean RC over all cross pairs between two disjoint clusters."""
    if not len(cluster_a) or not len(cluster_b):
        raise ValueError("clusters must be non-empty")
    if set(cluster_a) & set(cluster_b):
        raise ValueError("clusters must be disjoint")
    dense = matrix.profile_matrix("jaccard")
    block = dense[np.ix_(np.asarray(cluster_a), np.asarray(cluster_b))]
    return float(np.mean(block))


def order_clusters(matrix: SimilarityMatrix, cluster_set: ClusterSet) -> ClusterSet:
    """Greedy similarity chain over clusters: each row follows its most
    similar remaining neighbour, so similar clusters are vertical neighbours.

    The chain starts from the cluster with the highest total cross-similarity
    to all others; all ties break by lexicographically smallest member tag.
    """
    clusters = list(cluster_set.clusters)
    if len(clusters) <= 1:
        return cluster_set
    tags = matrix.tags
    min_tags = [_min_tag(c, tags) for c in clusters]
    sims = {
        (a, b): cluster_similarity(matrix, clusters[a], clusters[b])
        for a in range(len(clusters))
        for b in range(a + 1, len(clusters))
    }

    def sim(a: int, b: int) -> float:
        return sims[(a, b) if a < b else (b, a)]

    totals = [
        sum(sim(a, b) for b in range(len(clusters)) if b != a)
        for a in range(len(clusters))
    ]
    start = min(range(len(clusters)), key=lambda a: (-totals[a], min_tags[a]))

    order = [start]
    remaining = [a for a in range(len(clusters)) if a != start]
    while remaining:
        last = order[-1]
        nxt = min(remaining, key=lambda a: (-sim(last, a), min_tags[a]))
        order.append(nxt)
        remaining.remove(nxt)

    return ClusterSet(
        clusters=tuple(clusters[a] for a in order),
        k_requested=cluster_set.k_requested,
        seed=cluster_set.seed,
    )


def order_tags_within(matrix: SimilarityMatrix, cluster: Sequence[int]) -> tuple[int, ...]:
    """Greedy similarity chain over one cluster's tags (horizontal order)."""
    members = list(cluster)
    if not members:
        raise ValueError("cluster must not be empty")
    if len(members) == 1:
        return tuple(members)
    dense = matrix.profile_matrix("jaccard")
    tags = matrix.tags

    totals = {
        i: sum(dense[i, j] for j in members if j != i) for i in members
    }
    start = min(members, key=lambda i: (-totals[i], tags[i]))

    order = [start]
    remaining = [i for i in members if i != start]
    while remaining:
        last = order[-1]
        nxt = min(remaining, key=lambda i: (-dense[last, i], tags[i]))
        order.append(nxt)
        remaining.remove(nxt)
    return tuple(order)


def order_cluster_set(matrix: SimilarityMatrix, cluster_set: ClusterSet) -> ClusterSet:
    """Apply both ordering passes: cluster chain, then tag chain inside each."""
    ordered = order_clusters(matrix, cluster_set)
    return ClusterSet(
        clusters=tuple(order_tags_within(matrix, c) for c in ordered.clusters),
        k_requested=ordered.k_requested,
        seed=ordered.seed,
    )


def intra_similarity(matrix: SimilarityMatrix, cluster: Sequence[int]) -> float:
    """Mean pairwise RC within a cluster (nan for singletons); diagnostics."""
    if not len(cluster):
        raise ValueError("cluster must not be empty")
    return _pairwise_mean(matrix.profile_matrix("jaccard"), cluster)


def partition_quality(matrix: SimilarityMatrix, cluster_set: ClusterSet) -> dict:
    """Mean intra- vs inter-cluster RC for a partition; diagnostics."""
    dense = matrix.profile_matrix("jaccard")
    intra = []
    for c in cluster_set.clusters:
        for x in range(len(c)):
            for y in range(x + 1, len(c)):
                intra.append(dense[c[x], c[y]])
    inter = []
    clusters = cluster_set.clusters
    for a in range(len(clusters)):
        for b in range(a + 1, len(clusters)):
            block = dense[np.ix_(np.asarray(clusters[a]), np.asarray(clusters[b]))]
            inter.extend(block.ravel().tolist())
    return {
        "intra_mean": float(np.mean(intra)) if intra else float("nan"),
        "inter_mean": float(np.mean(inter)) if inter else float("nan"),
    }

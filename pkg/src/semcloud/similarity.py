"""Pairwise tag similarity: relative co-occurrence (Jaccard) and profiles.

The matrix over the selected tags is built through an inverted index, so
only tag pairs that actually share a resource cost anything; all-zero pairs
stay implicit.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .corpus import Corpus
from .errors import UnknownTagError

PROFILE_SPACES = ("jaccard", "counts")


class SimilarityMatrix:
    """Symmetric relative co-occurrence over a fixed, ordered tag list.

    Off-diagonal zeros are implicit; the diagonal is 1.  Raw co-occurrence
    counts are kept alongside the Jaccard values so callers can choose which
    space to cluster in.
    """

    __slots__ = ("tags", "_index", "_values", "_counts", "_n", "_dense_cache")

    def __init__(
        self,
        tags: Sequence[str],
        values: dict[tuple[int, int], float],
        counts: dict[tuple[int, int], int],
        posting_sizes: Sequence[int],
    ):
        self.tags: tuple[str, ...] = tuple(tags)
        self._index = {t: i for i, t in enumerate(self.tags)}
        self._values = values
        self._counts = counts
        self._n = np.asarray(posting_sizes, dtype=np.int64)
        self._dense_cache: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.tags)

    def index_of(self, tag: str) -> int:
        try:
            return self._index[tag]
        except KeyError:
            raise UnknownTagError(tag) from None

    def value(self, i: int, j: int) -> float:
        """RC between tags at positions i and j (diagonal = 1)."""
        n = len(self.tags)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"tag index out of range: ({i}, {j})")
        if i == j:
            return 1.0
        key = (i, j) if i < j else (j, i)
        return self._values.get(key, 0.0)

    def value_by_tag(self, a: str, b: str) -> float:
        return self.value(self.index_of(a), self.index_of(b))

    def nonzero_pairs(self) -> Iterator[tuple[int, int, float]]:
        """Off-diagonal nonzero cells, (i, j, value) with i < j, sorted."""
        for key in sorted(self._values):
            yield key[0], key[1], self._values[key]

    def profile_matrix(self, space: str = "jaccard") -> np.ndarray:
        """Dense row-profile matrix for clustering; treat as read-only.

        "jaccard" rows hold RC values with a unit diagonal; "counts" rows hold
        raw co-occurrence counts with n_j on the diagonal.
        """
        if space not in PROFILE_SPACES:
            raise ValueError(f"unknown profile space {space!r}")
        cached = self._dense_cache.get(space)
        if cached is not None:
            return cached
        n = len(self.tags)
        dense = np.zeros((n, n), dtype=np.float64)
        source = self._values if space == "jaccard" else self._counts
        for (i, j), v in source.items():
            dense[i, j] = v
            dense[j, i] = v
        if space == "jaccard":
            np.fill_diagonal(dense, 1.0)
        else:
            dense[np.arange(n), np.arange(n)] = self._n
        self._dense_cache[space] = dense
        return dense


def jaccard(corpus: Corpus, tag_a: str, tag_b: str) -> float:
    """Relative co-occurrence |A∩B| / |A∪B| over the two tags' resource sets."""
    a = corpus.postings(tag_a)
    b = corpus.postings(tag_b)
    if tag_a == tag_b:
        return 1.0
    inter = _kernels.active().intersection_size(a, b)
    union = len(a) + len(b) - inter
    return inter / union


def build_matrix(corpus: Corpus, tags: Sequence[str]) -> SimilarityMatrix:
    """Jaccard matrix over the given tags, in the given order.

    Candidate pairs come from inverting the selected tags' postings by
    resource; only co-occurring pairs are materialized.
    """
    tags = list(tags)
    if not tags:
        raise ValueError("tag set must not be empty")
    if len(set(tags)) != len(tags):
        raise ValueError("tag set contains duplicates")
    tag_ids = [corpus.tag_id(t) for t in tags]

    postings = [corpus.postings_by_id(g) for g in tag_ids]
    sizes = np.array([len(p) for p in postings], dtype=np.int64)

    resources = np.concatenate(postings) if postings else np.empty(0, dtype=np.int64)
    locals_ = np.repeat(np.arange(len(tags), dtype=np.int64), sizes)
    order = np.lexsort((locals_, resources))
    resources = resources[order]
    locals_ = locals_[order]

    # row boundaries: one row per distinct resource touched
    if resources.size:
        breaks = np.flatnonzero(np.diff(resources)) + 1
        indptr = np.concatenate(([0], breaks, [resources.size])).astype(np.int64)
    else:
        indptr = np.zeros(1, dtype=np.int64)

    ii, jj, cc = _kernels.active().cooccurrence_counts(
        np.ascontiguousarray(indptr), np.ascontiguousarray(locals_), len(tags)
    )

    union = sizes[ii] + sizes[jj] - cc
    values = {}
    counts = {}
    for i, j, c, u in zip(ii.tolist(), jj.tolist(), cc.tolist(), union.tolist()):
        values[(i, j)] = c / u
        counts[(i, j)] = c
    return SimilarityMatrix(tags, values, counts, sizes)


def cosine_rows(matrix: SimilarityMatrix, i: int, j: int) -> float:
    """Cosine similarity between the similarity-profile rows of tags i and j."""
    dense = matrix.profile_matrix("jaccard")
    n = len(matrix)
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"row index out of range: ({i}, {j})")
    a, b = dense[i], dense[j]
    # elementwise multiply + reduce keeps the summation order platform-stable
    dot = float(np.sum(a * b))
    na = float(np.sqrt(np.sum(a * a)))
    nb = float(np.sqrt(np.sum(b * b)))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


def synonym_pairs(
    matrix: SimilarityMatrix, threshold: float
) -> list[tuple[str, str, float]]:
    """Tag pairs whose RC reaches the threshold; candidates for synonymy.

    Pairs are reported, never merged.  Sorted by descending value, then
    lexicographically.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    hits = [
        (matrix.tags[i], matrix.tags[j], v)
        for i, j, v in matrix.nonzero_pairs()
        if v >= threshold
    ]
    hits.sort(key=lambda e: (-e[2], e[0], e[1]))
    return hits

"""Tag usefulness scoring, top-N selection, and selection-quality statistics.

Four scoring functions are supported, identified by the stable ids "a"-"d":

    a  resource frequency            n_j
    b  total user weight             sum_i d_ij
    c  damped weight per tag load    sum_i ln(d_ij) / m_i
    d  damped weight, squared load   sum_i ln(d_ij) / m_i^2

where the sums run over the resources carrying the tag and m_i is the number
of distinct tags on resource i.  Method "d" discounts tags that live on
heavily-tagged resources, which lowers the semantic density of the selected
set while keeping coverage close to plain frequency ranking.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus
from .similarity import SimilarityMatrix, build_matrix


class SelectionMethod(enum.Enum):
    """One of the four scoring functions; serializes to "a".."d"."""

    FREQUENCY = "a"
    WEIGHT_SUM = "b"
    LOG_NORM = "c"
    LOG_NORM_SQ = "d"

    @property
    def id(self) -> str:
        return self.value

    @classmethod
    def from_id(cls, ident: str) -> "SelectionMethod":
        try:
            return cls(ident)
        except ValueError:
            raise ValueError(
                f"unknown selection method {ident!r} (expected one of a, b, c, d)"
            ) from None


@dataclass(frozen=True)
class SelectionResult:
    """Top-N tags under one method, highest score first.

    Scores are non-increasing; equal scores are ordered lexicographically by
    tag.  Zero-score tags are never selected, so the result may hold fewer
    than ``n_requested`` entries.
    """

    method: SelectionMethod
    n_requested: int
    entries: tuple[tuple[str, float], ...]

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(tag for tag, _ in self.entries)

    def score_of(self, tag: str) -> float:
        for t, s in self.entries:
            if t == tag:
                return s
        raise KeyError(tag)


def score(
    corpus: Corpus, tag: str, method: SelectionMethod, *, smoothing: bool = False
) -> float:
    """Usefulness score of one tag under the given method.

    ``smoothing`` substitutes ln(1 + d_ij) for ln(d_ij) in methods c/d, for
    corpora dominated by single-user cells (where ln(1) = 0 would zero almost
    every score).  Off by default.
    """
    j = corpus.tag_id(tag)
    return _score_by_id(corpus, j, method, smoothing)


def _score_by_id(corpus: Corpus, j: int, method: SelectionMethod, smoothing: bool) -> float:
    weights = corpus.weights_by_id(j)
    if method is SelectionMethod.FREQUENCY:
        return float(weights.size)
    if method is SelectionMethod.WEIGHT_SUM:
        return float(weights.sum())
    logs = np.log1p(weights) if smoothing else np.log(weights)
    m = corpus.m[corpus.postings_by_id(j)]
    if method is SelectionMethod.LOG_NORM:
        return float(np.sum(logs / m))
    return float(np.sum(logs / (m * m)))


def score_all(
    corpus: Corpus, method: SelectionMethod, *, smoothing: bool = False
) -> np.ndarray:
    """Scores for every tag, aligned with ``corpus.tags``."""
    return np.array(
        [_score_by_id(corpus, j, method, smoothing) for j in range(corpus.n_tags)],
        dtype=np.float64,
    )


def select_top_n(
    corpus: Corpus,
    method: SelectionMethod,
    n: int,
    *,
    exclude: Iterable[str] = (),
    smoothing: bool = False,
) -> SelectionResult:
    """The n highest-scoring tags under the method.

    Ties break lexicographically; zero-score tags are dropped even if that
    leaves fewer than n entries.  ``exclude`` removes tags from candidacy
    before ranking (used for sub-cloud recomputation).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    excluded = set(exclude)
    scores = score_all(corpus, method, smoothing=smoothing)
    scored = [
        (tag, float(scores[j]))
        for j, tag in enumerate(corpus.tags)
        if scores[j] > 0.0 and tag not in excluded
    ]
    scored.sort(key=lambda e: (-e[1], e[0]))
    return SelectionResult(method=method, n_requested=n, entries=tuple(scored[:n]))


def coverage(corpus: Corpus, tags: Sequence[str]) -> tuple[int, float]:
    """(count, fraction) of resources described by at least one of the tags."""
    if not tags:
        raise ValueError("tag set must not be empty")
    union = np.unique(np.concatenate([corpus.postings(t) for t in tags]))
    return int(union.size), union.size / corpus.n_resources


def overlap_stats(matrix: SimilarityMatrix, tags: Sequence[str]) -> tuple[float, float]:
    """Mean and population standard deviation of RC over all unordered pairs.

    Pairs with zero co-occurrence count toward the mean; that is what makes
    the statistic comparable across selections of the same size.
    """
    if len(tags) < 2:
        raise ValueError("need at least 2 tags")
    values = np.array(
        [matrix.value_by_tag(a, b) for a, b in combinations(tags, 2)],
        dtype=np.float64,
    )
    return float(values.mean()), float(values.std())


@dataclass(frozen=True)
class MethodReport:
    """One row of the selection-method comparison."""

    method: SelectionMethod
    tags_selected: int
    coverage_count: int
    coverage_fraction: float
    overlap_mean: float
    overlap_std: float


def method_comparison(
    corpus: Corpus, n: int, *, smoothing: bool = False
) -> list[MethodReport]:
    """Coverage and overlap of each method's top-n selection."""
    rows = []
    for method in SelectionMethod:
        sel = select_top_n(corpus, method, n, smoothing=smoothing)
        if not sel.entries:
            rows.append(MethodReport(method, 0, 0, 0.0, math.nan, math.nan))
            continue
        cov_count, cov_frac = coverage(corpus, sel.tags)
        if len(sel.entries) < 2:
            mean = std = math.nan
        else:
            matrix = build_matrix(corpus, sel.tags)
            mean, std = overlap_stats(matrix, sel.tags)
        rows.append(
            MethodReport(method, len(sel.entries), cov_count, cov_frac, mean, std)
        )
    return rows

"""End-to-end cloud computation: selection -> similarity -> clustering -> layout."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .clustering import bisecting_kmeans, order_cluster_set
from .corpus import Corpus
from .layout import DEFAULT_BUCKETS, CloudModel, build_cloud
from .similarity import build_matrix
from .weighting import SelectionMethod, select_top_n


@dataclass(frozen=True)
class CloudParams:
    """Everything that determines a cloud besides the corpus itself."""

    method: str = "d"
    n: int = 95
    k: int = 12
    mode: str = "clustered"
    buckets: int = DEFAULT_BUCKETS
    seed: int = 0
    trials: int = 10
    smoothing: bool = False
    cluster_space: str = "jaccard"

    def with_overrides(self, **kwargs) -> "CloudParams":
        supplied = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **supplied)


def compute_cloud(
    corpus: Corpus,
    params: CloudParams,
    *,
    exclude: Iterable[str] = (),
    corpus_digest: str | None = None,
) -> CloudModel:
    """Run the whole pipeline over a corpus.

    ``exclude`` removes tags from selection candidacy (sub-cloud recomputation
    passes the clicked tag here).  ``corpus_digest`` is the provenance digest
    recorded in the model; it defaults to the digest of ``corpus`` but callers
    computing sub-clouds pass the parent corpus digest instead.
    """
    method = SelectionMethod.from_id(params.method)
    digest = corpus_digest if corpus_digest is not None else corpus.digest()
    selection = select_top_n(
        corpus, method, params.n, exclude=exclude, smoothing=params.smoothing
    )

    clusters = None
    if params.mode == "clustered" and selection.entries:
        matrix = build_matrix(corpus, selection.tags)
        raw = bisecting_kmeans(
            matrix, params.k, seed=params.seed, trials=params.trials,
            space=params.cluster_space,
        )
        clusters = order_cluster_set(matrix, raw)

    return build_cloud(
        selection,
        clusters,
        params.mode,
        k=params.k,
        seed=params.seed,
        corpus_digest=digest,
        bucket_count=params.buckets,
    )

"""Semantically ordered tag clouds for collaborative tagging data.

The package turns raw (user, resource, tag) assignment dumps into tag clouds
whose tags are chosen by exhaustivity-normalized scoring and arranged by
co-occurrence similarity instead of the usual alphabetical grid.
"""

from .clustering import ClusterSet, bisecting_kmeans, cluster_similarity, order_cluster_set
from .corpus import (
    Assignment,
    Corpus,
    build_corpus,
    generate_synthetic,
    ingest,
    load_snapshot,
    standard_fixture,
)
from .errors import MalformedRecordError, UnknownTagError
from .layout import CloudModel, CloudTag, build_cloud, emit_document, emit_html, parse_document
from .pipeline import CloudParams, compute_cloud
from .similarity import SimilarityMatrix, build_matrix, jaccard, synonym_pairs
from .weighting import SelectionMethod, coverage, overlap_stats, score, select_top_n

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CloudModel",
    "CloudParams",
    "CloudTag",
    "ClusterSet",
    "Corpus",
    "MalformedRecordError",
    "SelectionMethod",
    "SimilarityMatrix",
    "UnknownTagError",
    "__version__",
    "bisecting_kmeans",
    "build_cloud",
    "build_corpus",
    "build_matrix",
    "cluster_similarity",
    "compute_cloud",
    "coverage",
    "emit_document",
    "emit_html",
    "generate_synthetic",
    "ingest",
    "jaccard",
    "load_snapshot",
    "order_cluster_set",
    "overlap_stats",
    "parse_document",
    "score",
    "select_top_n",
    "standard_fixture",
    "synonym_pairs",
]

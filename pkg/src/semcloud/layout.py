"""Render-ready cloud models: bucket assignment, HTML, and JSON documents.

A cloud is a list of rows; in clustered mode each row is one ordered cluster
(similar clusters on adjacent rows), in alphabetical mode there is a single
sorted row which the renderer wraps visually.  Font-size buckets are assigned
on a log scale so one very heavy tag cannot flatten all the others.
"""

from __future__ import annotations

import html
import json
import math
from dataclasses import dataclass
from typing import Sequence
from urllib.parse import quote

from .clustering import ClusterSet
from .weighting import SelectionResult

MODES = ("clustered", "alphabetical")
DEFAULT_BUCKETS = 6


@dataclass(frozen=True)
class CloudTag:
    tag: str
    weight: float
    bucket: int


@dataclass(frozen=True)
class CloudModel:
    """A fully-ordered cloud plus the parameters that produced it."""

    rows: tuple[tuple[CloudTag, ...], ...]
    mode: str
    method: str
    n: int
    k: int
    seed: int
    corpus_digest: str

    def all_tags(self) -> list[CloudTag]:
        return [t for row in self.rows for t in row]

    def tag_count(self) -> int:
        return sum(len(row) for row in self.rows)


def assign_buckets(weights: Sequence[float], bucket_count: int = DEFAULT_BUCKETS) -> list[int]:
    """Map weights to font-size buckets 1..bucket_count, monotone in weight.

    Log-scaled: bucket = 1 + floor((B-1) * (ln(1+w) - ln(1+min)) /
    (ln(1+max) - ln(1+min))).  All-equal weights land in the middle bucket.
    """
    if bucket_count < 1:
        raise ValueError("bucket count must be >= 1")
    if not len(weights):
        raise ValueError("weight list must not be empty")
    if min(weights) < 0:
        raise ValueError("weights must be non-negative")
    w_min, w_max = min(weights), max(weights)
    if w_min == w_max:
        return [(bucket_count + 1) // 2] * len(weights)
    lo = math.log1p(w_min)
    span = math.log1p(w_max) - lo
    return [
        1 + math.floor((bucket_count - 1) * (math.log1p(w) - lo) / span)
        for w in weights
    ]


def build_cloud(
    selection: SelectionResult,
    clusters: ClusterSet | None,
    mode: str,
    *,
    k: int,
    seed: int,
    corpus_digest: str,
    bucket_count: int = DEFAULT_BUCKETS,
) -> CloudModel:
    """Assemble a CloudModel from a selection and (for clustered mode) the
    ordered clusters over exactly the selected tags.

    Cluster indices refer to positions in ``selection.entries``.  Weights are
    the selection scores; buckets are assigned over the whole selection, not
    per row.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    entries = selection.entries
    meta = dict(
        mode=mode,
        method=selection.method.id,
        n=selection.n_requested,
        k=k,
        seed=seed,
        corpus_digest=corpus_digest,
    )

    if not entries:
        return CloudModel(rows=(), **meta)

    buckets = assign_buckets([s for _, s in entries], bucket_count)
    cloud_tags = [
        CloudTag(tag=t, weight=s, bucket=b) for (t, s), b in zip(entries, buckets)
    ]

    if mode == "alphabetical":
        row = tuple(sorted(cloud_tags, key=lambda ct: ct.tag))
        return CloudModel(rows=(row,), **meta)

    if clusters is None:
        raise ValueError("clustered mode requires an ordered ClusterSet")
    seen = sorted(i for c in clusters.clusters for i in c)
    if seen != list(range(len(entries))):
        raise ValueError("cluster set does not cover the selection exactly")
    rows = tuple(
        tuple(cloud_tags[i] for i in cluster) for cluster in clusters.clusters
    )
    return CloudModel(rows=rows, **meta)


# -- serialization ---------------------------------------------------------


def emit_document(model: CloudModel) -> str:
    """Lossless JSON form of the model, stable key order, trailing newline."""
    doc = {
        "mode": model.mode,
        "method": model.method,
        "n": model.n,
        "k": model.k,
        "seed": model.seed,
        "corpus_digest": model.corpus_digest,
        "rows": [
            [{"tag": t.tag, "weight": t.weight, "bucket": t.bucket} for t in row]
            for row in model.rows
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_document(text: str) -> CloudModel:
    """Inverse of emit_document."""
    doc = json.loads(text)
    rows = tuple(
        tuple(
            CloudTag(tag=t["tag"], weight=float(t["weight"]), bucket=int(t["bucket"]))
            for t in row
        )
        for row in doc["rows"]
    )
    return CloudModel(
        rows=rows,
        mode=doc["mode"],
        method=doc["method"],
        n=int(doc["n"]),
        k=int(doc["k"]),
        seed=int(doc["seed"]),
        corpus_digest=doc["corpus_digest"],
    )


def _font_size(bucket: int) -> str:
    return f"{0.75 + 0.25 * (bucket - 1):.2f}em"


def emit_html(model: CloudModel) -> str:
    """Self-contained HTML for the cloud; byte-identical for identical models.

    One block element per row, one anchor per tag with class ``size-<bucket>``
    and href ``/tags/<url-encoded tag>``.  Size classes are defined inline up
    to the largest bucket present.
    """
    max_bucket = max((t.bucket for row in model.rows for t in row), default=0)
    styles = [
        "body { font-family: sans-serif; margin: 2em; }",
        ".cloud { line-height: 2.1; max-width: 60em; }",
        ".cloud-row { display: block; }",
        ".cloud a { text-decoration: none; color: #1a4f72; margin-right: 0.45em; }",
        ".cloud a:hover { text-decoration: underline; }",
    ]
    styles.extend(
        f".size-{b} {{ font-size: {_font_size(b)}; }}" for b in range(1, max_bucket + 1)
    )

    lines = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>tag cloud ({html.escape(model.mode)}, method {html.escape(model.method)})</title>",
        "<style>",
        *styles,
        "</style>",
        "</head>",
        "<body>",
        (
            f'<main class="cloud" data-mode="{html.escape(model.mode, quote=True)}"'
            f' data-method="{html.escape(model.method, quote=True)}"'
            f' data-n="{model.n}" data-k="{model.k}" data-seed="{model.seed}"'
            f' data-digest="{html.escape(model.corpus_digest, quote=True)}">'
        ),
    ]
    for row in model.rows:
        anchors = "".join(
            f'<a class="size-{t.bucket}" href="/tags/{quote(t.tag, safe="")}">'
            f"{html.escape(t.tag)}</a>"
            for t in row
        )
        lines.append(f'<div class="cloud-row">{anchors}</div>')
    lines.extend(["</main>", "</body>", "</html>", ""])
    return "\n".join(lines)

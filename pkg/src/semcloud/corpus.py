"""Assignment ingestion and the tag-resource weight matrix.

A corpus is built once from a stream of (user, resource, tag) assignments and
is immutable afterwards.  Cell weights count *distinct users* per
(resource, tag) pair, duplicate assignments are dropped, and both axes are
indexed in sorted order so the result is independent of input order.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .errors import MalformedRecordError, UnknownTagError

SNAPSHOT_HEADER = "#semcloud-corpus-v1"


def normalize_tag(raw: str) -> str:
    """Lowercase and strip surrounding whitespace; no stemming, no plural folding."""
    return raw.strip().lower()


@dataclass(frozen=True)
class Assignment:
    """One tagging event: a user attached a tag to a resource."""

    user: str
    resource: str
    tag: str

    @classmethod
    def from_fields(cls, user: str, resource: str, tag: str) -> "Assignment":
        """Build an assignment, normalizing the tag.  Raises ValueError on empties."""
        tag = normalize_tag(tag)
        if not tag:
            raise ValueError("tag is empty after normalization")
        if not user:
            raise ValueError("user is empty")
        if not resource:
            raise ValueError("resource is empty")
        return cls(user=user, resource=resource, tag=tag)


class Corpus:
    """Immutable sparse matrix of tag assignments plus per-axis statistics.

    Rows are resources, columns are tags; a stored cell holds the number of
    distinct users who assigned that tag to that resource (always >= 1).
    Both postings (per tag) and row views (per resource) are kept so that
    per-tag and per-resource scans are O(cells touched).
    """

    __slots__ = (
        "resources",
        "tags",
        "_resource_index",
        "_tag_index",
        "_postings",
        "_posting_weights",
        "_row_tags",
        "_row_weights",
        "m",
        "skipped_records",
    )

    def __init__(self, resources, tags, postings, posting_weights, row_tags, row_weights):
        self.resources: tuple[str, ...] = resources
        self.tags: tuple[str, ...] = tags
        self._resource_index = {r: i for i, r in enumerate(resources)}
        self._tag_index = {t: j for j, t in enumerate(tags)}
        self._postings = postings
        self._posting_weights = posting_weights
        self._row_tags = row_tags
        self._row_weights = row_weights
        self.m = np.array([len(row) for row in row_tags], dtype=np.int64)
        self.skipped_records = 0

    # -- basic shape -------------------------------------------------------

    @property
    def n_resources(self) -> int:
        return len(self.resources)

    @property
    def n_tags(self) -> int:
        return len(self.tags)

    @property
    def n_cells(self) -> int:
        return int(self.m.sum())

    def has_tag(self, tag: str) -> bool:
        return tag in self._tag_index

    def tag_id(self, tag: str) -> int:
        try:
            return self._tag_index[tag]
        except KeyError:
            raise UnknownTagError(tag) from None

    def resource_id(self, resource: str) -> int:
        return self._resource_index[resource]

    # -- per-tag views -----------------------------------------------------

    def postings_by_id(self, j: int) -> np.ndarray:
        """Sorted resource indices carrying tag j."""
        return self._postings[j]

    def postings(self, tag: str) -> np.ndarray:
        return self._postings[self.tag_id(tag)]

    def weights_by_id(self, j: int) -> np.ndarray:
        """Cell weights aligned with postings_by_id(j)."""
        return self._posting_weights[j]

    def weights(self, tag: str) -> np.ndarray:
        return self._posting_weights[self.tag_id(tag)]

    def tag_count(self, tag: str) -> int:
        """n_j: number of distinct resources carrying the tag."""
        return len(self.postings(tag))

    def tag_stats(self, tag: str) -> tuple[int, int]:
        """(n_j, total weight over the tag's column)."""
        w = self.weights(tag)
        return len(w), int(w.sum())

    # -- per-resource views ------------------------------------------------

    def resource_tags(self, i: int) -> np.ndarray:
        """Sorted tag indices present on resource i."""
        return self._row_tags[i]

    def resource_weights(self, i: int) -> np.ndarray:
        return self._row_weights[i]

    def weight(self, resource: str, tag: str) -> int:
        """d_ij for a stored cell, 0 if the cell is absent."""
        i = self._resource_index[resource]
        j = self.tag_id(tag)
        row = self._row_tags[i]
        pos = int(np.searchsorted(row, j))
        if pos < len(row) and row[pos] == j:
            return int(self._row_weights[i][pos])
        return 0

    # -- serialization -----------------------------------------------------

    def iter_cells(self) -> Iterator[tuple[str, str, int]]:
        """Stored cells in canonical (resource, tag) order."""
        for i, resource in enumerate(self.resources):
            row = self._row_tags[i]
            weights = self._row_weights[i]
            for j, d in zip(row.tolist(), weights.tolist()):
                yield resource, self.tags[j], d

    def snapshot_bytes(self) -> bytes:
        """Canonical serialized form; identical corpora serialize identically."""
        lines = [SNAPSHOT_HEADER]
        lines.extend(f"{r}\t{t}\t{d}" for r, t, d in self.iter_cells())
        lines.append("")
        return "\n".join(lines).encode("utf-8")

    def digest(self) -> str:
        """Hex SHA-256 of the canonical serialized form."""
        return hashlib.sha256(self.snapshot_bytes()).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        if self.resources != other.resources or self.tags != other.tags:
            return False
        return all(
            np.array_equal(a, b)
            for pair in (
                zip(self._row_tags, other._row_tags),
                zip(self._row_weights, other._row_weights),
            )
            for a, b in pair
        )

    def __hash__(self):  # identity hashing; corpora are large mutable-free objects
        return id(self)

    # -- restriction -------------------------------------------------------

    def restrict(self, resource_indices: Sequence[int] | np.ndarray) -> "Corpus":
        """Sub-corpus over the given resources only.

        Cell weights are inherited unchanged; tags that no longer occur are
        dropped and both axes are reindexed.  Per-resource tag counts (m)
        therefore reflect the restricted matrix.
        """
        keep = np.unique(np.asarray(resource_indices, dtype=np.int64))
        cells = [
            (self.resources[i], self.tags[j], int(d))
            for i in keep.tolist()
            for j, d in zip(self._row_tags[i].tolist(), self._row_weights[i].tolist())
        ]
        return _corpus_from_cells(cells)

    def validate(self) -> None:
        """Check matrix-consistency invariants; raises AssertionError on violation."""
        total_rows = sum(len(row) for row in self._row_tags)
        total_cols = sum(len(p) for p in self._postings)
        assert total_rows == total_cols == int(self.m.sum())
        for j, posting in enumerate(self._postings):
            assert len(posting) == len(self._posting_weights[j])
            assert len(posting) > 0, f"tag {self.tags[j]!r} has no postings"
            assert np.all(np.diff(posting) > 0), "postings must be strictly sorted"
            assert np.all(self._posting_weights[j] >= 1)
        for row in self._row_tags:
            assert len(row) > 0
            assert np.all(np.diff(row) > 0)


def _corpus_from_cells(cells: Iterable[tuple[str, str, int]]) -> Corpus:
    """Assemble a Corpus from (resource, tag, weight) cells (unique pairs)."""
    cells = list(cells)
    resources = tuple(sorted({r for r, _, _ in cells}))
    tags = tuple(sorted({t for _, t, _ in cells}))
    resource_index = {r: i for i, r in enumerate(resources)}
    tag_index = {t: j for j, t in enumerate(tags)}

    ii = np.array([resource_index[r] for r, _, _ in cells], dtype=np.int64)
    jj = np.array([tag_index[t] for _, t, _ in cells], dtype=np.int64)
    dd = np.array([d for _, _, d in cells], dtype=np.int64)

    postings: list[np.ndarray] = []
    posting_weights: list[np.ndarray] = []
    if len(cells):
        order = np.lexsort((ii, jj))
        js, isort, dsort = jj[order], ii[order], dd[order]
        starts = np.searchsorted(js, np.arange(len(tags) + 1))
        for j in range(len(tags)):
            postings.append(isort[starts[j] : starts[j + 1]].copy())
            posting_weights.append(dsort[starts[j] : starts[j + 1]].copy())

    row_tags: list[np.ndarray] = []
    row_weights: list[np.ndarray] = []
    if len(cells):
        order = np.lexsort((jj, ii))
        is_, jsort, dsort = ii[order], jj[order], dd[order]
        starts = np.searchsorted(is_, np.arange(len(resources) + 1))
        for i in range(len(resources)):
            row_tags.append(jsort[starts[i] : starts[i + 1]].copy())
            row_weights.append(dsort[starts[i] : starts[i + 1]].copy())

    corpus = Corpus(resources, tags, postings, posting_weights, row_tags, row_weights)
    corpus.validate()
    return corpus


def build_corpus(assignments: Iterable[Assignment]) -> Corpus:
    """Aggregate raw assignments into a corpus.

    Duplicate (user, resource, tag) triples count once; each cell weight is
    the number of distinct users behind it.
    """
    triples = {(a.user, a.resource, a.tag) for a in assignments}
    counts: dict[tuple[str, str], int] = {}
    for _, resource, tag in triples:
        key = (resource, tag)
        counts[key] = counts.get(key, 0) + 1
    return _corpus_from_cells((r, t, d) for (r, t), d in counts.items())


# -- ingestion -------------------------------------------------------------


def _parse_jsonl(line: str) -> Assignment:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    fields = []
    for name in ("user", "resource", "tag"):
        value = obj.get(name)
        if not isinstance(value, str):
            raise ValueError(f"missing or non-string field {name!r}")
        fields.append(value)
    return Assignment.from_fields(*fields)


def _parse_tsv(line: str) -> Assignment:
    parts = line.split("\t")
    if len(parts) != 3:
        raise ValueError(f"expected 3 tab-separated columns, got {len(parts)}")
    return Assignment.from_fields(*parts)


_PARSERS = {"jsonl": _parse_jsonl, "tsv": _parse_tsv}


def detect_format(path: str | Path) -> str:
    return "tsv" if Path(path).suffix.lower() in (".tsv", ".tab") else "jsonl"


class RecordStream:
    """Iterator of parsed assignments that counts records it had to drop.

    With policy="abort" the first malformed line raises MalformedRecordError
    (carrying its line number); with policy="skip" malformed lines increment
    ``self.skipped`` and are dropped.  Blank lines are ignored in both modes.
    """

    def __init__(self, lines: Iterable[str], fmt: str = "jsonl", *, policy: str = "abort"):
        if fmt not in _PARSERS:
            raise ValueError(f"unknown format {fmt!r}")
        if policy not in ("abort", "skip"):
            raise ValueError(f"unknown policy {policy!r}")
        self._lines = enumerate(lines, start=1)
        self._parse = _PARSERS[fmt]
        self._policy = policy
        self.skipped = 0

    def __iter__(self) -> Iterator[Assignment]:
        return self

    def __next__(self) -> Assignment:
        for line_no, raw in self._lines:
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            try:
                return self._parse(line)
            except ValueError as exc:
                if self._policy == "abort":
                    raise MalformedRecordError(line_no, str(exc)) from None
                self.skipped += 1
        raise StopIteration


def iter_assignments(
    lines: Iterable[str], fmt: str = "jsonl", *, policy: str = "abort"
) -> RecordStream:
    """Parse assignment records, one Assignment per well-formed line."""
    return RecordStream(lines, fmt, policy=policy)


def ingest(
    source: str | Path | IO[str] | Iterable[str],
    fmt: str | None = None,
    *,
    policy: str = "abort",
) -> Corpus:
    """Read an assignment dump and build a Corpus.

    ``source`` may be a path, an open text file, or any iterable of lines.
    Format defaults by file extension (.tsv/.tab -> tab-separated, else
    JSON lines) and can be forced with ``fmt``.  The number of records
    dropped under policy="skip" lands on ``corpus.skipped_records``.
    """
    if isinstance(source, (str, Path)):
        if fmt is None:
            fmt = detect_format(source)
        with open(source, "r", encoding="utf-8") as fh:
            return ingest(fh, fmt, policy=policy)
    if fmt is None:
        fmt = "jsonl"
    records = iter_assignments(source, fmt, policy=policy)
    corpus = build_corpus(records)
    corpus.skipped_records = getattr(records, "skipped", 0)
    return corpus


def load_snapshot(path: str | Path) -> Corpus:
    """Load a corpus from its canonical snapshot file."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != SNAPSHOT_HEADER:
            raise ValueError(f"{path}: not a corpus snapshot (bad header)")
        cells = []
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise MalformedRecordError(line_no, "expected 3 columns")
            cells.append((parts[0], parts[1], int(parts[2])))
    return _corpus_from_cells(cells)


# -- synthetic corpora -----------------------------------------------------


def _per_topic(value, topics: int, name: str) -> list:
    if isinstance(value, int):
        return [value] * topics
    seq = list(value)
    if len(seq) != topics:
        raise ValueError(f"{name}: expected {topics} entries, got {len(seq)}")
    return seq


def synthetic_assignments(
    topics: int,
    tags_per_topic: int | Sequence[int],
    resources_per_topic: int | Sequence[int],
    noise: float,
    seed: int,
    *,
    tags_per_resource: tuple[int, int] | Sequence[tuple[int, int]] = (2, 4),
    users_per_cell: tuple[int, int] = (1, 8),
    user_pool: int = 400,
) -> list[Assignment]:
    """Deterministic topic-structured assignment stream.

    Tags within one topic co-occur on that topic's resources; tags from
    different topics only meet through noise events (one foreign tag added to
    a resource with probability ``noise``).  Tag popularity within a topic
    follows a 1/(rank+1) ramp, and every topic tag is guaranteed to appear
    as long as the topic has at least as many resources as tags.
    """
    if topics < 1:
        raise ValueError("topics must be >= 1")
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise rate must be in [0, 1]")
    tag_counts = _per_topic(tags_per_topic, topics, "tags_per_topic")
    res_counts = _per_topic(resources_per_topic, topics, "resources_per_topic")
    if min(tag_counts) < 1 or min(res_counts) < 1:
        raise ValueError("tag and resource counts must be >= 1")
    if isinstance(tags_per_resource[0], int):
        spreads = [tuple(tags_per_resource)] * topics
    else:
        spreads = [tuple(s) for s in _per_topic(list(tags_per_resource), topics, "tags_per_resource")]
    lo_users, hi_users = users_per_cell
    if not 1 <= lo_users <= hi_users <= user_pool:
        raise ValueError("users_per_cell must satisfy 1 <= lo <= hi <= user_pool")

    rng = random.Random(seed)
    users = [f"u{idx:04d}" for idx in range(user_pool)]
    tag_name = lambda t, i: f"t{t:02d}_{i:02d}"  # noqa: E731

    out: list[Assignment] = []
    for t in range(topics):
        n_topic_tags = tag_counts[t]
        ranks = list(range(n_topic_tags))
        weights = [1.0 / (i + 1) for i in ranks]
        lo, hi = spreads[t]
        for k in range(res_counts[t]):
            resource = f"r{t:02d}_{k:04d}"
            want = min(rng.randint(lo, hi), n_topic_tags)
            chosen = [k % n_topic_tags]  # guarantees coverage of every topic tag
            while len(chosen) < want:
                pick = rng.choices(ranks, weights)[0]
                if pick not in chosen:
                    chosen.append(pick)
            names = [tag_name(t, i) for i in chosen]
            if topics > 1 and rng.random() < noise:
                other = rng.randrange(topics - 1)
                other = other if other < t else other + 1
                names.append(tag_name(other, rng.randrange(tag_counts[other])))
            for name in names:
                for user in rng.sample(users, rng.randint(lo_users, hi_users)):
                    out.append(Assignment(user=user, resource=resource, tag=name))
    return out


def generate_synthetic(
    topics: int,
    tags_per_topic: int | Sequence[int],
    resources_per_topic: int | Sequence[int],
    noise: float,
    seed: int,
    **kwargs,
) -> Corpus:
    """Build a Corpus from synthetic_assignments with the same parameters."""
    return build_corpus(
        synthetic_assignments(
            topics, tags_per_topic, resources_per_topic, noise, seed, **kwargs
        )
    )


def standard_fixture_assignments(seed: int = 0) -> list[Assignment]:
    """Raw assignment stream behind standard_fixture (for dump generation)."""
    return synthetic_assignments(
        topics=5,
        tags_per_topic=(40, 10, 10, 10, 10),
        resources_per_topic=(240, 60, 60, 60, 60),
        noise=0.1,
        seed=seed,
        tags_per_resource=((4, 8), (2, 3), (2, 3), (2, 3), (2, 3)),
    )


def standard_fixture(seed: int = 0) -> Corpus:
    """The documented benchmark fixture: one dominant topic plus four minor ones.

    Topic 0 has 40 tags over 240 heavily-tagged resources (4-8 tags each), the
    four minor topics have 10 tags over 60 lightly-tagged resources (2-3 tags
    each), with a 10% cross-topic noise rate.  Frequency-based selection
    favors the dominant topic; exhaustivity-normalized selection surfaces
    minor-topic tags.
    """
    return build_corpus(standard_fixture_assignments(seed))

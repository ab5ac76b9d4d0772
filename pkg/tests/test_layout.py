"""Bucket assignment, cloud assembly, JSON and HTML emission."""

import json
import math
from html.parser import HTMLParser

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semcloud.clustering import ClusterSet
from semcloud.layout import (
    CloudModel,
    CloudTag,
    assign_buckets,
    build_cloud,
    emit_document,
    emit_html,
    parse_document,
)
from semcloud.weighting import SelectionMethod, SelectionResult


def make_selection(entries):
    return SelectionResult(
        method=SelectionMethod.LOG_NORM_SQ, n_requested=len(entries), entries=tuple(entries)
    )


def test_bucket_hand_values():
    assert assign_buckets([1.0, 10.0, 100.0], 3) == [1, 1, 3]
    assert assign_buckets([1.0, 30.0, 100.0], 3) == [1, 2, 3]


def test_bucket_extremes():
    for b in (1, 2, 6, 9):
        got = assign_buckets([0.5, 2.0, 80.0], b)
        assert got[0] == 1
        assert got[-1] == b


def test_bucket_all_equal_lands_mid():
    assert assign_buckets([4.0, 4.0, 4.0], 6) == [3, 3, 3]
    assert assign_buckets([4.0], 1) == [1]
    assert assign_buckets([0.0, 0.0], 2) == [1, 1]


def test_bucket_validation():
    with pytest.raises(ValueError):
        assign_buckets([], 6)
    with pytest.raises(ValueError):
        assign_buckets([1.0], 0)
    with pytest.raises(ValueError):
        assign_buckets([-1.0, 2.0], 6)


@settings(max_examples=50, deadline=None)
@given(
    weights=st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=30),
    buckets=st.integers(1, 10),
)
def test_bucket_properties(weights, buckets):
    got = assign_buckets(weights, buckets)
    assert all(1 <= b <= buckets for b in got)
    order = sorted(range(len(weights)), key=lambda i: weights[i])
    assigned = [got[i] for i in order]
    assert all(a <= b for a, b in zip(assigned, assigned[1:]))  # monotone in weight


ENTRIES = [("zebra", 5.0), ("apple", 3.0), ("mango", 1.0)]


def test_alphabetical_single_sorted_row():
    model = build_cloud(make_selection(ENTRIES), None, "alphabetical", k=4, seed=0, corpus_digest="x")
    assert len(model.rows) == 1
    assert [t.tag for t in model.rows[0]] == ["apple", "mango", "zebra"]
    assert model.mode == "alphabetical"


def test_clustered_rows_follow_cluster_order():
    clusters = ClusterSet(clusters=((2, 0), (1,)), k_requested=2, seed=0)
    model = build_cloud(make_selection(ENTRIES), clusters, "clustered", k=2, seed=0, corpus_digest="x")
    assert [[t.tag for t in row] for row in model.rows] == [["mango", "zebra"], ["apple"]]
    # weights carried through from the selection
    assert model.rows[0][1].weight == 5.0


def test_clustered_requires_exact_cover():
    bad = ClusterSet(clusters=((0, 1),), k_requested=1, seed=0)  # misses index 2
    with pytest.raises(ValueError, match="cover"):
        build_cloud(make_selection(ENTRIES), bad, "clustered", k=1, seed=0, corpus_digest="x")
    with pytest.raises(ValueError, match="requires"):
        build_cloud(make_selection(ENTRIES), None, "clustered", k=2, seed=0, corpus_digest="x")


def test_unknown_mode_rejected():
    with pytest.raises(ValueError, match="unknown mode"):
        build_cloud(make_selection(ENTRIES), None, "spiral", k=1, seed=0, corpus_digest="x")


def test_empty_selection_yields_empty_cloud():
    model = build_cloud(make_selection([]), None, "clustered", k=3, seed=1, corpus_digest="x")
    assert model.rows == ()
    assert model.tag_count() == 0
    assert parse_document(emit_document(model)) == model


def test_document_round_trip():
    clusters = ClusterSet(clusters=((1,), (2, 0)), k_requested=2, seed=9)
    model = build_cloud(
        make_selection(ENTRIES), clusters, "clustered", k=2, seed=9, corpus_digest="abc123"
    )
    text = emit_document(model)
    assert text.endswith("\n")
    assert parse_document(text) == model
    doc = json.loads(text)
    assert list(doc.keys()) == ["mode", "method", "n", "k", "seed", "corpus_digest", "rows"]
    assert doc["corpus_digest"] == "abc123"
    assert doc["rows"][1][1] == {"tag": "zebra", "weight": 5.0, "bucket": 6}


def test_document_bytes_stable():
    model = build_cloud(make_selection(ENTRIES), None, "alphabetical", k=1, seed=0, corpus_digest="d")
    assert emit_document(model) == emit_document(model)
    assert emit_html(model) == emit_html(model)


class _Structure(HTMLParser):
    """Collects anchors and verifies tag nesting is balanced."""

    VOID = {"meta", "br", "img", "link", "input", "hr"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.stack = []
        self.anchors = []
        self.balanced = True

    def handle_starttag(self, tag, attrs):
        if tag in self.VOID:
            return
        self.stack.append(tag)
        if tag == "a":
            self.anchors.append(dict(attrs))

    def handle_endtag(self, tag):
        if not self.stack or self.stack.pop() != tag:
            self.balanced = False


def parse_structure(text):
    parser = _Structure()
    parser.feed(text)
    parser.close()
    return parser


def test_html_anchors_and_classes():
    clusters = ClusterSet(clusters=((2, 0), (1,)), k_requested=2, seed=0)
    model = build_cloud(make_selection(ENTRIES), clusters, "clustered", k=2, seed=0, corpus_digest="x")
    html_text = emit_html(model)
    assert html_text.startswith("<!DOCTYPE html>")
    s = parse_structure(html_text)
    assert s.balanced and not s.stack
    assert len(s.anchors) == 3
    for a in s.anchors:
        assert a["href"].startswith("/tags/")
        bucket = int(a["class"].removeprefix("size-"))
        assert 1 <= bucket <= 6
    assert html_text.count('<div class="cloud-row">') == 2


def test_html_escaping():
    entries = [("c++ & <tags>", 2.0), ('quo"te', 1.0)]
    model = build_cloud(make_selection(entries), None, "alphabetical", k=1, seed=0, corpus_digest="x")
    html_text = emit_html(model)
    assert "c++ &amp; &lt;tags&gt;" in html_text
    assert 'href="/tags/c%2B%2B%20%26%20%3Ctags%3E"' in html_text
    s = parse_structure(html_text)
    assert s.balanced
    assert len(s.anchors) == 2


def test_html_style_covers_max_bucket_only():
    # both weights equal -> single middle bucket; only that class is emitted up to it
    model = build_cloud(
        make_selection([("a", 2.0), ("b", 2.0)]), None, "alphabetical", k=1, seed=0, corpus_digest="x"
    )
    html_text = emit_html(model)
    assert ".size-3 {" in html_text
    assert ".size-4" not in html_text


def test_font_size_progression():
    model = build_cloud(make_selection(ENTRIES), None, "alphabetical", k=1, seed=0, corpus_digest="x")
    html_text = emit_html(model)
    sizes = [
        float(line.split("font-size: ")[1].split("em")[0])
        for line in html_text.splitlines()
        if line.startswith(".size-")
    ]
    assert sizes == sorted(sizes)
    assert sizes[0] == pytest.approx(0.75)


def test_model_helpers():
    model = build_cloud(make_selection(ENTRIES), None, "alphabetical", k=1, seed=0, corpus_digest="x")
    assert model.tag_count() == 3
    assert sorted(t.tag for t in model.all_tags()) == ["apple", "mango", "zebra"]

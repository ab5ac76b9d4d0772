"""Pure-Python kernel implementations (reference semantics for the extension).

Everything here is integer arithmetic, so the compiled and fallback paths
agree bit-for-bit.
"""

from __future__ import annotations

import numpy as np


def cooccurrence_counts(
    indptr: np.ndarray, tag_ids: np.ndarray, n_tags: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Count unordered tag-pair co-occurrences over grouped rows.

    ``indptr``/``tag_ids`` form a CSR-like layout: row r holds the tag ids
    ``tag_ids[indptr[r]:indptr[r+1]]``, strictly increasing within the row.
    Returns (i, j, count) arrays with i < j, sorted by (i, j); pairs that
    never co-occur are absent.
    """
    counts: dict[tuple[int, int], int] = {}
    ids = tag_ids.tolist()
    bounds = indptr.tolist()
    for r in range(len(bounds) - 1):
        row = ids[bounds[r] : bounds[r + 1]]
        for x, a in enumerate(row):
            for b in row[x + 1 :]:
                key = (a, b)
                counts[key] = counts.get(key, 0) + 1
    if not counts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    keys = sorted(counts)
    ii = np.array([k[0] for k in keys], dtype=np.int64)
    jj = np.array([k[1] for k in keys], dtype=np.int64)
    cc = np.array([counts[k] for k in keys], dtype=np.int64)
    return ii, jj, cc


def intersection_size(a: np.ndarray, b: np.ndarray) -> int:
    """|a ∩ b| for two strictly-sorted int arrays."""
    return int(np.intersect1d(a, b, assume_unique=True).size)

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled co-occurrence kernels.

Must stay semantically identical to ``fallback.py``: integer-exact counts,
results sorted by (i, j).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

# Above this many tags the dense pair-count accumulator would get large
# (n_tags^2 int64 cells); switch to a hash-map accumulator instead.
DEF DENSE_LIMIT = 4096


def cooccurrence_counts(cnp.int64_t[::1] indptr, cnp.int64_t[::1] tag_ids, int n_tags):
    """Count unordered tag-pair co-occurrences over grouped rows.

    Same contract as the fallback: CSR-like (indptr, tag_ids) with strictly
    increasing ids per row; returns (i, j, count) sorted by (i, j), i < j.
    """
    if n_tags <= DENSE_LIMIT:
        return _dense_counts(indptr, tag_ids, n_tags)
    return _hashed_counts(indptr, tag_ids)


cdef _dense_counts(cnp.int64_t[::1] indptr, cnp.int64_t[::1] tag_ids, int n_tags):
    cdef cnp.int64_t[:, ::1] acc = np.zeros((n_tags, n_tags), dtype=np.int64)
    cdef Py_ssize_t r, x, y, lo, hi
    cdef cnp.int64_t a
    cdef Py_ssize_t n_rows = indptr.shape[0] - 1

    for r in range(n_rows):
        lo = indptr[r]
        hi = indptr[r + 1]
        for x in range(lo, hi):
            a = tag_ids[x]
            for y in range(x + 1, hi):
                acc[a, tag_ids[y]] += 1

    cdef Py_ssize_t total = 0
    cdef Py_ssize_t i, j
    for i in range(n_tags):
        for j in range(i + 1, n_tags):
            if acc[i, j] != 0:
                total += 1

    out_i = np.empty(total, dtype=np.int64)
    out_j = np.empty(total, dtype=np.int64)
    out_c = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[::1] vi = out_i
    cdef cnp.int64_t[::1] vj = out_j
    cdef cnp.int64_t[::1] vc = out_c
    cdef Py_ssize_t pos = 0
    for i in range(n_tags):
        for j in range(i + 1, n_tags):
            if acc[i, j] != 0:
                vi[pos] = i
                vj[pos] = j
                vc[pos] = acc[i, j]
                pos += 1
    return out_i, out_j, out_c


cdef _hashed_counts(cnp.int64_t[::1] indptr, cnp.int64_t[::1] tag_ids):
    cdef dict counts = {}
    cdef Py_ssize_t r, x, y, lo, hi
    cdef cnp.int64_t a, key
    cdef Py_ssize_t n_rows = indptr.shape[0] - 1

    for r in range(n_rows):
        lo = indptr[r]
        hi = indptr[r + 1]
        for x in range(lo, hi):
            a = tag_ids[x] << 32
            for y in range(x + 1, hi):
                key = a | tag_ids[y]
                if key in counts:
                    counts[key] = counts[key] + 1
                else:
                    counts[key] = 1

    cdef Py_ssize_t total = len(counts)
    out_i = np.empty(total, dtype=np.int64)
    out_j = np.empty(total, dtype=np.int64)
    out_c = np.empty(total, dtype=np.int64)
    cdef cnp.int64_t[::1] vi = out_i
    cdef cnp.int64_t[::1] vj = out_j
    cdef cnp.int64_t[::1] vc = out_c
    cdef Py_ssize_t pos = 0
    for key in sorted(counts):
        vi[pos] = key >> 32
        vj[pos] = key & 0xFFFFFFFF
        vc[pos] = counts[key]
        pos += 1
    return out_i, out_j, out_c


def intersection_size(cnp.int64_t[::1] a, cnp.int64_t[::1] b):
    """|a ∩ b| for two strictly-sorted int64 arrays."""
    cdef Py_ssize_t x = 0, y = 0, hits = 0
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    while x < na and y < nb:
        if a[x] < b[y]:
            x += 1
        elif a[x] > b[y]:
            y += 1
        else:
            hits += 1
            x += 1
            y += 1
    return hits

#!/usr/bin/env python3
"""Compare the compiled co-occurrence kernel against the pure-Python fallback.

Prepares the inverted-index input (resource rows of sorted tag ids) for
synthetic corpora of growing size, then times the pairwise counting kernel
itself under both backends and verifies the outputs are identical (they must
be: the kernels are integer-exact).  The end-to-end matrix build is timed
separately so the kernel's share of the pipeline is visible.

Usage: python benchmarks/bench_kernels.py [--repeat 3] [--large]
"""

import argparse
import time

import numpy as np

from semcloud import _kernels
from semcloud.corpus import generate_synthetic
from semcloud.similarity import build_matrix

SCALES = [
    # (topics, tags_per_topic, resources_per_topic)
    (5, 20, 100),
    (10, 30, 200),
    (20, 40, 300),
]
LARGE_SCALE = (30, 80, 500)


def kernel_input(corpus):
    """The (indptr, tag_ids) row structure build_matrix hands to the kernel."""
    rows = [corpus.resource_tags(i) for i in range(corpus.n_resources)]
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    tag_ids = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    return np.ascontiguousarray(indptr), np.ascontiguousarray(tag_ids)


def time_kernel(backend: str, indptr, tag_ids, n_tags: int, repeat: int):
    mod = _kernels.use(backend)
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = mod.cooccurrence_counts(indptr, tag_ids, n_tags)
        best = min(best, time.perf_counter() - t0)
    return best, result


def time_full_build(backend: str, corpus, repeat: int) -> float:
    _kernels.use(backend)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        build_matrix(corpus, corpus.tags)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timing repeats, best-of")
    parser.add_argument("--large", action="store_true", help="add a 2400-tag scale")
    args = parser.parse_args()

    if "ext" not in _kernels.available():
        print("compiled extension not built; nothing to compare")
        return 1

    scales = SCALES + ([LARGE_SCALE] if args.large else [])
    header = (
        f"{'tags':>6} {'cells':>8} {'pairs':>8} |"
        f" {'kernel py':>10} {'kernel ext':>11} {'speedup':>8} |"
        f" {'build py':>9} {'build ext':>10}"
    )
    print(header)
    for topics, tags_per_topic, resources_per_topic in scales:
        corpus = generate_synthetic(
            topics=topics,
            tags_per_topic=tags_per_topic,
            resources_per_topic=resources_per_topic,
            noise=0.2,
            seed=0,
        )
        indptr, tag_ids = kernel_input(corpus)

        t_py, out_py = time_kernel("python", indptr, tag_ids, corpus.n_tags, args.repeat)
        t_ext, out_ext = time_kernel("ext", indptr, tag_ids, corpus.n_tags, args.repeat)
        if not all(np.array_equal(a, b) for a, b in zip(out_py, out_ext)):
            print("BACKEND OUTPUT MISMATCH — this is a bug")
            return 1

        b_py = time_full_build("python", corpus, args.repeat)
        b_ext = time_full_build("ext", corpus, args.repeat)
        print(
            f"{corpus.n_tags:>6} {corpus.n_cells:>8} {len(out_ext[0]):>8} |"
            f" {1e3 * t_py:>8.2f}ms {1e3 * t_ext:>9.2f}ms {t_py / t_ext:>7.1f}x |"
            f" {1e3 * b_py:>7.2f}ms {1e3 * b_ext:>8.2f}ms"
        )
    _kernels.use("ext")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

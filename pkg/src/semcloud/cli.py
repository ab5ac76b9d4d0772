"""Operator command line: ingest dumps, build artifacts, export, serve.

One executable with subcommands; every run is deterministic given its flags
(all randomness flows from --seed).  Configuration precedence is
flags > config file (--config, JSON) > built-in defaults.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .clustering import bisecting_kmeans, intra_similarity, order_cluster_set, partition_quality
from .corpus import (
    Corpus,
    detect_format,
    ingest,
    load_snapshot,
    standard_fixture_assignments,
    synthetic_assignments,
)
from .errors import MalformedRecordError
from .layout import emit_document, emit_html, parse_document
from .pipeline import CloudParams, compute_cloud
from .similarity import build_matrix
from .weighting import SelectionMethod, method_comparison, select_top_n

SNAPSHOT_NAME = "corpus.snapshot.tsv"
CLOUD_JSON_NAME = "cloud.json"
CLOUD_HTML_NAME = "cloud.html"
MANIFEST_NAME = "build.json"


@dataclass
class RunConfig:
    """Fully-resolved run configuration; every field has a documented default."""

    input: str | None = None
    format: str = "auto"  # auto | jsonl | tsv
    out: str | None = None
    method: str = "d"
    n: int = 95
    k: int = 12
    seed: int = 0
    buckets: int = 6
    trials: int = 10
    log_smoothing: bool = False
    cluster_space: str = "jaccard"  # jaccard | counts
    error_policy: str = "abort"  # abort | skip

    def cloud_params(self, mode: str = "clustered") -> CloudParams:
        return CloudParams(
            method=self.method,
            n=self.n,
            k=self.k,
            mode=mode,
            buckets=self.buckets,
            seed=self.seed,
            trials=self.trials,
            smoothing=self.log_smoothing,
            cluster_space=self.cluster_space,
        )


def _config_file_overrides(argv: list[str]) -> dict:
    """Pre-scan for --config and load its JSON dict (keys as in RunConfig)."""
    path = None
    for pos, arg in enumerate(argv):
        if arg == "--config" and pos + 1 < len(argv):
            path = argv[pos + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _add_common_flags(parser: argparse.ArgumentParser, cfg: RunConfig) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file (same keys as print-config output)")
    parser.add_argument("--method", choices=[m.value for m in SelectionMethod], default=cfg.method, help="tag selection function")
    parser.add_argument("--n", type=int, default=cfg.n, help="number of tags to select")
    parser.add_argument("--k", type=int, default=cfg.k, help="number of clusters")
    parser.add_argument("--seed", type=int, default=cfg.seed, help="RNG seed for clustering trials")
    parser.add_argument("--buckets", type=int, default=cfg.buckets, help="font-size buckets")
    parser.add_argument("--trials", type=int, default=cfg.trials, help="2-means attempts per bisection")
    parser.add_argument("--log-smoothing", action="store_true", default=cfg.log_smoothing, help="use ln(1+d) instead of ln(d) in methods c/d")
    parser.add_argument("--cluster-space", choices=["jaccard", "counts"], default=cfg.cluster_space, help="row-profile space for clustering")


def _add_input_flags(parser: argparse.ArgumentParser, cfg: RunConfig) -> None:
    parser.add_argument("--input", metavar="PATH", default=cfg.input, help="assignment dump (JSONL or TSV)")
    parser.add_argument("--format", choices=["auto", "jsonl", "tsv"], default=cfg.format, help="input record format")
    parser.add_argument("--error-policy", choices=["abort", "skip"], default=cfg.error_policy, help="what to do with malformed records")


def build_parser(cfg: RunConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semcloud",
        description="Clustered, similarity-ordered tag clouds from tagging dumps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("build", help="ingest a dump and write the artifact files", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)
    p.add_argument("--out", metavar="DIR", default=cfg.out, help="output directory")

    p = sub.add_parser("stats", help="selection-method comparison report", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)
    p.add_argument("--report-format", choices=["text", "csv"], default="text", help="report output format")

    p = sub.add_parser("similarity", help="export the co-occurrence similarity matrix", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)
    p.add_argument("--out", metavar="PATH", default=cfg.out, help="output file (default: stdout)")

    p = sub.add_parser("cluster", help="print the clustered, ordered tag partition", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)

    p = sub.add_parser("export", help="re-emit HTML/JSON from a built artifact", formatter_class=fmt)
    p.add_argument("--artifact", metavar="DIR", required=True, help="directory written by build")
    p.add_argument("--what", choices=["html", "json", "both"], default="html", help="which documents to write")
    p.add_argument("--out", metavar="DIR", default=None, help="output directory (default: artifact dir)")

    p = sub.add_parser("gen", help="generate a synthetic assignment dump", formatter_class=fmt)
    p.add_argument("--standard-fixture", action="store_true", help="emit the documented dominant-plus-minor-topics fixture")
    p.add_argument("--topics", type=int, default=3, help="number of topics")
    p.add_argument("--tags-per-topic", default="8", help="int or comma-separated per-topic counts")
    p.add_argument("--resources-per-topic", default="40", help="int or comma-separated per-topic counts")
    p.add_argument("--noise", type=float, default=0.0, help="cross-topic noise rate in [0,1]")
    p.add_argument("--seed", type=int, default=cfg.seed, help="RNG seed")
    p.add_argument("--out", metavar="PATH", default=cfg.out, help="output file (default: stdout)")

    p = sub.add_parser("serve", help="serve a corpus over HTTP", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)
    p.add_argument("--artifact", metavar="DIR", default=None, help="serve a built artifact instead of --input")
    p.add_argument("--host", default="127.0.0.1", help="bind address")
    p.add_argument("--port", type=int, default=8000, help="bind port")
    p.add_argument("--ui", metavar="DIR", default=None, help="static web UI bundle to mount at /ui/")

    p = sub.add_parser("print-config", help="print the fully resolved configuration", formatter_class=fmt)
    _add_input_flags(p, cfg)
    _add_common_flags(p, cfg)
    p.add_argument("--out", metavar="PATH", default=cfg.out, help="output path (recorded in the config)")

    return parser


def _load_corpus(args) -> Corpus:
    if args.input is None:
        raise SystemExit2("--input is required")
    path = Path(args.input)
    if not path.exists():
        raise FileNotFoundError(str(path))
    fmt = args.format if args.format != "auto" else detect_format(path)
    corpus = ingest(path, fmt, policy=args.error_policy)
    if corpus.skipped_records:
        print(f"skipped {corpus.skipped_records} malformed records", file=sys.stderr)
    return corpus


class SystemExit2(Exception):
    """Usage error detected after argument parsing."""


def _int_list(text: str, name: str) -> int | tuple[int, ...]:
    try:
        if "," in text:
            return tuple(int(p) for p in text.split(","))
        return int(text)
    except ValueError:
        raise SystemExit2(f"{name}: expected an int or comma-separated ints") from None


def cmd_build(args) -> int:
    if args.out is None:
        raise SystemExit2("--out is required")
    corpus = _load_corpus(args)
    params = _run_config_from_args(args).cloud_params()
    model = compute_cloud(corpus, params)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / SNAPSHOT_NAME).write_bytes(corpus.snapshot_bytes())
    (out / CLOUD_JSON_NAME).write_text(emit_document(model), encoding="utf-8")
    (out / CLOUD_HTML_NAME).write_text(emit_html(model), encoding="utf-8")
    manifest = {"digest": corpus.digest(), "params": asdict(_run_config_from_args(args))}
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(
        f"built {out}: {corpus.n_resources} resources, {corpus.n_tags} tags, "
        f"{model.tag_count()} tags in cloud"
    )
    return 0


def _format_stat(value: float) -> str:
    return "-" if math.isnan(value) else f"{value:.4f}"


def cmd_stats(args) -> int:
    corpus = _load_corpus(args)
    rows = method_comparison(corpus, args.n, smoothing=args.log_smoothing)
    if args.n > corpus.n_tags:
        print(
            f"note: n={args.n} exceeds tag count; rows computed over all "
            f"{corpus.n_tags} tags",
            file=sys.stderr,
        )
    if args.report_format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(
            ["method", "tags", "coverage", "coverage_pct", "overlap_mean", "overlap_std"]
        )
        for r in rows:
            writer.writerow(
                [
                    r.method.id,
                    r.tags_selected,
                    r.coverage_count,
                    f"{100 * r.coverage_fraction:.2f}",
                    _format_stat(r.overlap_mean),
                    _format_stat(r.overlap_std),
                ]
            )
        return 0
    print(f"selection comparison over top {args.n} tags "
          f"({corpus.n_resources} resources, {corpus.n_tags} tags)")
    header = f"{'method':<8}{'tags':>6}{'coverage':>10}{'cov %':>9}{'overlap':>10}{'std':>9}"
    print(header)
    for r in rows:
        print(
            f"{r.method.id:<8}{r.tags_selected:>6}{r.coverage_count:>10}"
            f"{100 * r.coverage_fraction:>8.2f}%"
            f"{_format_stat(r.overlap_mean):>10}{_format_stat(r.overlap_std):>9}"
        )
    return 0


def cmd_similarity(args) -> int:
    corpus = _load_corpus(args)
    selection = select_top_n(
        corpus, SelectionMethod.from_id(args.method), args.n,
        smoothing=args.log_smoothing,
    )
    if not selection.entries:
        raise SystemExit2("no tags selected (corpus empty or all scores zero)")
    matrix = build_matrix(corpus, selection.tags)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if len(matrix) <= 1000:
        writer.writerow(["tag", *matrix.tags])
        for i, tag in enumerate(matrix.tags):
            writer.writerow(
                [tag, *(repr(matrix.value(i, j)) for j in range(len(matrix)))]
            )
    else:
        writer.writerow(["tag_a", "tag_b", "value"])
        for i, j, v in matrix.nonzero_pairs():
            writer.writerow([matrix.tags[i], matrix.tags[j], repr(v)])
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
        print(f"wrote {args.out} ({len(matrix)} tags)")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_cluster(args) -> int:
    corpus = _load_corpus(args)
    selection = select_top_n(
        corpus, SelectionMethod.from_id(args.method), args.n,
        smoothing=args.log_smoothing,
    )
    if not selection.entries:
        raise SystemExit2("no tags selected (corpus empty or all scores zero)")
    matrix = build_matrix(corpus, selection.tags)
    ordered = order_cluster_set(
        matrix,
        bisecting_kmeans(
            matrix, args.k, seed=args.seed, trials=args.trials,
            space=args.cluster_space,
        ),
    )
    for pos, cluster in enumerate(ordered.clusters, start=1):
        intra = intra_similarity(matrix, cluster)
        label = "-" if math.isnan(intra) else f"{intra:.4f}"
        names = " ".join(matrix.tags[i] for i in cluster)
        print(f"cluster {pos:>2} (size {len(cluster):>3}, intra {label}): {names}")
    quality = partition_quality(matrix, ordered)
    print(
        f"mean intra-cluster RC {_format_stat(quality['intra_mean'])}, "
        f"mean inter-cluster RC {_format_stat(quality['inter_mean'])}",
        file=sys.stderr,
    )
    return 0


def cmd_export(args) -> int:
    artifact = Path(args.artifact)
    cloud_path = artifact / CLOUD_JSON_NAME
    if not cloud_path.exists():
        raise FileNotFoundError(str(cloud_path))
    model = parse_document(cloud_path.read_text(encoding="utf-8"))
    out = Path(args.out) if args.out else artifact
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if args.what in ("json", "both"):
        (out / CLOUD_JSON_NAME).write_text(emit_document(model), encoding="utf-8")
        written.append(CLOUD_JSON_NAME)
    if args.what in ("html", "both"):
        (out / CLOUD_HTML_NAME).write_text(emit_html(model), encoding="utf-8")
        written.append(CLOUD_HTML_NAME)
    print(f"wrote {', '.join(written)} to {out}")
    return 0


def cmd_gen(args) -> int:
    if args.standard_fixture:
        assignments = standard_fixture_assignments(args.seed)
    else:
        assignments = synthetic_assignments(
            topics=args.topics,
            tags_per_topic=_int_list(args.tags_per_topic, "--tags-per-topic"),
            resources_per_topic=_int_list(args.resources_per_topic, "--resources-per-topic"),
            noise=args.noise,
            seed=args.seed,
        )
    lines = (
        json.dumps({"user": a.user, "resource": a.resource, "tag": a.tag}) + "\n"
        for a in assignments
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
        print(f"wrote {len(assignments)} assignment records to {args.out}")
    else:
        sys.stdout.writelines(lines)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import BuildArtifact, create_app

    if args.artifact:
        snapshot = Path(args.artifact) / SNAPSHOT_NAME
        if not snapshot.exists():
            raise FileNotFoundError(str(snapshot))
        corpus = load_snapshot(snapshot)
    else:
        corpus = _load_corpus(args)
    params = _run_config_from_args(args).cloud_params()
    artifact = BuildArtifact(corpus, params)
    app = create_app(artifact, ui_dir=args.ui)
    print(
        f"serving {corpus.n_resources} resources / {corpus.n_tags} tags "
        f"on http://{args.host}:{args.port}",
        file=sys.stderr,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _run_config_from_args(args) -> RunConfig:
    cfg = RunConfig()
    for f in fields(RunConfig):
        if hasattr(args, f.name):
            setattr(cfg, f.name, getattr(args, f.name))
    return cfg


def cmd_print_config(args) -> int:
    print(json.dumps(asdict(_run_config_from_args(args)), indent=2, sort_keys=True))
    return 0


_COMMANDS = {
    "build": cmd_build,
    "stats": cmd_stats,
    "similarity": cmd_similarity,
    "cluster": cmd_cluster,
    "export": cmd_export,
    "gen": cmd_gen,
    "serve": cmd_serve,
    "print-config": cmd_print_config,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        overrides = _config_file_overrides(argv)
        cfg = RunConfig(**overrides)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser(cfg)
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}: no such file", file=sys.stderr)
        return 2
    except MalformedRecordError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

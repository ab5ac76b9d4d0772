"""HTTP facade over a built corpus: main cloud, sub-clouds, drill-down lists.

The artifact is immutable after startup; the only shared mutable state is a
bounded LRU of computed clouds with per-key single-flight (a given cloud is
computed at most once even under concurrent requests for it).
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from pathlib import Path
from typing import Callable

from . import _kernels
from .corpus import Corpus
from .errors import UnknownTagError
from .layout import MODES, CloudModel, emit_document, emit_html
from .pipeline import CloudParams, compute_cloud
from .similarity import jaccard
from .weighting import SelectionMethod


class SingleFlightCache:
    """Bounded LRU where each missing key is computed by exactly one caller."""

    def __init__(self, maxsize: int = 128):
        if maxsize < 1:
            raise ValueError("maxsize must be >= 1")
        self._maxsize = maxsize
        self._lock = threading.Lock()
        self._data: OrderedDict = OrderedDict()
        self._pending: dict = {}

    def get(self, key, compute: Callable):
        while True:
            with self._lock:
                if key in self._data:
                    self._data.move_to_end(key)
                    return self._data[key]
                event = self._pending.get(key)
                if event is None:
                    event = threading.Event()
                    self._pending[key] = event
                    owner = True
                else:
                    owner = False
            if not owner:
                event.wait()
                continue  # computed value is now cached, or the owner failed
            try:
                value = compute()
            except BaseException:
                with self._lock:
                    self._pending.pop(key, None)
                event.set()
                raise
            with self._lock:
                self._data[key] = value
                self._data.move_to_end(key)
                while len(self._data) > self._maxsize:
                    self._data.popitem(last=False)
                self._pending.pop(key, None)
            event.set()
            return value

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)


class BuildArtifact:
    """A corpus plus its default parameters and the precomputed main cloud."""

    def __init__(self, corpus: Corpus, defaults: CloudParams | None = None, *, cache_size: int = 128):
        self.corpus = corpus
        self.defaults = defaults or CloudParams()
        self.digest = corpus.digest()
        self._cache = SingleFlightCache(cache_size)
        self.main_cloud = self.cloud(self.defaults)

    def _key(self, tag: str | None, params: CloudParams):
        return (tag, params.method, params.n, params.k, params.mode)

    def cloud(self, params: CloudParams) -> CloudModel:
        return self._cache.get(
            self._key(None, params),
            lambda: compute_cloud(self.corpus, params, corpus_digest=self.digest),
        )

    def subcloud(self, tag: str, params: CloudParams) -> CloudModel:
        """Cloud over only the resources carrying ``tag``, never containing it."""
        self.corpus.tag_id(tag)  # raises UnknownTagError for unknown tags
        return self._cache.get(
            self._key(tag, params), lambda: self._compute_subcloud(tag, params)
        )

    def _compute_subcloud(self, tag: str, params: CloudParams) -> CloudModel:
        sub = self.corpus.restrict(self.corpus.postings(tag))
        return compute_cloud(
            sub, params, exclude=(tag,), corpus_digest=self.digest
        )

    def resources(self, tag: str, limit: int, offset: int) -> dict:
        """Resources carrying the tag, heaviest first (ties: resource id)."""
        postings = self.corpus.postings(tag)
        weights = self.corpus.weights(tag)
        entries = sorted(
            zip(postings.tolist(), weights.tolist()),
            key=lambda e: (-e[1], self.corpus.resources[e[0]]),
        )
        page = entries[offset : offset + limit]
        return {
            "tag": tag,
            "total": len(entries),
            "limit": limit,
            "offset": offset,
            "resources": [
                {"resource": self.corpus.resources[i], "weight": d} for i, d in page
            ],
        }

    def related(self, tag: str, limit: int) -> dict:
        """Top co-occurring tags by RC, the tag itself excluded."""
        j = self.corpus.tag_id(tag)
        candidates = set()
        for i in self.corpus.postings_by_id(j).tolist():
            candidates.update(self.corpus.resource_tags(i).tolist())
        candidates.discard(j)
        scored = [
            (self.corpus.tags[c], jaccard(self.corpus, tag, self.corpus.tags[c]))
            for c in sorted(candidates)
        ]
        scored.sort(key=lambda e: (-e[1], e[0]))
        return {
            "tag": tag,
            "related": [{"tag": t, "value": v} for t, v in scored[:limit]],
        }

    def meta(self) -> dict:
        d = self.defaults
        return {
            "digest": self.digest,
            "defaults": {
                "method": d.method,
                "n": d.n,
                "k": d.k,
                "mode": d.mode,
                "buckets": d.buckets,
                "seed": d.seed,
                "trials": d.trials,
                "smoothing": d.smoothing,
                "cluster_space": d.cluster_space,
            },
            "corpus": {
                "resources": self.corpus.n_resources,
                "tags": self.corpus.n_tags,
                "cells": self.corpus.n_cells,
            },
            "kernel_backend": _kernels.backend_name(),
        }


# -- HTTP layer ------------------------------------------------------------

_METHOD_IDS = tuple(m.value for m in SelectionMethod)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field


def _error_body(code: str, message: str, field: str | None = None) -> dict:
    body = {"error": code, "message": message}
    if field is not None:
        body["field"] = field
    return body


def create_app(artifact: BuildArtifact, ui_dir: str | Path | None = None):
    """FastAPI application over one immutable artifact."""
    from fastapi import FastAPI, Query, Request
    from fastapi.exceptions import RequestValidationError
    from fastapi.responses import HTMLResponse, JSONResponse, Response
    from fastapi.staticfiles import StaticFiles

    app = FastAPI(title="semcloud", docs_url="/docs")

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content=_error_body(exc.code, exc.message, exc.field),
        )

    @app.exception_handler(UnknownTagError)
    async def handle_unknown_tag(request: Request, exc: UnknownTagError):
        return JSONResponse(
            status_code=404, content=_error_body("unknown_tag", str(exc), "tag")
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = first.get("loc", ())
        field = str(loc[-1]) if loc else None
        return JSONResponse(
            status_code=400,
            content=_error_body(
                "invalid_parameter", first.get("msg", "invalid request"), field
            ),
        )

    def resolve_params(method, n, k, mode) -> CloudParams:
        if method is not None and method not in _METHOD_IDS:
            raise ApiError(
                400, "invalid_parameter",
                f"method must be one of {', '.join(_METHOD_IDS)}", "method",
            )
        if mode is not None and mode not in MODES:
            raise ApiError(
                400, "invalid_parameter",
                f"mode must be one of {', '.join(MODES)}", "mode",
            )
        return artifact.defaults.with_overrides(method=method, n=n, k=k, mode=mode)

    def cloud_response(model: CloudModel, format: str):
        if format == "html":
            return HTMLResponse(emit_html(model))
        return Response(emit_document(model), media_type="application/json")

    def check_format(format: str):
        if format not in ("json", "html"):
            raise ApiError(
                400, "invalid_parameter", "format must be json or html", "format"
            )

    @app.get("/cloud")
    def get_cloud(
        method: str | None = None,
        n: int | None = Query(None, ge=1),
        k: int | None = Query(None, ge=1),
        mode: str | None = None,
        format: str = "json",
    ):
        check_format(format)
        params = resolve_params(method, n, k, mode)
        return cloud_response(artifact.cloud(params), format)

    @app.get("/cloud/{tag}")
    def get_subcloud(
        tag: str,
        method: str | None = None,
        n: int | None = Query(None, ge=1),
        k: int | None = Query(None, ge=1),
        mode: str | None = None,
        format: str = "json",
    ):
        check_format(format)
        params = resolve_params(method, n, k, mode)
        return cloud_response(artifact.subcloud(tag, params), format)

    @app.get("/tags/{tag}/resources")
    def get_resources(
        tag: str,
        limit: int = Query(50, ge=1, le=10000),
        offset: int = Query(0, ge=0),
    ):
        return JSONResponse(artifact.resources(tag, limit, offset))

    @app.get("/tags/{tag}/related")
    def get_related(tag: str, limit: int = Query(10, ge=1, le=10000)):
        return JSONResponse(artifact.related(tag, limit))

    @app.get("/meta")
    def get_meta():
        return JSONResponse(artifact.meta())

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app

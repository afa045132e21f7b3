"""HTTP façade over a built index: search, aggregation, taxonomy and
document lookups, plus static serving of the UI bundle.

The service is read-only. It holds one immutable index snapshot which a
reload (admin endpoint or SIGHUP, both opt-in) swaps atomically; requests
in flight keep the snapshot they started with. Search responses are
rendered through `dumps_api` so the CLI can emit byte-identical JSON.
"""

from __future__ import annotations

import contextlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles

from .corpus import DocumentKind
from .index import (InvalidMode, Query, SearchIndex, aggregate, evaluate,
                    load_index, parse_query_text, search)
from .taxonomy import TopicTaxonomy, load_taxonomy

CORPUS_VERSION_HEADER = "X-Corpus-Version"


class BadRequest(ValueError):
    pass


@dataclass
class ApiConfig:
    index_path: Path
    taxonomy_path: Path
    corpus_path: Path | None = None
    bind_address: str = "127.0.0.1:8000"
    static_dir: Path | None = None
    page_size: int = 10
    facet_k: int = 5
    allow_reload: bool = False
    defer_load: bool = False  # tests exercise the not-ready state

    def __post_init__(self):
        self.index_path = Path(self.index_path)
        self.taxonomy_path = Path(self.taxonomy_path)
        if self.corpus_path is not None:
            self.corpus_path = Path(self.corpus_path)
        if self.static_dir is not None:
            self.static_dir = Path(self.static_dir)
        if self.page_size < 1:
            raise ValueError("page_size must be >= 1")
        if self.facet_k < 0:
            raise ValueError("facet_k must be >= 0")


class ServiceState:
    def __init__(self, config: ApiConfig):
        self.config = config
        self._lock = threading.Lock()
        self._index: SearchIndex | None = None
        self._taxonomy: TopicTaxonomy | None = None

    @property
    def ready(self) -> bool:
        return self._index is not None

    @property
    def index(self) -> SearchIndex | None:
        return self._index

    @property
    def taxonomy(self) -> TopicTaxonomy | None:
        return self._taxonomy

    def load(self) -> None:
        index = load_index(self.config.index_path)
        taxonomy = load_taxonomy(self.config.taxonomy_path)
        with self._lock:
            self._index = index
            self._taxonomy = taxonomy

    def install(self, index: SearchIndex, taxonomy: TopicTaxonomy) -> None:
        with self._lock:
            self._index = index
            self._taxonomy = taxonomy


# --------------------------------------------------------- query parsing

def _parse_year(raw: str | None, name: str) -> int | None:
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise BadRequest(f"malformed year in {name!r}: {raw!r}") from None


def build_query(q: str | None, authors=(), kinds=(), topics=(),
                year_from: str | None = None, year_to: str | None = None,
                ) -> tuple[Query, bool]:
    """Build a Query from raw request parameters.

    Returns (query, impossible): impossible is True when a filter was
    given whose values are all unrecognized, so nothing can match (the
    Query object cannot express an always-false kind filter).
    """
    clauses = parse_query_text(q or "")
    impossible = False
    kind_set: set[DocumentKind] = set()
    for name in kinds:
        kind, recognized = DocumentKind.from_string(name)
        if recognized:
            kind_set.add(kind)
    if kinds and not kind_set:
        impossible = True
    lo = _parse_year(year_from, "yearFrom")
    hi = _parse_year(year_to, "yearTo")
    year_range = None if lo is None and hi is None else (lo, hi)
    query = Query(clauses=clauses,
                  authors=frozenset(authors),
                  kinds=frozenset(kind_set),
                  topic_ids=frozenset(topics),
                  year_range=year_range)
    return query, impossible


def has_any_parameter(q, authors, kinds, topics, year_from, year_to) -> bool:
    return bool(q or authors or kinds or topics
                or (year_from not in (None, "")) or (year_to not in (None, "")))


# --------------------------------------------------------------- payloads

def dumps_api(payload) -> str:
    """Canonical JSON used by both the HTTP layer and `doris query`."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False,
                      separators=(",", ":")) + "\n"


def search_payload(index: SearchIndex, query: Query, impossible: bool,
                   page: int, page_size: int, facet_k: int) -> dict:
    if impossible:
        return {"totalCount": 0, "hits": [], "topicFacet": []}
    result = search(index, query, page=page, page_size=page_size,
                    facet_k=facet_k)
    return {
        "totalCount": result.total_count,
        "hits": [{"docId": h.doc_id, "score": h.score, "title": h.title,
                  "author": h.author, "date": h.date, "kind": h.kind,
                  "snippet": h.snippet} for h in result.hits],
        "topicFacet": [{"topicId": t, "count": c}
                       for t, c in result.topic_facet],
    }


def aggregate_payload(index: SearchIndex, query: Query, impossible: bool,
                      mode: str, parent_topic: str | None) -> dict:
    doc_ids = [] if impossible else evaluate(index, query)
    view = aggregate(index, doc_ids, mode, query=query,
                     parent_topic=parent_topic)
    return {
        "mode": view.mode,
        "parentTopic": view.parent_topic,
        "buckets": [{"key": b.key, "total": b.total,
                     "segments": [{"key": k, "count": c}
                                  for k, c in b.segments]}
                    for b in view.buckets],
    }


def topics_payload(taxonomy: TopicTaxonomy) -> dict:
    topics = []
    for topic_id in sorted(taxonomy.nodes):
        node = taxonomy.nodes[topic_id]
        topics.append({
            "id": topic_id,
            "label": node.label,
            "parents": sorted(node.parent_ids),
            "children": sorted(taxonomy.children.get(topic_id, ())),
        })
    return {"topics": topics}


def document_payload(index: SearchIndex, doc_id: str) -> dict:
    meta = index.doc_meta[doc_id]
    return {
        "id": doc_id,
        "title": meta.title,
        "author": meta.author,
        "date": meta.date.isoformat(),
        "kind": meta.kind.value,
        "text": index.doc_bodies[doc_id],
        "topics": sorted(index.doc_topics.get(doc_id, frozenset())),
    }


# -------------------------------------------------------------------- app

def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=dumps_api(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


def create_app(config: ApiConfig,
               state: ServiceState | None = None) -> FastAPI:
    if state is None:
        state = ServiceState(config)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        if not config.defer_load and not state.ready:
            state.load()
        yield

    app = FastAPI(title="doris", lifespan=lifespan, openapi_url=None)
    app.state.doris = state

    @app.middleware("http")
    async def api_headers(request: Request, call_next):
        response = await call_next(request)
        if request.url.path.startswith("/api/"):
            response.headers["Cache-Control"] = "no-store"
            index = state.index
            if index is not None:
                response.headers[CORPUS_VERSION_HEADER] = index.build_hash
        return response

    def common_params(request: Request):
        params = request.query_params
        return dict(
            q=params.get("q"),
            authors=params.getlist("author"),
            kinds=params.getlist("kind"),
            topics=params.getlist("topic"),
            year_from=params.get("yearFrom"),
            year_to=params.get("yearTo"),
        )

    @app.get("/api/health")
    def health():
        if not state.ready:
            return _json_response({"status": "loading"}, 503)
        return _json_response({"status": "ok"})

    @app.get("/api/search")
    def api_search(request: Request):
        if not state.ready:
            return _error(503, "index is not loaded yet")
        raw = common_params(request)
        if not has_any_parameter(**raw):
            return _error(400, "query needs at least one clause or filter")
        try:
            page = int(request.query_params.get("page") or 0)
        except ValueError:
            return _error(400, "malformed page")
        if page < 0:
            return _error(400, "malformed page")
        try:
            query, impossible = build_query(**raw)
        except BadRequest as exc:
            return _error(400, str(exc))
        payload = search_payload(state.index, query, impossible, page,
                                 config.page_size, config.facet_k)
        return _json_response(payload)

    @app.get("/api/aggregate")
    def api_aggregate(request: Request):
        if not state.ready:
            return _error(503, "index is not loaded yet")
        raw = common_params(request)
        if not has_any_parameter(**raw):
            return _error(400, "query needs at least one clause or filter")
        mode = request.query_params.get("mode") or "author_kind"
        parent_topic = request.query_params.get("parentTopic")
        try:
            query, impossible = build_query(**raw)
        except BadRequest as exc:
            return _error(400, str(exc))
        try:
            payload = aggregate_payload(state.index, query, impossible, mode,
                                        parent_topic)
        except InvalidMode as exc:
            return _error(400, str(exc))
        return _json_response(payload)

    @app.get("/api/topics")
    def api_topics():
        if not state.ready:
            return _error(503, "index is not loaded yet")
        return _json_response(topics_payload(state.taxonomy))

    @app.get("/api/documents/{doc_id}")
    def api_document(doc_id: str):
        if not state.ready:
            return _error(503, "index is not loaded yet")
        if doc_id not in state.index.doc_meta:
            return _error(404, f"unknown document {doc_id!r}")
        return _json_response(document_payload(state.index, doc_id))

    @app.post("/api/admin/reload")
    def api_reload():
        if not config.allow_reload:
            return _error(403, "reload is disabled; start with --allow-reload")
        state.load()
        return _json_response({"status": "ok",
                               "corpusVersion": state.index.build_hash})

    if config.static_dir is not None and config.static_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(config.static_dir),
                                   html=True), name="ui")

    return app

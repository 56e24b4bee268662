"""HTTP API over one pond: thin, stateless adapters around the library
operations, JSON throughout, with the manifests additionally retrievable
verbatim as XML.

Every endpoint delegates to exactly one library call and renders it with
the serializer functions below; equivalence tests import the same
serializers and byte-compare their output against live responses. Only
``POST /ingest`` and ``POST /links/build`` mutate the store; both funnel
through a single writer lock.
"""

from __future__ import annotations

import math
import socket
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from textpond import analytics
from textpond.errors import (
    BindFailure,
    DegenerateRanks,
    EmptyCorpusStats,
    MalformedLayout,
    MissingResource,
    MissingSidecar,
    NotFound,
    NotRegistered,
    ParseError,
    SchemaViolation,
    TextPondError,
    TooFewNodes,
    UnknownDocument,
    UnknownFacet,
    UnknownLabel,
    UnreadablePath,
    WrongPayloadKind,
    ZeroVector,
)
from textpond.index import highlights as index_highlights
from textpond.index import search as index_search
from textpond.ingest import DEFAULT_LANGUAGES
from textpond.linkgraph import LogicalLinkGraph, SimilarityMeasure, load_graph
from textpond.manifests import DocumentManifest, GlobalManifest
from textpond.pipeline import IngestReport, Pond

NOT_FOUND_ERRORS = (NotFound, UnknownLabel, UnknownDocument, UnknownFacet, NotRegistered)
BAD_REQUEST_ERRORS = (
    SchemaViolation,
    MalformedLayout,
    MissingResource,
    MissingSidecar,
    ZeroVector,
    DegenerateRanks,
    TooFewNodes,
    UnreadablePath,
    WrongPayloadKind,
    EmptyCorpusStats,
    ParseError,
)

RESERVED_QUERY_KEYS = frozenset(
    {"keywords", "transformation", "thesaurus", "facet", "granularity", "k_terms"}
)


# -- serializers (shared with the equivalence tests) ---------------------------


def serialize_manifest(manifest: DocumentManifest) -> dict:
    return {
        "id": manifest.doc_id,
        "atomic": dict(manifest.atomic),
        "refs": [{"label": r.label, "xptr": r.xptr, "mdtype": r.mdtype} for r in manifest.refs],
        "links": [{"name": l.name, "value": l.value} for l in manifest.links],
    }


def serialize_global_manifest(manifest: GlobalManifest) -> dict:
    return {
        "entries": [
            {"name": e.name, "location": e.location, "type": e.type} for e in manifest.entries
        ]
    }


def serialize_document_ids(ids) -> dict:
    ordered = sorted(ids)
    return {"ids": ordered, "count": len(ordered)}


def serialize_search(label: str, terms: list[str], ids) -> dict:
    ordered = sorted(ids)
    return {"label": label, "terms": terms, "ids": ordered, "count": len(ordered)}


def serialize_highlights(doc_id: str, snippets: list[str]) -> dict:
    return {"id": doc_id, "snippets": snippets}


def serialize_aggregate(report: analytics.AggregateReport) -> dict:
    return {
        "matched_ids": sorted(report.matched_ids),
        "matched_count": len(report.matched_ids),
        "distribution": report.distribution,
        "timeline": report.timeline,
        "top_terms": [[term, weight] for term, weight in report.top_terms],
        "tagcloud": [[term, weight] for term, weight in report.tagcloud],
    }


def serialize_graph(graph: LogicalLinkGraph) -> dict:
    return {
        "link_name": graph.link_name,
        "nodes": sorted(graph.nodes),
        "edges": [[a, b, s] for (a, b), s in sorted(graph.edges.items())],
    }


def serialize_build_report(graph: LogicalLinkGraph, report) -> dict:
    return {
        "link_name": graph.link_name,
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "excluded": sorted(report.excluded),
        "pair_failures": len(report.pair_failures),
    }


def serialize_communities(report: analytics.CommunityReport) -> dict:
    return {
        "link_name": report.link_name,
        "threshold": report.threshold if math.isfinite(report.threshold) else None,
        "communities": [list(block) for block in report.communities],
        "modularity": report.modularity,
    }


def serialize_centrality(report: analytics.CentralityReport) -> dict:
    return {
        "link_name": report.link_name,
        "scores": {node: report.scores[node] for node in sorted(report.scores)},
    }


def serialize_ingest_report(report: IngestReport) -> dict:
    return {
        "ingested": list(report.ingested),
        "count": len(report.ingested),
        "skipped": [{"path": path, "reason": reason} for path, reason in report.skipped],
    }


# -- request parsing ------------------------------------------------------------


def _split_terms(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [t for chunk in raw.split(",") for t in chunk.split() if t]


def _facet_filters(request: Request) -> dict[str, set[str]]:
    filters: dict[str, set[str]] = {}
    for key, value in request.query_params.multi_items():
        if key in RESERVED_QUERY_KEYS:
            continue
        for v in _split_terms(value):
            filters.setdefault(key, set()).add(v)
    return filters


def _analysis_query(request: Request) -> analytics.AnalysisQuery:
    params = request.query_params
    return analytics.AnalysisQuery(
        facet_filters=_facet_filters(request),
        keyword_terms=frozenset(_split_terms(params.get("keywords"))),
        transformation=params.get("transformation", "original_version"),
        use_thesaurus=params.get("thesaurus") or None,
    )


# -- application ----------------------------------------------------------------


def _error_response(status: int, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "error": {
                "type": type(exc).__name__,
                "message": str(exc),
                "correlation_id": uuid.uuid4().hex,
            }
        },
    )


def default_ui_dist() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def create_app(
    store_root: Path | str,
    languages: tuple[str, ...] = DEFAULT_LANGUAGES,
    cors_origins: tuple[str, ...] = (),
    ui_dist: Path | str | None = None,
) -> FastAPI:
    pond = Pond.open(store_root, languages)
    app = FastAPI(title="textpond", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.pond = pond
    writer_lock = threading.Lock()

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(TextPondError)
    async def _domain_error(request: Request, exc: TextPondError):
        if isinstance(exc, NOT_FOUND_ERRORS):
            return _error_response(404, exc)
        if isinstance(exc, BAD_REQUEST_ERRORS):
            return _error_response(400, exc)
        return _error_response(500, exc)

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return _error_response(400, exc)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return _error_response(400, exc)

    @app.exception_handler(Exception)
    async def _unexpected_error(request: Request, exc: Exception):
        return _error_response(500, exc)

    # -- read endpoints ----------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/documents")
    def documents(request: Request):
        ids = analytics.filter_documents(pond, _analysis_query(request))
        return JSONResponse(serialize_document_ids(ids))

    @app.get("/manifest/{doc_id}")
    def manifest(doc_id: str):
        return JSONResponse(serialize_manifest(pond.manifests.read_manifest(doc_id)))

    @app.get("/manifest/{doc_id}/raw")
    def manifest_raw(doc_id: str):
        return Response(pond.manifests.read_manifest_raw(doc_id), media_type="application/xml")

    @app.get("/global-manifest")
    def global_manifest():
        return JSONResponse(serialize_global_manifest(pond.global_manifest()))

    @app.get("/search")
    def search_endpoint(
        terms: str = "",
        label: str = "original_version+classic_presentation",
        thesaurus: str | None = None,
        match_all: bool = False,
    ):
        term_list = _split_terms(terms)
        index = pond.indexes.get(label)
        ids = index_search(
            index,
            term_list,
            pond.thesaurus(thesaurus),
            stopwords=pond.stopword_union(),
            dictionary=pond.dictionary_union(),
            match_all=match_all,
        )
        return JSONResponse(serialize_search(label, term_list, ids))

    @app.get("/highlights")
    def highlights_endpoint(
        id: str,
        terms: str,
        window: int = 80,
        label: str = "original_version+classic_presentation",
        thesaurus: str | None = None,
    ):
        index = pond.indexes.get(label)
        snippets = index_highlights(
            index,
            id,
            _split_terms(terms),
            window,
            pond.thesaurus(thesaurus),
            stopwords=pond.stopword_union(),
            dictionary=pond.dictionary_union(),
        )
        return JSONResponse(serialize_highlights(id, snippets))

    @app.get("/aggregate")
    def aggregate_endpoint(request: Request, facet: str, granularity: str = "year", k_terms: int = 10):
        ids = analytics.filter_documents(pond, _analysis_query(request))
        report = analytics.aggregate(pond, ids, facet, granularity, k_terms)
        return JSONResponse(serialize_aggregate(report))

    @app.get("/links/{name}")
    def links(name: str):
        return JSONResponse(serialize_graph(load_graph(name, pond.store_root)))

    @app.get("/centrality")
    def centrality(link: str, threshold: float = float("-inf")):
        graph = load_graph(link, pond.store_root)
        report = analytics.compute_centrality(graph, threshold=threshold)
        return JSONResponse(serialize_centrality(report))

    # -- mutating endpoints ------------------------------------------------

    @app.post("/ingest")
    async def ingest(request: Request):
        body = await request.json()
        source_root = body.get("source_root") if isinstance(body, dict) else None
        if not source_root:
            raise ValueError("body must be a JSON object with a 'source_root' path")
        with writer_lock:
            report = pond.ingest_tree(Path(source_root))
        return JSONResponse(serialize_ingest_report(report))

    @app.post("/links/build")
    async def links_build(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "presentation" not in body or "measure" not in body:
            raise ValueError("body must be a JSON object with 'presentation' and 'measure'")
        measure = SimilarityMeasure(body["measure"], body["presentation"])
        with writer_lock:
            graph, report = pond.build_links(measure)
        return JSONResponse(serialize_build_report(graph, report))

    @app.post("/communities")
    async def communities(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "link" not in body:
            raise ValueError("body must be a JSON object with a 'link' name")
        graph = load_graph(body["link"], pond.store_root)
        ids = frozenset(body["ids"]) if body.get("ids") is not None else None
        report = analytics.detect_communities(
            graph,
            ids,
            float(body.get("threshold", float("-inf"))),
            int(body.get("t", 4)),
        )
        return JSONResponse(serialize_communities(report))

    resolved_ui = Path(ui_dist) if ui_dist else default_ui_dist()
    if resolved_ui and resolved_ui.is_dir():
        app.mount("/ui", StaticFiles(directory=resolved_ui, html=True), name="ui")

    return app


# -- server entry ----------------------------------------------------------------


@dataclass(frozen=True)
class ApiConfig:
    store_root: Path
    host: str = "127.0.0.1"
    port: int = 8000
    languages: tuple[str, ...] = DEFAULT_LANGUAGES
    cors_origins: tuple[str, ...] = field(default_factory=tuple)
    ui_dist: Path | None = None


def serve(config: ApiConfig) -> None:
    """Run the API until interrupted. Raises BindFailure if the address is taken."""
    import uvicorn

    app = create_app(config.store_root, config.languages, config.cors_origins, config.ui_dist)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((config.host, config.port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {config.host}:{config.port}: {exc}") from exc
    finally:
        probe.close()
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")

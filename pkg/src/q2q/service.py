"""HTTP API binding ingestion, indexing, and retrieval into one server.

Queries are side-effect-free and may run concurrently; ingestion holds a
writer lock and persists the store and index after each batch. Scores are
rounded to four decimals in transport only.
"""

from __future__ import annotations

import json
import os
import threading

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .config import ServiceConfig
from .corpus import Article
from .embed import EmbeddingBackend, HashingEmbedder, HttpEmbeddingClient
from .errors import (
    ConfigurationError,
    DanglingHashError,
    EmptyIndexError,
    IndexFormatError,
    StoreLoadError,
    TransportError,
)
from .index import QuestionIndex
from .pipeline import IngestionPipeline
from .qgen import HttpGenerationClient, QuestionGenerator
from .retrieval import RetrievalEngine, RetrievalResult
from .store import ContentStore
from .wikidata import QID_PATTERN, SparqlClient


def build_backend(config: ServiceConfig) -> EmbeddingBackend:
    if config.embedding_endpoint:
        return HttpEmbeddingClient(config.embedding_endpoint, expected_dim=config.embedding_dim)
    return HashingEmbedder(config.embedding_dim)


def load_state(config: ServiceConfig) -> tuple[ContentStore, QuestionIndex]:
    """Open the persisted store and index, or start empty ones."""
    store = (
        ContentStore.load(config.store_path)
        if os.path.exists(config.store_path)
        else ContentStore()
    )
    index = (
        QuestionIndex.load(config.index_path)
        if os.path.exists(config.index_path)
        else QuestionIndex(config.embedding_dim)
    )
    if index.dim != config.embedding_dim:
        raise ConfigurationError(
            f"index at {config.index_path} has dim {index.dim}, config says {config.embedding_dim}"
        )
    return store, index


def persist_state(config: ServiceConfig, store: ContentStore, index: QuestionIndex) -> None:
    for path in (config.store_path, config.index_path):
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
    store.save(config.store_path)
    index.save(config.index_path)


class ServiceState:
    """Shared components plus the single-writer ingestion lock."""

    def __init__(
        self,
        config: ServiceConfig,
        store: ContentStore,
        index: QuestionIndex,
        backend: EmbeddingBackend,
        generator: QuestionGenerator | None,
        sparql: SparqlClient | None,
    ):
        self.config = config
        self.store = store
        self.index = index
        self.backend = backend
        self.generator = generator
        self.sparql = sparql
        self.engine = RetrievalEngine(
            index, store, backend, sentence_threshold=config.sentence_threshold
        )
        self.write_lock = threading.Lock()

    def pipeline(self) -> IngestionPipeline:
        if self.generator is None:
            raise ConfigurationError("no generation endpoint configured")
        return IngestionPipeline(
            self.store,
            self.index,
            self.generator,
            self.backend,
            parallelism=self.config.parallelism,
        )


def result_to_json(result: RetrievalResult) -> dict:
    return {
        "matched_question": result.matched_question,
        "score": round(result.score, 4),
        "source_kind": result.source_kind.name.lower(),
        "article": (
            {
                "article_id": result.article.article_id,
                "article_title": result.article.article_title,
                "section_title": result.article.section_title,
                "paragraph_index": result.article.paragraph_index,
            }
            if result.article
            else None
        ),
        "text": result.text,
        "sentence": (
            {"start": result.sentence_span[0], "end": result.sentence_span[1]}
            if result.sentence_span
            else None
        ),
        "media_url": result.media_url,
    }


def parse_articles_jsonl(body: bytes) -> list[Article]:
    articles = []
    for line_no, line in enumerate(body.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            articles.append(
                Article(
                    article_id=str(record["id"]),
                    title=record["title"],
                    sections=tuple(
                        (section["title"], section["text"]) for section in record["sections"]
                    ),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"line {line_no}: {exc}") from exc
    return articles


def create_app(
    config: ServiceConfig | None = None,
    *,
    store: ContentStore | None = None,
    index: QuestionIndex | None = None,
    backend: EmbeddingBackend | None = None,
    generator: QuestionGenerator | None = None,
    sparql: SparqlClient | None = None,
) -> FastAPI:
    """Build the service; components are injectable for tests."""
    config = config or ServiceConfig()
    backend = backend or build_backend(config)
    if store is None or index is None:
        loaded_store, loaded_index = load_state(config)
        store = store or loaded_store
        index = index or loaded_index
    if generator is None and config.generation_endpoint:
        generator = QuestionGenerator(HttpGenerationClient(config.generation_endpoint))
    if sparql is None and config.sparql_endpoint:
        sparql = SparqlClient(config.sparql_endpoint, language=config.language)

    state = ServiceState(config, store, index, backend, generator, sparql)
    app = FastAPI(title="q2q", version=__version__)
    app.state.q2q = state
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/query")
    def query(q: str = "", k: int | None = None) -> Response:
        if not q.strip():
            return JSONResponse({"detail": "query parameter q must be non-empty"}, status_code=400)
        top_k = k if k is not None else state.config.default_k
        if top_k < 1:
            return JSONResponse({"detail": "k must be >= 1"}, status_code=400)
        try:
            results = state.engine.answer(q, top_k)
        except EmptyIndexError:
            return JSONResponse({"detail": "index is empty"}, status_code=503)
        except TransportError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=502)
        except DanglingHashError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=500)
        return JSONResponse({"results": [result_to_json(r) for r in results]})

    @app.post("/ingest/articles")
    async def ingest_articles(request: Request) -> Response:
        body = await request.body()
        try:
            articles = parse_articles_jsonl(body)
        except (ValueError, UnicodeDecodeError) as exc:
            return JSONResponse({"detail": f"malformed request body: {exc}"}, status_code=422)
        if not articles:
            return JSONResponse({"detail": "no articles in request body"}, status_code=422)
        try:
            with state.write_lock:
                report = state.pipeline().ingest_articles(articles)
                persist_state(state.config, state.store, state.index)
        except ConfigurationError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=503)
        except TransportError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=502)
        return JSONResponse(report.as_dict())

    @app.post("/ingest/wikidata/{qid}")
    def ingest_wikidata(qid: str) -> Response:
        if not QID_PATTERN.match(qid):
            return JSONResponse({"detail": f"not a QID: {qid}"}, status_code=422)
        if state.sparql is None:
            return JSONResponse({"detail": "no SPARQL endpoint configured"}, status_code=503)
        try:
            with state.write_lock:
                report = state.pipeline().ingest_wikidata(
                    qid, state.sparql, state.config.language
                )
                persist_state(state.config, state.store, state.index)
        except ConfigurationError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=503)
        except TransportError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=502)
        return JSONResponse(report.as_dict())

    @app.get("/status")
    def status() -> dict:
        return {
            "entries": state.index.count(),
            "passages": state.store.passage_count(),
            "triples": state.store.triple_count(),
            "dim": state.backend.dim,
            "version": __version__,
        }

    if config.ui_dir and os.path.isdir(config.ui_dir):
        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app

"""HTTP/JSON facade over the search engine, plus the engine assembly itself.

Error mapping (each inner error surfaces as exactly one status):

* 400 — bad parameters (empty query, bad mode/rank, non-positive k/n/probe)
* 404 — unknown notation code or image id
* 413 — image body over the 16 MiB limit
* 422 — query key missing from a precomputed adapter table
* 503 — encoder unavailable/misbehaving (none configured, unreachable,
        wrong dimension)

All shared state is immutable after startup, so request handling needs no
locking and identical deployments answer byte-identically.
"""

from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from iconsearch.config import ServiceConfig
from iconsearch.corpus import Corpus, ingest
from iconsearch.notation import MalformedNotation, SchemeStore, load_scheme, parent_of, parse_notation
from iconsearch.pipeline import (
    EncoderUnavailable,
    HttpEncoderAdapter,
    PrecomputedTableAdapter,
    SearchParams,
    UnknownQueryKey,
    multimodal_search,
)
from iconsearch.tfidf import NoIndexableDocuments, build_tfidf, query_tfidf
from iconsearch.vector_index import DimensionMismatch, ZeroVector, build_flat, build_ivf

MAX_IMAGE_BYTES = 16 * 1024 * 1024
MODES = ("multimodal", "tfidf")


@dataclass
class SearchEngine:
    """Immutable bundle of everything a query needs."""

    scheme: SchemeStore
    corpus: Corpus
    index: object  # FlatIndex or IvfIndex
    text_index: object | None
    adapter: object | None
    default_k: int = 100
    default_n: int = 20
    default_probe: int | None = None

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "SearchEngine":
        config.validate()
        scheme = load_scheme(config.scheme_path)
        corpus = ingest(config.embeddings_path, config.metadata_path)
        ids = corpus.row_ids()
        if config.ivf_partitions:
            index = build_ivf(corpus.matrix, ids, config.ivf_partitions, config.ivf_seed)
        else:
            index = build_flat(corpus.matrix, ids)

        try:
            text_index = build_tfidf(dict(scheme.entries))
        except NoIndexableDocuments:
            text_index = None

        adapter = None
        if config.adapter_table_path:
            adapter = PrecomputedTableAdapter.from_jsonl(config.adapter_table_path)
        elif config.encoder_endpoint:
            dim = config.encoder_dim or corpus.matrix.dim
            adapter = HttpEncoderAdapter(config.encoder_endpoint, dim)

        return cls(
            scheme,
            corpus,
            index,
            text_index,
            adapter,
            default_k=config.default_k,
            default_n=config.default_n,
            default_probe=config.default_probe,
        )

    def _uri_of(self, image_id: str) -> str | None:
        return self.corpus.records[image_id].source_uri

    def multimodal(self, query, k=None, n=None, probe=None, rank_by="count", kind="text") -> dict:
        if self.adapter is None:
            raise EncoderUnavailable("no encoder adapter configured")
        params = SearchParams(
            k=k or self.default_k,
            n=n or self.default_n,
            probe=probe if probe is not None else self.default_probe,
            rank_by=rank_by,
        )
        result = multimodal_search(
            self.corpus, self.index, self.adapter, query, params, self.scheme, kind
        )
        return {
            "hits": [
                {"image_id": h.image_id, "score": h.score, "uri": self._uri_of(h.image_id)}
                for h in result.hits
            ],
            "notations": [
                {"code": a.code, "label": a.label, "count": a.count, "best_score": a.best_score}
                for a in result.notations
            ],
        }

    def tfidf(self, query: str, n=None) -> dict:
        results = []
        if self.text_index is not None:
            results = query_tfidf(self.text_index, query, n or self.default_n)
        return {
            "notations": [
                {"code": code, "label": self.scheme.label_of(code), "score": score}
                for code, score in results
            ]
        }

    def knows_code(self, code: str) -> bool:
        return code in self.scheme.entries or code in self.scheme.children or code in self.corpus.inverted

    def notation_info(self, code: str) -> dict:
        parent = None
        try:
            parsed = parse_notation(code)
            parent_notation = parent_of(parsed)
            parent = parent_notation.raw if parent_notation else None
        except MalformedNotation:
            pass
        return {
            "code": code,
            "label": self.scheme.label_of(code),
            "parent": parent,
            "children": self.scheme.children_of(code),
            "image_count": len(self.corpus.inverted.get(code, [])),
        }


def _positive(value, name):
    if value is not None and value < 1:
        raise HTTPException(status_code=400, detail=f"{name} must be >= 1")
    return value


def create_app(engine: SearchEngine, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="iconsearch", docs_url=None, redoc_url=None)

    def run_multimodal(query, k, n, probe, rank, kind="text"):
        try:
            return engine.multimodal(query, k=k, n=n, probe=probe, rank_by=rank, kind=kind)
        except UnknownQueryKey as exc:
            raise HTTPException(status_code=422, detail=f"unknown query key: {exc}") from None
        except (EncoderUnavailable, DimensionMismatch) as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from None
        except (ZeroVector, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

    @app.get("/api/search")
    def api_search(
        q: str = "",
        k: int | None = None,
        n: int | None = None,
        probe: int | None = None,
        mode: str = "multimodal",
        rank: str = "count",
    ):
        if not q:
            raise HTTPException(status_code=400, detail="q must be non-empty")
        if mode not in MODES:
            raise HTTPException(status_code=400, detail=f"mode must be one of {MODES}")
        if rank not in ("count", "weighted"):
            raise HTTPException(status_code=400, detail="rank must be count or weighted")
        _positive(k, "k"), _positive(n, "n"), _positive(probe, "probe")
        if mode == "tfidf":
            return JSONResponse(engine.tfidf(q, n))
        return JSONResponse(run_multimodal(q, k, n, probe, rank))

    @app.post("/api/search/image")
    async def api_search_image(
        request: Request,
        k: int | None = None,
        n: int | None = None,
        probe: int | None = None,
        rank: str = "count",
    ):
        _positive(k, "k"), _positive(n, "n"), _positive(probe, "probe")
        body = await request.body()
        if len(body) > MAX_IMAGE_BYTES:
            raise HTTPException(status_code=413, detail="image exceeds 16 MiB limit")
        if not body:
            raise HTTPException(status_code=400, detail="empty image body")
        return JSONResponse(run_multimodal(body, k, n, probe, rank, kind="image"))

    @app.get("/api/notations/{code}")
    def api_notation(code: str):
        if not engine.knows_code(code):
            raise HTTPException(status_code=404, detail=f"unknown notation {code!r}")
        return JSONResponse(engine.notation_info(code))

    @app.get("/api/notations/{code}/children")
    def api_notation_children(code: str):
        if not engine.knows_code(code):
            raise HTTPException(status_code=404, detail=f"unknown notation {code!r}")
        children = [
            {
                "code": child,
                "label": engine.scheme.label_of(child),
                "image_count": len(engine.corpus.inverted.get(child, [])),
            }
            for child in engine.scheme.children_of(code)
        ]
        return JSONResponse({"code": code, "children": children})

    @app.get("/api/images/{image_id}")
    def api_image(image_id: str):
        if image_id not in engine.corpus.records:
            raise HTTPException(status_code=404, detail=f"unknown image {image_id!r}")
        record = engine.corpus.records[image_id]
        return JSONResponse(
            {
                "image_id": record.image_id,
                "notations": list(record.notations),
                "uri": record.source_uri,
            }
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    engine = SearchEngine.from_config(config)
    return create_app(engine, static_dir=config.static_dir)

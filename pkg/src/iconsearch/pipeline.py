"""Query encoding, k-NN retrieval, and notation aggregation.

The engine never embeds a neural network. Queries are turned into vectors by
an adapter: either a precomputed key -> vector table (tests, demos, offline
fixtures) or an external HTTP encoder speaking a tiny JSON protocol
(``POST <url>`` with ``{"kind": "text"|"image", "payload": ...}`` returning
``{"vector": [...]}``; image payloads are base64).

Retrieved neighbor images vote for their notation codes: a code's rank is
its image count (descending), then its best similarity, then the code
itself. A similarity-weighted ranking is available behind ``rank_by`` for
comparison; counting is the default behavior.
"""

import base64
import json
from dataclasses import dataclass, field

import numpy as np
import requests

from iconsearch.corpus import Corpus
from iconsearch.notation import SchemeStore
from iconsearch.vector_index import DimensionMismatch, FlatIndex, IvfIndex, ScoredHit, ZeroVector

DEFAULT_K = 100
DEFAULT_N = 20
ENCODER_TIMEOUT = 10.0


class UnknownQueryKey(KeyError):
    pass


class EncoderUnavailable(RuntimeError):
    pass


class UnknownImage(KeyError):
    pass


def _unit(vec, dim: int) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64).ravel()
    if arr.shape[0] != dim:
        raise DimensionMismatch(f"encoder returned dim {arr.shape[0]}, expected {dim}")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVector()
    return arr / norm


class PrecomputedTableAdapter:
    """Key -> vector lookup table; text queries only."""

    kind = "precomputed-table"

    def __init__(self, table: dict[str, np.ndarray], dim: int):
        self.dim = dim
        self.table = {key: _unit(vec, dim) for key, vec in table.items()}

    @classmethod
    def from_jsonl(cls, path) -> "PrecomputedTableAdapter":
        """Load ``{"key": ..., "vector": [...]}`` lines."""
        table = {}
        dim = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                key, vector = obj["key"], obj["vector"]
                if dim is None:
                    dim = len(vector)
                elif len(vector) != dim:
                    raise DimensionMismatch(
                        f"line {lineno}: vector dim {len(vector)} != {dim}"
                    )
                table[key] = vector
        if dim is None:
            raise ValueError(f"empty adapter table: {path}")
        return cls(table, dim)

    def encode(self, payload, kind: str = "text") -> np.ndarray:
        if kind != "text":
            raise EncoderUnavailable(
                "precomputed-table adapter cannot encode images; configure an encoder endpoint"
            )
        if payload not in self.table:
            raise UnknownQueryKey(payload)
        return self.table[payload]


class HttpEncoderAdapter:
    """Client for an external dual-encoder endpoint."""

    kind = "external-endpoint"

    def __init__(self, url: str, dim: int, timeout: float = ENCODER_TIMEOUT):
        self.url = url
        self.dim = dim
        self.timeout = timeout

    def encode(self, payload, kind: str = "text") -> np.ndarray:
        if kind == "image":
            body = {"kind": "image", "payload": base64.b64encode(payload).decode("ascii")}
        else:
            body = {"kind": "text", "payload": payload}
        try:
            resp = requests.post(self.url, json=body, timeout=self.timeout)
        except requests.RequestException as exc:
            raise EncoderUnavailable(f"encoder endpoint {self.url}: {exc}") from None
        if resp.status_code != 200:
            raise EncoderUnavailable(f"encoder endpoint returned HTTP {resp.status_code}")
        try:
            vector = resp.json()["vector"]
        except (ValueError, KeyError):
            raise EncoderUnavailable("encoder endpoint returned malformed JSON") from None
        return _unit(vector, self.dim)


def encode_query(adapter, query, kind: str = "text") -> np.ndarray:
    """Encode a text string or image bytes into a unit vector."""
    return _unit(adapter.encode(query, kind), adapter.dim)


@dataclass
class SearchParams:
    k: int = DEFAULT_K
    n: int = DEFAULT_N
    probe: int | None = None
    rank_by: str = "count"  # "count" (default) or "weighted"

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError(f"k and n must be >= 1 (got k={self.k}, n={self.n})")
        if self.rank_by not in ("count", "weighted"):
            raise ValueError(f"rank_by must be 'count' or 'weighted', got {self.rank_by!r}")


@dataclass(frozen=True)
class AggregatedNotation:
    code: str
    label: str
    count: int
    best_score: float


@dataclass
class MultimodalResult:
    hits: list[ScoredHit] = field(default_factory=list)
    notations: list[AggregatedNotation] = field(default_factory=list)


def aggregate_notations(
    hits: list[ScoredHit],
    corpus: Corpus,
    n: int,
    scheme: SchemeStore | None = None,
    rank_by: str = "count",
) -> list[AggregatedNotation]:
    """Tally the notation codes carried by the hit images, ranked for output."""
    counts: dict[str, int] = {}
    best: dict[str, float] = {}
    weight: dict[str, float] = {}
    for hit in hits:
        if hit.image_id not in corpus.records:
            raise UnknownImage(hit.image_id)
        for code in corpus.records[hit.image_id].notations:
            counts[code] = counts.get(code, 0) + 1
            weight[code] = weight.get(code, 0.0) + hit.score
            if code not in best or hit.score > best[code]:
                best[code] = hit.score

    if rank_by == "weighted":
        key = lambda code: (-weight[code], -counts[code], code)
    else:
        key = lambda code: (-counts[code], -best[code], code)
    ranked = sorted(counts, key=key)[:n]

    label_of = scheme.label_of if scheme is not None else lambda code: ""
    return [
        AggregatedNotation(code, label_of(code), counts[code], best[code]) for code in ranked
    ]


def multimodal_search(
    corpus: Corpus,
    index: FlatIndex | IvfIndex,
    adapter,
    query,
    params: SearchParams | None = None,
    scheme: SchemeStore | None = None,
    query_kind: str = "text",
) -> MultimodalResult:
    """Encode, retrieve top-K neighbor images, and aggregate their notations."""
    params = params or SearchParams()
    vector = encode_query(adapter, query, query_kind)
    if isinstance(index, IvfIndex):
        probe = params.probe if params.probe is not None else index.n_partitions
        hits = index.search(vector, params.k, probe)
    else:
        hits = index.search(vector, params.k)
    notations = aggregate_notations(hits, corpus, params.n, scheme, params.rank_by)
    return MultimodalResult(hits=hits, notations=notations)

"""iconsearch: multimodal concept retrieval for Iconclass-style schemes.

The library combines a k-NN vector index over annotated-image embeddings
with notation aggregation, a TF-IDF baseline over notation labels, and a
blinded preference-evaluation harness. An HTTP/JSON service and a CLI sit
on top.
"""

from iconsearch.notation import (
    MalformedNotation,
    Notation,
    SchemeStore,
    ancestors,
    is_descendant,
    load_scheme,
    parent_of,
    parse_notation,
)
from iconsearch.vector_index import (
    DimensionMismatch,
    DuplicateId,
    EmbeddingMatrix,
    FlatIndex,
    IvfIndex,
    ScoredHit,
    ShapeMismatch,
    TooFewRows,
    ZeroVector,
    build_flat,
    build_ivf,
    normalize,
    search,
    search_ivf,
)
from iconsearch.storage import read_icnx, write_icnx
from iconsearch.tfidf import NoIndexableDocuments, TfIdfIndex, build_tfidf, query_tfidf, tokenize
from iconsearch.corpus import (
    Corpus,
    CorpusStats,
    ImageRecord,
    NotFound,
    ingest,
    save_corpus,
)
from iconsearch.pipeline import (
    AggregatedNotation,
    EncoderUnavailable,
    HttpEncoderAdapter,
    MultimodalResult,
    PrecomputedTableAdapter,
    SearchParams,
    UnknownImage,
    UnknownQueryKey,
    aggregate_notations,
    encode_query,
    multimodal_search,
)
from iconsearch.evaluation import (
    ComparisonRow,
    PreferenceRecord,
    PreferenceTally,
    generate_sheet,
    list_overlap,
    tally,
)

__version__ = "0.1.0"

"""The full pipeline on a small corpus: multimodal search next to TF-IDF.

Recreates the street scenario: the vector route returns the street notation
plus concepts that co-occur in street pictures (people, animals), while the
text route only matches labels containing the query word.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from iconsearch import (
    EmbeddingMatrix,
    PrecomputedTableAdapter,
    SearchParams,
    build_flat,
    build_tfidf,
    ingest,
    list_overlap,
    load_scheme,
    multimodal_search,
    query_tfidf,
    write_icnx,
)

SCHEME = """\
2\tnature
25\tearth, world as celestial body
25I\tcity-view, and landscape with man-made constructions
25I14\tstreet-level views
25I141\tstreet
31D14\tadult man
34B11\tdog
73D\tpassion of Christ
48C\tarchitecture
"""

rng = np.random.default_rng(42)
dim = 16

# ten "street pictures" near one direction, five unrelated images
vectors = np.zeros((15, dim))
for i in range(10):
    angle = 0.01 * (i + 1)
    vectors[i, 0], vectors[i, 1] = np.cos(angle), np.sin(angle)
for j in range(5):
    vectors[10 + j, 3 + (j % 4)] = 1.0

records = []
for i in range(10):
    codes = []
    if i <= 7:
        codes.append("25I141")  # 8 street images
    if i >= 5:
        codes.append("31D14")  # 5 with a man in view
    if i >= 7:
        codes.append("34B11")  # 3 with a dog
    records.append({"id": f"img{i:02d}", "row": i, "notations": codes})
for j in range(5):
    records.append(
        {"id": f"far{j}", "row": 10 + j, "notations": ["73D"] if j % 2 == 0 else ["48C"]}
    )

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    write_icnx(tmp / "embeddings.icnx", vectors.astype(np.float32))
    with open(tmp / "metadata.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
    (tmp / "scheme.tsv").write_text(SCHEME, encoding="utf-8")

    corpus = ingest(tmp / "embeddings.icnx", tmp / "metadata.jsonl")
    scheme = load_scheme(tmp / "scheme.tsv")

print("corpus:", corpus.stats())

index = build_flat(corpus.matrix, corpus.row_ids())
adapter = PrecomputedTableAdapter({"street": [1.0] + [0.0] * (dim - 1)}, dim=dim)

result = multimodal_search(corpus, index, adapter, "street", SearchParams(k=10, n=10), scheme)
print("\nmultimodal 'street' — notations ranked by neighbor count:")
for agg in result.notations:
    print(f"  {agg.code:8s} {agg.label:12s} count={agg.count:2d} best={agg.best_score:.4f}")

text_index = build_tfidf(dict(scheme.entries))
tfidf_hits = query_tfidf(text_index, "street", 10)
print("\ntf-idf 'street' — label matches only:")
for code, score in tfidf_hits:
    print(f"  {code:8s} {scheme.label_of(code):18s} score={score:.4f}")

multi_codes = [a.code for a in result.notations]
text_codes = [c for c, _ in tfidf_hits]
print(f"\ntop-10 overlap between the two systems: "
      f"{list_overlap(multi_codes, text_codes, 10):.2f} (Jaccard)")

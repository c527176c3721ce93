"""TF-IDF ranked retrieval over notation label texts (the text baseline).

One document per notation code, built from its label. Weights: raw term
counts for tf, smoothed idf = ln((1+N)/(1+df)) + 1, and cosine scoring with
L2-normalized document and query vectors, so scores live in [0, 1].
"""

import math
import re
from collections import Counter
from dataclasses import dataclass, field


class NoIndexableDocuments(ValueError):
    """Every supplied document tokenized to nothing."""


_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercased maximal runs of letters/digits; no stemming, no stop-words."""
    return _TOKEN_RE.findall(text.lower())


@dataclass
class TfIdfIndex:
    vocabulary: dict[str, int] = field(default_factory=dict)
    doc_freq: list[int] = field(default_factory=list)
    postings: list[list[tuple[str, int]]] = field(default_factory=list)
    doc_norms: dict[str, float] = field(default_factory=dict)
    n_docs: int = 0
    skipped: int = 0  # documents with no tokens

    def idf(self, term_id: int) -> float:
        return math.log((1 + self.n_docs) / (1 + self.doc_freq[term_id])) + 1.0


def build_tfidf(docs: dict[str, str]) -> TfIdfIndex:
    """Index ``code -> label text`` documents; empty-token docs are skipped."""
    index = TfIdfIndex()
    doc_terms: dict[str, Counter] = {}
    for code, text in docs.items():
        counts = Counter(tokenize(text))
        if not counts:
            index.skipped += 1
            continue
        doc_terms[code] = counts
        for term in counts:
            if term not in index.vocabulary:
                index.vocabulary[term] = len(index.vocabulary)
                index.doc_freq.append(0)
                index.postings.append([])

    if not doc_terms:
        raise NoIndexableDocuments(f"no indexable documents among {len(docs)}")

    index.n_docs = len(doc_terms)
    for code, counts in doc_terms.items():
        for term, count in counts.items():
            tid = index.vocabulary[term]
            index.doc_freq[tid] += 1
            index.postings[tid].append((code, count))

    for code, counts in doc_terms.items():
        norm_sq = 0.0
        for term, count in counts.items():
            weight = count * index.idf(index.vocabulary[term])
            norm_sq += weight * weight
        index.doc_norms[code] = math.sqrt(norm_sq)
    return index


def query_tfidf(index: TfIdfIndex, text: str, n: int) -> list[tuple[str, float]]:
    """Top-n documents by cosine similarity; unknown terms contribute nothing."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    counts = Counter(tokenize(text))
    known = {term: c for term, c in counts.items() if term in index.vocabulary}
    if not known:
        return []

    query_weights = {}
    norm_sq = 0.0
    for term, count in known.items():
        weight = count * index.idf(index.vocabulary[term])
        query_weights[term] = weight
        norm_sq += weight * weight
    query_norm = math.sqrt(norm_sq)

    scores: dict[str, float] = {}
    for term, q_weight in query_weights.items():
        tid = index.vocabulary[term]
        idf = index.idf(tid)
        for code, count in index.postings[tid]:
            scores[code] = scores.get(code, 0.0) + (q_weight / query_norm) * (
                count * idf / index.doc_norms[code]
            )

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:n]

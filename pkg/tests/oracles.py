"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately written against the plain definitions
(per-row loops, dense matrices, dict tallies) rather than the library's
data structures, so oracle and implementation share no code path.
"""

import math
from collections import Counter


def brute_force_knn(rows, ids, query, k):
    """Exact top-k by cosine: normalize, per-row dot products, sort.

    ``rows`` are raw (possibly unnormalized) vectors as nested lists.
    Returns [(id, score)] sorted by score desc, id asc.
    """
    qnorm = math.sqrt(sum(x * x for x in query))
    q = [x / qnorm for x in query]
    scored = []
    for vec, image_id in zip(rows, ids):
        norm = math.sqrt(sum(x * x for x in vec))
        score = sum((x / norm) * y for x, y in zip(vec, q))
        scored.append((image_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]


def tfidf_dense_scores(docs, query_text, tokenize):
    """Cosine scores from an explicitly materialized tf-idf matrix.

    ``docs`` maps code -> label text. Returns {code: score} for documents
    with a nonzero score. Weighting: tf = raw count,
    idf = ln((1+N)/(1+df)) + 1, L2-normalized vectors.
    """
    doc_tokens = {code: tokenize(text) for code, text in docs.items()}
    doc_tokens = {code: toks for code, toks in doc_tokens.items() if toks}
    n_docs = len(doc_tokens)
    vocab = sorted({t for toks in doc_tokens.values() for t in toks})
    df = {t: sum(1 for toks in doc_tokens.values() if t in toks) for t in vocab}
    idf = {t: math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in vocab}

    def vectorize(tokens):
        counts = Counter(t for t in tokens if t in idf)
        vec = [counts.get(t, 0) * idf[t] for t in vocab]
        norm = math.sqrt(sum(w * w for w in vec))
        return [w / norm for w in vec] if norm > 0 else None

    q_vec = vectorize(tokenize(query_text))
    if q_vec is None:
        return {}
    scores = {}
    for code, tokens in doc_tokens.items():
        d_vec = vectorize(tokens)
        score = sum(qw * dw for qw, dw in zip(q_vec, d_vec))
        if score != 0.0:
            scores[code] = score
    return scores


def aggregate_tally(hit_pairs, image_notations, n):
    """Rank codes on hit images by (count desc, best score desc, code asc).

    ``hit_pairs``: [(image_id, score)]; ``image_notations``: id -> code list.
    Returns [(code, count, best_score)] top-n.
    """
    codes = set()
    for image_id, _ in hit_pairs:
        codes.update(image_notations[image_id])
    rows = []
    for code in codes:
        carrying = [(i, s) for i, s in hit_pairs if code in image_notations[i]]
        count = len(carrying)
        best = max(s for _, s in carrying)
        rows.append((code, count, best))
    rows.sort(key=lambda r: (-r[1], -r[2], r[0]))
    return rows[:n]

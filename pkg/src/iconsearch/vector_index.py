"""Flat and IVF (partitioned) top-K cosine similarity search.

Vectors are stored unit-normalized in float32; every similarity is an inner
product accumulated in double precision, so cosine == dot. Result lists are
sorted by score descending with exact ties broken by ascending image id,
which makes every search fully deterministic.

The IVF index runs spherical k-means (Lloyd's with k-means++ seeding;
centroids re-normalized each round, rows assigned to the centroid with the
largest inner product) and probes only the ``n_probe`` partitions whose
centroids best match the query. Probing all partitions reproduces the flat
search exactly.
"""

from dataclasses import dataclass

import numpy as np

from iconsearch.storage import read_icnv, read_icnx, write_icnv, write_icnx

NORM_TOLERANCE = 1e-4
KMEANS_MAX_ITER = 25


class ZeroVector(ValueError):
    """A vector with zero L2 norm cannot be normalized."""

    def __init__(self, row: int | None = None):
        self.row = row
        where = "query vector" if row is None else f"row {row}"
        super().__init__(f"zero vector: {where}")


class DuplicateId(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class TooFewRows(ValueError):
    pass


@dataclass
class EmbeddingMatrix:
    """Row-major store of fixed-dimension vectors.

    float32 input is kept as-is (the on-disk precision); anything else is
    held in float64.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data)
        dtype = np.float32 if arr.dtype == np.float32 else np.float64
        arr = np.ascontiguousarray(arr, dtype=dtype)
        if arr.ndim != 2:
            raise ShapeMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
        self.data = arr

    @property
    def count(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ScoredHit:
    image_id: str
    score: float


def normalize(matrix: EmbeddingMatrix) -> EmbeddingMatrix:
    """Scale every row to unit L2 norm. Raises ZeroVector on all-zero rows."""
    data = matrix.data.astype(np.float64)
    norms = np.linalg.norm(data, axis=1)
    zero_rows = np.nonzero(norms == 0.0)[0]
    if zero_rows.size:
        raise ZeroVector(int(zero_rows[0]))
    return EmbeddingMatrix(data / norms[:, None])


def _normalize_query(query, dim: int) -> np.ndarray:
    q = np.asarray(query, dtype=np.float64).ravel()
    if q.shape[0] != dim:
        raise DimensionMismatch(f"query has dim {q.shape[0]}, index has dim {dim}")
    norm = float(np.linalg.norm(q))
    if norm == 0.0:
        raise ZeroVector()
    return q / norm


def _id_ranks(ids: list[str]) -> np.ndarray:
    order = sorted(range(len(ids)), key=ids.__getitem__)
    ranks = np.empty(len(ids), dtype=np.int64)
    ranks[np.asarray(order, dtype=np.int64)] = np.arange(len(ids), dtype=np.int64)
    return ranks


class FlatIndex:
    """Exact top-K index over a normalized embedding matrix."""

    def __init__(self, matrix: EmbeddingMatrix, ids: list[str], *, _normalized=False):
        if len(ids) != matrix.count:
            raise ShapeMismatch(f"{len(ids)} ids for {matrix.count} rows")
        if len(set(ids)) != len(ids):
            seen = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise DuplicateId(f"duplicate image id {dup!r}")
        if not _normalized:
            # float32 is the canonical storage precision; quantize once here
            # so searches before and after a save/load cycle are identical
            matrix = EmbeddingMatrix(normalize(matrix).data.astype(np.float32))
        self.matrix = matrix
        self.ids = [str(i) for i in ids]
        # doubles for score accumulation, id ranks for deterministic tie-breaks
        self._data64 = self.matrix.data.astype(np.float64)
        self._id_rank = _id_ranks(self.ids)

    @property
    def count(self) -> int:
        return self.matrix.count

    @property
    def dim(self) -> int:
        return self.matrix.dim

    def _top_hits(self, scores: np.ndarray, rows: np.ndarray | None, k: int) -> list[ScoredHit]:
        n = scores.shape[0]
        k_eff = min(k, n)
        if k_eff <= 0:
            return []
        if n > 4096 and k_eff * 4 < n:
            # preselect candidates >= k-th largest score; keeps boundary ties
            kth = np.partition(scores, n - k_eff)[n - k_eff]
            cand = np.nonzero(scores >= kth)[0]
        else:
            cand = np.arange(n)
        global_rows = cand if rows is None else rows[cand]
        order = np.lexsort((self._id_rank[global_rows], -scores[cand]))[:k_eff]
        picked = global_rows[order]
        picked_scores = scores[cand[order]]
        return [
            ScoredHit(self.ids[int(r)], float(s)) for r, s in zip(picked, picked_scores)
        ]

    def search(self, query, k: int) -> list[ScoredHit]:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if self.count == 0:
            return []
        q = _normalize_query(query, self.dim)
        scores = self._data64 @ q
        return self._top_hits(scores, None, k)

    def save(self, path) -> None:
        write_icnx(path, self.matrix.data, self.ids)

    @classmethod
    def load(cls, path) -> "FlatIndex":
        data, ids = read_icnx(path)
        # stored matrices are already normalized; renormalizing would break
        # the bit-exact round-trip
        return cls(EmbeddingMatrix(data), ids, _normalized=True)


def build_flat(matrix: EmbeddingMatrix, ids) -> FlatIndex:
    return FlatIndex(matrix, list(ids))


def search(index: FlatIndex, query, k: int) -> list[ScoredHit]:
    return index.search(query, k)


def _kmeans_pp_init(data: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = data.shape[0]
    centroids = np.empty((k, data.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centroids[0] = data[first]
    # squared Euclidean distance to the nearest chosen centroid
    d2 = np.sum((data - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            pick = int(rng.integers(n))
        else:
            pick = int(rng.choice(n, p=d2 / total))
        centroids[j] = data[pick]
        d2 = np.minimum(d2, np.sum((data - centroids[j]) ** 2, axis=1))
    return centroids


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=1)
    norms[norms == 0.0] = 1.0
    return mat / norms[:, None]


class IvfIndex:
    """Inverted-file index: rows partitioned by their nearest centroid."""

    def __init__(self, centroids: EmbeddingMatrix, partitions: list[np.ndarray], base: FlatIndex):
        self.centroids = centroids
        self.partitions = [np.asarray(p, dtype=np.int64) for p in partitions]
        self.base = base
        self._centroids64 = self.centroids.data.astype(np.float64)

    @property
    def n_partitions(self) -> int:
        return self.centroids.count

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def count(self) -> int:
        return self.base.count

    @property
    def ids(self) -> list[str]:
        return self.base.ids

    def search(self, query, k: int, n_probe: int) -> list[ScoredHit]:
        if not 1 <= n_probe <= self.n_partitions:
            raise ValueError(f"n_probe must be in 1..{self.n_partitions}, got {n_probe}")
        if n_probe == self.n_partitions:
            # probing everything is exactly the flat scan, bit for bit
            return self.base.search(query, k)
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        q = _normalize_query(query, self.dim)
        cscores = self._centroids64 @ q
        probe = np.lexsort((np.arange(self.n_partitions), -cscores))[:n_probe]
        rows = np.sort(np.concatenate([self.partitions[int(j)] for j in probe]))
        if rows.size == 0:
            return []
        scores = self.base._data64[rows] @ q
        return self.base._top_hits(scores, rows, k)

    def save(self, path) -> None:
        write_icnv(path, self.centroids.data, self.partitions, self.base.matrix.data, self.base.ids)

    @classmethod
    def load(cls, path) -> "IvfIndex":
        centroids, partitions, base_matrix, base_ids = read_icnv(path)
        base = FlatIndex(EmbeddingMatrix(base_matrix), base_ids, _normalized=True)
        return cls(EmbeddingMatrix(centroids), partitions, base)


def build_ivf(matrix: EmbeddingMatrix, ids, n_partitions: int, seed: int) -> IvfIndex:
    """Cluster rows with spherical k-means and wrap them in an IvfIndex."""
    if n_partitions < 1:
        raise ValueError(f"n_partitions must be >= 1, got {n_partitions}")
    base = build_flat(matrix, ids)
    if n_partitions > base.count:
        raise TooFewRows(f"{n_partitions} partitions for {base.count} rows")

    data = base._data64
    rng = np.random.default_rng(seed)
    centroids = _unit_rows(_kmeans_pp_init(data, n_partitions, rng))
    assign = np.argmax(data @ centroids.T, axis=1)

    for _ in range(KMEANS_MAX_ITER):
        for j in range(n_partitions):
            members = assign == j
            if members.any():
                centroids[j] = data[members].mean(axis=0)
            else:
                # re-seed an empty cluster with the globally farthest point
                sims = np.einsum("ij,ij->i", data, centroids[assign])
                centroids[j] = data[int(np.argmin(sims))]
        centroids = _unit_rows(centroids)
        new_assign = np.argmax(data @ centroids.T, axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign

    partitions = [np.nonzero(assign == j)[0].astype(np.int64) for j in range(n_partitions)]
    return IvfIndex(EmbeddingMatrix(centroids.astype(np.float32)), partitions, base)


def search_ivf(index: IvfIndex, query, k: int, n_probe: int) -> list[ScoredHit]:
    return index.search(query, k, n_probe)

"""Build a flat index and an IVF index over synthetic vectors and compare them.

Walks through: normalization, exact top-K search, partitioned search at
several probe depths, and binary persistence round-trips.
"""

import tempfile
import time
from pathlib import Path

import numpy as np

from iconsearch import EmbeddingMatrix, FlatIndex, IvfIndex, build_flat, build_ivf

rng = np.random.default_rng(7)

# --- a corpus of 20,000 unit vectors in two loose clusters -----------------
n, d = 20_000, 64
centers = np.zeros((2, d))
centers[0, 0] = 1.0
centers[1, 1] = 1.0
labels = rng.integers(0, 2, n)
vectors = centers[labels] + 0.15 * rng.standard_normal((n, d))
ids = [f"img{i:06d}" for i in range(n)]

flat = build_flat(EmbeddingMatrix(vectors), ids)
print(f"flat index: {flat.count} vectors, dim {flat.dim}")

query = centers[0] + 0.15 * rng.standard_normal(d)

t0 = time.perf_counter()
exact = flat.search(query, 10)
print(f"\nexact top-10 ({1e3 * (time.perf_counter() - t0):.1f} ms):")
for hit in exact[:5]:
    print(f"  {hit.image_id}  score={hit.score:.4f}")

# --- IVF: cluster into 64 partitions, probe a few ---------------------------
ivf = build_ivf(EmbeddingMatrix(vectors), ids, n_partitions=64, seed=123)
sizes = sorted(len(p) for p in ivf.partitions)
print(f"\nivf index: 64 partitions, sizes {sizes[0]}..{sizes[-1]}")

exact_ids = {h.image_id for h in exact}
for n_probe in (1, 4, 16, 64):
    t0 = time.perf_counter()
    approx = ivf.search(query, 10, n_probe=n_probe)
    took = 1e3 * (time.perf_counter() - t0)
    recall = len(exact_ids & {h.image_id for h in approx}) / 10
    print(f"  n_probe={n_probe:3d}  recall@10={recall:.2f}  ({took:.1f} ms)")

print("\nfull probing reproduces the flat search exactly:",
      ivf.search(query, 10, n_probe=64) == exact)

# --- persistence -------------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    flat_path = Path(tmp) / "index.icnx"
    ivf_path = Path(tmp) / "index.icnv"
    flat.save(flat_path)
    ivf.save(ivf_path)
    print(f"\nsaved {flat_path.stat().st_size / 1e6:.1f} MB flat, "
          f"{ivf_path.stat().st_size / 1e6:.1f} MB ivf")
    reloaded = FlatIndex.load(flat_path)
    print("reloaded flat search identical:", reloaded.search(query, 10) == exact)
    print("reloaded ivf search identical:",
          IvfIndex.load(ivf_path).search(query, 10, 4) == ivf.search(query, 10, 4))

"""Shared fixture builders: corpus files and the street scenario."""

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from iconsearch.storage import write_icnx

_acceptance_outcomes = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        if report.passed:
            outcome = "PASS"
        elif report.skipped:
            outcome = "SKIP"
        else:
            outcome = "FAIL"
        _acceptance_outcomes.append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_outcomes:
        terminalreporter.write_line(f"[{outcome}] {name}")


def write_metadata(path, records):
    """records: list of (id, row, notations[, uri]) tuples."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            obj = {"id": rec[0], "row": rec[1], "notations": rec[2]}
            if len(rec) > 3 and rec[3] is not None:
                obj["uri"] = rec[3]
            fh.write(json.dumps(obj) + "\n")


def write_corpus_files(tmp_path, matrix, records, prefix="corpus"):
    emb = tmp_path / f"{prefix}.icnx"
    meta = tmp_path / f"{prefix}.jsonl"
    write_icnx(emb, np.asarray(matrix, dtype=np.float32))
    write_metadata(meta, records)
    return emb, meta


# five images, nine notation assignments, five distinct codes
FIVE_IMAGE_RECORDS = [
    ("img1", 0, ["25I141", "31D14", "34B11"]),
    ("img2", 1, ["25I141", "31D14"]),
    ("img3", 2, ["25I141", "11H(PAUL)"]),
    ("img4", 3, ["73D"]),
    ("img5", 4, ["25I141"]),
]


@pytest.fixture
def five_image_files(tmp_path):
    rng = np.random.default_rng(1234)
    matrix = rng.standard_normal((5, 6))
    return write_corpus_files(tmp_path, matrix, FIVE_IMAGE_RECORDS)


STREET_SCHEME = """\
2\tnature
25\tearth, world as celestial body
25I\tcity-view, and landscape with man-made constructions
25I1\tcity-view in general; 'ideal' city
25I14\tstreet-level views
25I141\tstreet
3\thuman being, man in general
31D14\tadult man
34B11\tdog
73D\tpassion of Christ
48C\tarchitecture
"""

STREET_DIM = 8


def street_vectors():
    """10 near neighbors of e0 with distinct scores, then 5 far images."""
    mat = np.zeros((15, STREET_DIM))
    for i in range(10):
        angle = 0.01 * (i + 1)
        mat[i, 0], mat[i, 1] = np.cos(angle), np.sin(angle)
    for j in range(5):
        mat[10 + j, 2 + (j % 3)] = 1.0  # orthogonal to the query
    return mat


def street_records():
    records = []
    for i in range(10):
        codes = []
        if i <= 7:
            codes.append("25I141")
        if i >= 5:
            codes.append("31D14")
        if i >= 7:
            codes.append("34B11")
        records.append((f"img{i:02d}", i, codes, f"http://images.test/{i:02d}.jpg"))
    for j in range(5):
        records.append((f"far{j}", 10 + j, ["73D"] if j % 2 == 0 else ["48C"]))
    return records


@pytest.fixture
def street_files(tmp_path):
    """Corpus + scheme + adapter table reproducing the street scenario.

    Querying "street" retrieves img00..img09; among those hits 8 images
    carry 25I141, 5 carry 31D14, and 3 carry 34B11.
    """
    emb, meta = write_corpus_files(tmp_path, street_vectors(), street_records(), prefix="street")
    scheme = tmp_path / "scheme.tsv"
    scheme.write_text(STREET_SCHEME, encoding="utf-8")
    adapter = tmp_path / "adapter.jsonl"
    query_vec = [1.0] + [0.0] * (STREET_DIM - 1)
    other_vec = [0.0, 0.0, 1.0] + [0.0] * (STREET_DIM - 3)
    with open(adapter, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"key": "street", "vector": query_vec}) + "\n")
        fh.write(json.dumps({"key": "passion", "vector": other_vec}) + "\n")
    return {"embeddings": emb, "metadata": meta, "scheme": scheme, "adapter": adapter}

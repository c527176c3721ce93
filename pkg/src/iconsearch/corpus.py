"""The annotated-image corpus: embeddings plus notation assignments.

Ingest pairs an ICNX embeddings file with a JSONL metadata file, one object
per line: {"id": str, "row": int, "notations": [str, ...], "uri": str?}.
Every metadata line must claim exactly one matrix row (a bijection), every
image needs at least one notation, and ids must be unique; violations are
fatal. Notation codes are kept verbatim — codes outside the grammar are
tolerated and only counted.
"""

import json
from dataclasses import dataclass, field

from iconsearch.notation import MalformedNotation, parse_notation
from iconsearch.storage import read_icnx, write_icnx
from iconsearch.vector_index import EmbeddingMatrix


class MalformedLine(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RowCountMismatch(ValueError):
    pass


class UnknownRowReference(ValueError):
    pass


class DuplicateRowReference(ValueError):
    pass


class DuplicateImageId(ValueError):
    pass


class NotFound(KeyError):
    pass


@dataclass(frozen=True)
class ImageRecord:
    image_id: str
    embedding_row: int
    notations: tuple[str, ...]
    source_uri: str | None = None


@dataclass(frozen=True)
class CorpusStats:
    n_images: int
    n_assignments: int
    n_unique_notations: int


@dataclass
class Corpus:
    records: dict[str, ImageRecord] = field(default_factory=dict)
    inverted: dict[str, list[str]] = field(default_factory=dict)
    matrix: EmbeddingMatrix = None
    n_unparsed_codes: int = 0

    def stats(self) -> CorpusStats:
        n_assignments = sum(len(r.notations) for r in self.records.values())
        return CorpusStats(len(self.records), n_assignments, len(self.inverted))

    def images_for_notation(self, code: str) -> list[str]:
        return list(self.inverted.get(code, []))

    def get_image(self, image_id: str) -> ImageRecord:
        try:
            return self.records[image_id]
        except KeyError:
            raise NotFound(image_id) from None

    def row_ids(self) -> list[str]:
        """Image ids ordered by embedding row (aligned to the matrix)."""
        ordered = [""] * self.matrix.count
        for record in self.records.values():
            ordered[record.embedding_row] = record.image_id
        return ordered


def _parse_metadata_line(line: str, lineno: int) -> ImageRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLine(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(obj, dict):
        raise MalformedLine("expected a JSON object", lineno)

    image_id = obj.get("id")
    if not isinstance(image_id, str) or not image_id:
        raise MalformedLine("missing or empty 'id'", lineno)
    row = obj.get("row")
    if not isinstance(row, int) or isinstance(row, bool) or row < 0:
        raise MalformedLine("'row' must be a non-negative integer", lineno)
    notations = obj.get("notations")
    if not isinstance(notations, list) or not notations:
        raise MalformedLine("'notations' must be a non-empty list", lineno)
    if not all(isinstance(c, str) and c for c in notations):
        raise MalformedLine("'notations' entries must be non-empty strings", lineno)
    uri = obj.get("uri")
    if uri is not None and not isinstance(uri, str):
        raise MalformedLine("'uri' must be a string when present", lineno)

    deduped = tuple(dict.fromkeys(notations))
    return ImageRecord(image_id, row, deduped, uri)


def ingest(embeddings_path, metadata_path) -> Corpus:
    """Build a corpus from an ICNX embeddings file and a JSONL metadata file."""
    data, _ = read_icnx(embeddings_path)
    matrix = EmbeddingMatrix(data)

    corpus = Corpus(matrix=matrix)
    seen_rows: dict[int, str] = {}
    with open(metadata_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = _parse_metadata_line(line, lineno)
            if record.image_id in corpus.records:
                raise DuplicateImageId(record.image_id)
            if record.embedding_row >= matrix.count:
                raise UnknownRowReference(
                    f"line {lineno}: row {record.embedding_row} of a {matrix.count}-row matrix"
                )
            if record.embedding_row in seen_rows:
                raise DuplicateRowReference(
                    f"line {lineno}: row {record.embedding_row} already claimed by "
                    f"{seen_rows[record.embedding_row]!r}"
                )
            seen_rows[record.embedding_row] = record.image_id
            corpus.records[record.image_id] = record

    if len(corpus.records) != matrix.count:
        raise RowCountMismatch(
            f"{len(corpus.records)} metadata records for {matrix.count} matrix rows"
        )

    for record in corpus.records.values():
        for code in record.notations:
            corpus.inverted.setdefault(code, []).append(record.image_id)
    for ids in corpus.inverted.values():
        ids.sort()
    for code in corpus.inverted:
        try:
            parse_notation(code)
        except MalformedNotation:
            corpus.n_unparsed_codes += 1
    return corpus


def stats(corpus: Corpus) -> CorpusStats:
    return corpus.stats()


def images_for_notation(corpus: Corpus, code: str) -> list[str]:
    return corpus.images_for_notation(code)


def get_image(corpus: Corpus, image_id: str) -> ImageRecord:
    return corpus.get_image(image_id)


def save_corpus(corpus: Corpus, embeddings_path, metadata_path) -> None:
    """Persist as the same two-file layout ingest reads (row order preserved)."""
    ids = corpus.row_ids()
    write_icnx(embeddings_path, corpus.matrix.data.astype("float32"), ids)
    ordered = sorted(corpus.records.values(), key=lambda r: r.embedding_row)
    with open(metadata_path, "w", encoding="utf-8") as fh:
        for record in ordered:
            obj = {
                "id": record.image_id,
                "row": record.embedding_row,
                "notations": list(record.notations),
            }
            if record.source_uri is not None:
                obj["uri"] = record.source_uri
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")

"""Blinded side-by-side comparison sheets and preference tallies.

Two ranked systems ("A" and "B") answer the same queries; their top-10
lists land in a CSV sheet with left/right assignment decided by a seeded
hash of the query, so judges never learn which side is which. A separate
key file records the assignment. Collected responses are unblinded against
the key and tallied per true system, with the preference criterion
(preciseness or exhaustiveness) optional per response.
"""

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

TOP_LIST_SIZE = 10
CRITERIA = ("preciseness", "exhaustiveness")

SHEET_COLUMNS = (
    ["row_id", "query", "image_ref"]
    + [f"left_{i}" for i in range(1, TOP_LIST_SIZE + 1)]
    + [f"right_{i}" for i in range(1, TOP_LIST_SIZE + 1)]
)
RESPONSE_COLUMNS = ["row_id", "preferred", "criterion"]


class MalformedResponse(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownRow(KeyError):
    pass


class SystemFailure(RuntimeError):
    """A ranked-retrieval callable raised while answering a sheet query."""


@dataclass(frozen=True)
class ComparisonRow:
    row_id: int
    query: str
    image_ref: str | None
    left_results: list[tuple[str, str]]
    right_results: list[tuple[str, str]]
    left_is: str  # hidden system tag, "A" or "B"
    blind_seed: int


@dataclass(frozen=True)
class PreferenceRecord:
    query: str
    preferred: str  # "left" | "right" | "none"
    criterion: str | None = None

    def __post_init__(self):
        if self.preferred not in ("left", "right", "none"):
            raise ValueError(f"bad preference {self.preferred!r}")
        if self.criterion is not None and self.criterion not in CRITERIA:
            raise ValueError(f"bad criterion {self.criterion!r}")
        if self.criterion is not None and self.preferred == "none":
            raise ValueError("criterion given without a preference")


@dataclass
class SystemCounts:
    preferences: int = 0
    preciseness: int = 0
    exhaustiveness: int = 0


@dataclass
class PreferenceTally:
    system_a: SystemCounts = field(default_factory=SystemCounts)
    system_b: SystemCounts = field(default_factory=SystemCounts)
    n_responses: int = 0
    n_no_preference: int = 0


def _left_is_a(blind_seed: int, query: str) -> bool:
    digest = hashlib.sha256(f"{blind_seed}\x1f{query}".encode("utf-8")).digest()
    return digest[0] % 2 == 0


def _ask(system, query: str, side: str):
    try:
        results = list(system(query))[:TOP_LIST_SIZE]
    except Exception as exc:  # noqa: BLE001 - any system error blanks the cell
        logger.warning("system failure on %s side for query %r: %s", side, query, exc)
        return [], SystemFailure(f"{side} system failed on {query!r}: {exc}")
    return [(str(code), str(label)) for code, label in results], None


def generate_sheet(
    queries: list[str],
    system_a,
    system_b,
    blind_seed: int,
    sheet_path,
    key_path,
    image_refs: dict[str, str] | None = None,
) -> list[ComparisonRow]:
    """Write the blinded CSV sheet and the JSONL unblinding key.

    ``system_a``/``system_b`` are callables mapping a query string to a
    ranked list of ``(code, label)`` pairs. A failing system yields an empty
    list for that row (the failure is logged).
    """
    if not queries:
        raise ValueError("no queries")
    image_refs = image_refs or {}

    rows = []
    for row_id, query in enumerate(queries, start=1):
        a_results, a_err = _ask(system_a, query, "A")
        b_results, b_err = _ask(system_b, query, "B")
        for err in (a_err, b_err):
            if err is not None:
                logger.warning("row %d emitted with an empty list: %s", row_id, err)
        left_is = "A" if _left_is_a(blind_seed, query) else "B"
        left, right = (a_results, b_results) if left_is == "A" else (b_results, a_results)
        rows.append(
            ComparisonRow(row_id, query, image_refs.get(query), left, right, left_is, blind_seed)
        )

    with open(sheet_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SHEET_COLUMNS)
        for row in rows:
            cells = [str(row.row_id), row.query, row.image_ref or ""]
            for results in (row.left_results, row.right_results):
                rendered = [f"{code}: {label}" if label else code for code, label in results]
                cells += rendered + [""] * (TOP_LIST_SIZE - len(rendered))
            writer.writerow(cells)

    with open(key_path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps({"row_id": row.row_id, "left_is": row.left_is}) + "\n")

    return rows


def _load_key(key_path) -> dict[int, str]:
    key = {}
    with open(key_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            key[int(obj["row_id"])] = obj["left_is"]
    return key


def tally(responses_path, key_path) -> PreferenceTally:
    """Unblind a response CSV against the key and count per true system."""
    key = _load_key(key_path)
    result = PreferenceTally()

    with open(responses_path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return result
        if [h.strip() for h in header] != RESPONSE_COLUMNS:
            raise MalformedResponse(f"bad header {header!r}", 1)
        for lineno, cells in enumerate(reader, start=2):
            if not cells or cells == [""]:
                continue
            if len(cells) != 3:
                raise MalformedResponse(f"expected 3 columns, got {len(cells)}", lineno)
            raw_row, preferred, criterion = (c.strip() for c in cells)
            try:
                row_id = int(raw_row)
            except ValueError:
                raise MalformedResponse(f"bad row_id {raw_row!r}", lineno) from None
            if row_id not in key:
                raise UnknownRow(row_id)
            if preferred not in ("left", "right", "none"):
                raise MalformedResponse(f"bad preference {preferred!r}", lineno)
            if criterion and criterion not in CRITERIA:
                raise MalformedResponse(f"bad criterion {criterion!r}", lineno)
            if criterion and preferred == "none":
                raise MalformedResponse("criterion given without a preference", lineno)

            result.n_responses += 1
            if preferred == "none":
                result.n_no_preference += 1
                continue
            left_is = key[row_id]
            chosen = left_is if preferred == "left" else ("B" if left_is == "A" else "A")
            counts = result.system_a if chosen == "A" else result.system_b
            counts.preferences += 1
            if criterion == "preciseness":
                counts.preciseness += 1
            elif criterion == "exhaustiveness":
                counts.exhaustiveness += 1

    return result


def list_overlap(a, b, n: int) -> float:
    """Jaccard overlap of the top-n code sets of two ranked lists."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    set_a, set_b = set(list(a)[:n]), set(list(b)[:n])
    union = set_a | set_b
    if not union:
        return 1.0
    return len(set_a & set_b) / len(union)

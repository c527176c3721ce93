"""Blinded preference evaluation: sheets, synthetic judges, and the tally.

Generates a side-by-side comparison sheet for two toy systems, simulates
judge responses with a per-judge bias, and unblinds the tally.
"""

import csv
import json
import random
import tempfile
from pathlib import Path

from iconsearch import generate_sheet, tally


def broad_system(query):
    """Returns a wide net of codes (plays the multimodal role)."""
    return [(f"{10 + i}A{len(query)}", f"{query} concept {i}") for i in range(10)]


def narrow_system(query):
    """Returns few, literal matches (plays the TF-IDF role)."""
    return [(f"{20 + i}B", f"{query} literal {i}") for i in range(3)]


queries = [f"query {i:02d}" for i in range(1, 26)]

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    sheet_path, key_path = tmp / "sheet.csv", tmp / "key.jsonl"
    rows = generate_sheet(queries, broad_system, narrow_system, blind_seed=2023,
                          sheet_path=sheet_path, key_path=key_path)
    lefts = sum(row.left_is == "A" for row in rows)
    print(f"sheet: {len(rows)} rows; system A landed on the left {lefts} times")
    with open(sheet_path, encoding="utf-8") as fh:
        header, first = fh.readline(), fh.readline()
    print("first sheet row:", first.strip()[:90], "...")

    # --- simulate ten judges with mild per-judge bias ------------------------
    rng = random.Random(99)
    with open(key_path, encoding="utf-8") as fh:
        key = {json.loads(line)["row_id"]: json.loads(line)["left_is"] for line in fh}

    responses_path = tmp / "responses.csv"
    with open(responses_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row_id", "preferred", "criterion"])
        for judge in range(10):
            bias_a = rng.uniform(0.35, 0.65)  # this judge's lean toward system A
            for row_id in key:
                if rng.random() < 0.16:
                    writer.writerow([row_id, "none", ""])
                    continue
                wants = "A" if rng.random() < bias_a else "B"
                preferred = "left" if key[row_id] == wants else "right"
                criterion = rng.choice(["preciseness", "exhaustiveness", ""])
                writer.writerow([row_id, preferred, criterion])

    result = tally(responses_path, key_path)

print(f"\n{result.n_responses} responses, {result.n_no_preference} with no preference")
print(f"{'':16s}{'system A':>10s}{'system B':>10s}")
print(f"{'#preferences':16s}{result.system_a.preferences:>10d}{result.system_b.preferences:>10d}")
print(f"{'#preciseness':16s}{result.system_a.preciseness:>10d}{result.system_b.preciseness:>10d}")
print(f"{'#exhaustiveness':16s}{result.system_a.exhaustiveness:>10d}{result.system_b.exhaustiveness:>10d}")

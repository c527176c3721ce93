"""Parse notation codes and walk their hierarchy, then browse a scheme file."""

import tempfile
from pathlib import Path

from iconsearch import ancestors, is_descendant, load_scheme, parent_of, parse_notation

# --- anatomy of a few codes -------------------------------------------------
for raw in ["25I141", "11H(PAUL)", "73D(+3)", "11H(PAUL)61"]:
    n = parse_notation(raw)
    print(f"{raw:14s} segments={list(n.segments)}"
          f"  qualifier={n.named_qualifier!r}  key={n.key!r}")

print()
n = parse_notation("25I141")
print("parent of 25I141:", parent_of(n).raw)
print("ancestors:", " > ".join(a.raw for a in reversed(ancestors(n))), "> 25I141")
print("25I141 under 25I?", is_descendant(n, parse_notation("25I")))
print("25I141 under 34B?", is_descendant(n, parse_notation("34B")))

# --- a scheme file: code<TAB>label lines ------------------------------------
SCHEME = """\
# miniature scheme
2\tnature
25\tearth, world as celestial body
25I\tcity-view, and landscape with man-made constructions
25I1\tcity-view in general; 'ideal' city
25I14\tstreet-level views
25I141\tstreet
25I146\tsquare, place, etc.
3\thuman being, man in general
31D14\tadult man
34B11\tdog
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "scheme.tsv"
    path.write_text(SCHEME, encoding="utf-8")
    store = load_scheme(path)

print(f"\nloaded {len(store)} entries, {store.gap_count} gap parents")


def show(code, depth=0):
    print("  " * depth + f"{code}  {store.label_of(code)}")
    for child in store.children_of(code):
        show(child, depth + 1)


show("25I")
print("\nlabel of an unknown code:", store.label_of("99Z99"))

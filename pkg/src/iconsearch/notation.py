"""Iconclass-style notation codes: parsing, hierarchy, and scheme files.

A notation is a compact code such as ``25I141`` or ``11H(PAUL)`` that sits in
a tree under ten single-digit root categories. Structurally a code is a
sequence of atoms (single digits, single uppercase letters, or bracketed
names), optionally followed by a trailing parenthesized name (the "named
qualifier") and a final ``(+...)`` key.

Parsing rules used here:

* the code must start with a digit; each digit and each uppercase ASCII
  letter is one atom,
* ``(NAME)`` is a bracketed atom; the name is any non-empty text without a
  closing parenthesis and must not start with ``+`` (that form is a key),
* a bracketed atom in final position (before the key, if any) is reported as
  the named qualifier rather than a structural segment,
* ``(+KEY)`` may only appear at the very end.

The parent of a code drops its last component: key first, then qualifier,
then the last structural atom. A single root digit has no parent.
"""

from dataclasses import dataclass, field


class MalformedNotation(ValueError):
    """Raised when a string cannot be parsed as a notation code."""


class SchemeFormatError(ValueError):
    """Raised for malformed scheme files; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


UNLABELED = "(unlabeled)"

_DIGITS = frozenset("0123456789")
_UPPER = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZ")


@dataclass(frozen=True)
class Notation:
    """A parsed notation code.

    ``segments`` holds the structural atoms; a bracketed atom is stored with
    its parentheses (e.g. ``"(PAUL)"``) when it occurs mid-code.
    """

    segments: tuple[str, ...]
    named_qualifier: str | None = None
    key: str | None = None
    raw: str = ""

    def serialize(self) -> str:
        text = "".join(self.segments)
        if self.named_qualifier is not None:
            text += f"({self.named_qualifier})"
        if self.key is not None:
            text += f"(+{self.key})"
        return text

    def __str__(self) -> str:
        return self.raw or self.serialize()


def parse_notation(text: str) -> Notation:
    """Parse ``text`` into a Notation whose ``raw`` round-trips exactly."""
    if not text:
        raise MalformedNotation("empty notation")
    if text[0] not in _DIGITS:
        raise MalformedNotation(f"must start with a digit: {text!r}")

    segments: list[str] = []
    key: str | None = None
    i = 0
    while i < len(text):
        if key is not None:
            raise MalformedNotation(f"content after key: {text!r}")
        c = text[i]
        if c in _DIGITS or c in _UPPER:
            segments.append(c)
            i += 1
        elif c == "(":
            end = text.find(")", i + 1)
            if end < 0:
                raise MalformedNotation(f"unbalanced parentheses: {text!r}")
            inner = text[i + 1 : end]
            if inner.startswith("+"):
                if len(inner) == 1:
                    raise MalformedNotation(f"empty key: {text!r}")
                key = inner[1:]
            else:
                if not inner:
                    raise MalformedNotation(f"empty parenthesized name: {text!r}")
                segments.append(f"({inner})")
            i = end + 1
        elif c == ")":
            raise MalformedNotation(f"unbalanced parentheses: {text!r}")
        else:
            raise MalformedNotation(f"illegal character {c!r} in {text!r}")

    qualifier: str | None = None
    if segments and segments[-1].startswith("("):
        qualifier = segments.pop()[1:-1]

    return Notation(tuple(segments), qualifier, key, raw=text)


def parent_of(n: Notation) -> Notation | None:
    """Drop the last component; None when ``n`` is a single root digit."""
    if n.key is not None:
        return parse_notation(Notation(n.segments, n.named_qualifier).serialize())
    if n.named_qualifier is not None:
        return parse_notation(Notation(n.segments).serialize())
    if len(n.segments) <= 1:
        return None
    return parse_notation(Notation(n.segments[:-1]).serialize())


def ancestors(n: Notation) -> list[Notation]:
    """Chain from the immediate parent up to the root digit."""
    chain = []
    cur = parent_of(n)
    while cur is not None:
        chain.append(cur)
        cur = parent_of(cur)
    return chain


def is_descendant(a: Notation, b: Notation) -> bool:
    """True iff ``b`` is a proper ancestor of ``a``."""
    return any(anc.raw == b.raw for anc in ancestors(a))


@dataclass
class SchemeStore:
    """Immutable lookup over a loaded notation scheme.

    ``children`` links every parseable code to its structural parent, even
    when that parent has no entry of its own; such parents are recorded in
    ``gaps``. Codes outside the grammar stay in ``entries`` (label lookup
    works) but take no part in the hierarchy.
    """

    entries: dict[str, str] = field(default_factory=dict)
    children: dict[str, list[str]] = field(default_factory=dict)
    gaps: set[str] = field(default_factory=set)
    unparsed: list[str] = field(default_factory=list)

    def __contains__(self, code: str) -> bool:
        return code in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def label_of(self, code: str) -> str:
        return self.entries.get(code, UNLABELED)

    def children_of(self, code: str) -> list[str]:
        return list(self.children.get(code, []))

    @property
    def gap_count(self) -> int:
        return len(self.gaps)


def load_scheme(path) -> SchemeStore:
    """Load a tab-separated ``code<TAB>label`` scheme file.

    Lines starting with ``#`` and blank lines are ignored. Duplicate codes
    and lines without a tab are format errors.
    """
    store = SchemeStore()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise SchemeFormatError("missing tab separator", lineno)
            code, label = line.split("\t", 1)
            if not code:
                raise SchemeFormatError("empty code", lineno)
            if code in store.entries:
                raise SchemeFormatError(f"duplicate code {code!r}", lineno)
            store.entries[code] = label

    for code in store.entries:
        try:
            parsed = parse_notation(code)
        except MalformedNotation:
            store.unparsed.append(code)
            continue
        parent = parent_of(parsed)
        if parent is None:
            continue
        if parent.raw not in store.entries:
            store.gaps.add(parent.raw)
        store.children.setdefault(parent.raw, []).append(code)

    for kids in store.children.values():
        kids.sort()
    return store

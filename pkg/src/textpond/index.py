"""Inverted index over classic-presentation artifacts: keyword search with
optional thesaurus expansion, and highlight (snippet) extraction.

One index exists per classic label ("<transformation>+classic_presentation").
Query terms are pushed through the same transformation the label's documents
went through — a stopword can never match inside a stopword-removed label,
and queries against a lemmatized label are stemmed before lookup.

Multi-term queries use OR semantics by default; ``match_all=True`` requires
every query term (or one of its synonyms) to match. An empty term set is the
neutral filter: every indexed document.

Each index persists as a line-oriented snapshot at
``<store_root>/index/<label>.idx`` recording the source files' (mtime, size)
stamps; a snapshot is stale — and silently rebuilt — whenever the stamps no
longer match the presentation artifacts on disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from textpond.errors import StorageFailure, UnknownDocument, UnknownLabel, WrongPayloadKind
from textpond.stemming import stem
from textpond.textproc import PresentationArtifact, tokenize

SNAPSHOT_MAGIC = "textpond-index v1"
DEFAULT_WINDOW = 80


@dataclass(frozen=True)
class Posting:
    doc_id: str
    positions: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.positions) != len(self.spans):
            raise ValueError("positions and spans must correspond 1:1")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError("positions must be strictly increasing")


@dataclass
class PostingsIndex:
    label: str
    postings: dict[str, dict[str, Posting]] = field(default_factory=dict)  # term -> doc -> posting
    texts: dict[str, str] = field(default_factory=dict)
    stamps: dict[str, tuple[int, int]] = field(default_factory=dict)  # doc -> (mtime_ns, size)

    def add_text(self, doc_id: str, text: str, stamp: tuple[int, int] = (0, 0)) -> None:
        """(Re-)index one document's classic text; idempotent per document."""
        if doc_id in self.texts:
            self._drop(doc_id)
        by_term: dict[str, tuple[list[int], list[tuple[int, int]]]] = {}
        for token in tokenize(text):
            positions, spans = by_term.setdefault(token.normalized, ([], []))
            positions.append(token.position)
            spans.append(token.char_span)
        for term, (positions, spans) in by_term.items():
            self.postings.setdefault(term, {})[doc_id] = Posting(
                doc_id, tuple(positions), tuple(spans)
            )
        self.texts[doc_id] = text
        self.stamps[doc_id] = stamp

    def _drop(self, doc_id: str) -> None:
        for term in [t for t, docs in self.postings.items() if doc_id in docs]:
            del self.postings[term][doc_id]
            if not self.postings[term]:
                del self.postings[term]
        self.texts.pop(doc_id, None)
        self.stamps.pop(doc_id, None)

    def doc_ids(self) -> set[str]:
        return set(self.texts)

    def docs_with_any(self, keys: set[str]) -> set[str]:
        hits: set[str] = set()
        for key in keys:
            hits.update(self.postings.get(key, {}))
        return hits

    def spans_for(self, doc_id: str, keys: set[str]) -> list[tuple[int, int]]:
        spans: list[tuple[int, int]] = []
        for key in keys:
            posting = self.postings.get(key, {}).get(doc_id)
            if posting:
                spans.extend(posting.spans)
        return sorted(spans)


def index_artifact(index: PostingsIndex, artifact: PresentationArtifact,
                   stamp: tuple[int, int] = (0, 0)) -> PostingsIndex:
    if not isinstance(artifact.payload, str):
        raise WrongPayloadKind("only classic-presentation text can be indexed")
    if not artifact.label.endswith("classic_presentation"):
        raise WrongPayloadKind(f"label {artifact.label!r} is not a classic presentation")
    index.add_text(artifact.doc_id, artifact.payload, stamp)
    return index


def expansion_groups(terms, thesaurus) -> dict[str, set[str]]:
    """term -> {term} plus every synonym group containing it (lowercased)."""
    groups: dict[str, set[str]] = {}
    for raw in terms:
        term = raw.lower()
        expanded = {term}
        for group in thesaurus or ():
            if term in group:
                expanded |= set(group)
        groups[term] = expanded
    return groups


def query_keys(term: str, transformation: str,
               stopwords: frozenset[str] = frozenset(),
               dictionary: frozenset[str] | None = None) -> set[str]:
    """Index keys a query term can match under a label's transformation."""
    term = term.lower()
    if transformation == "original_version":
        return {term}
    if transformation == "stopword_removal":
        return set() if term in stopwords else {term}
    if transformation == "lemmatized_version":
        return {stem(term, "en"), stem(term, "fr")}
    if transformation == "dictionary_filter":
        if dictionary is not None and term not in dictionary:
            return set()
        return {term}
    raise ValueError(f"unknown transformation: {transformation!r}")


def search(
    index: PostingsIndex,
    terms,
    thesaurus=None,
    *,
    stopwords: frozenset[str] = frozenset(),
    dictionary: frozenset[str] | None = None,
    match_all: bool = False,
) -> set[str]:
    """Documents matching the (expanded, label-transformed) query terms."""
    transformation = index.label.split("+", 1)[0]
    groups = expansion_groups(terms, thesaurus)
    if not groups:
        return index.doc_ids()
    per_term_hits = []
    for expanded in groups.values():
        keys: set[str] = set()
        for word in expanded:
            keys |= query_keys(word, transformation, stopwords, dictionary)
        per_term_hits.append(index.docs_with_any(keys))
    if match_all:
        result = set(index.doc_ids())
        for hits in per_term_hits:
            result &= hits
        return result
    out: set[str] = set()
    for hits in per_term_hits:
        out |= hits
    return out


def merge_spans(spans: list[tuple[int, int]], window: int, length: int) -> list[tuple[int, int]]:
    """Window each span by +-window chars, clip to [0, length], merge overlaps."""
    regions = sorted((max(0, a - window), min(length, b + window)) for a, b in spans)
    merged: list[tuple[int, int]] = []
    for a, b in regions:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


def highlights(
    index: PostingsIndex,
    doc_id: str,
    terms,
    window: int = DEFAULT_WINDOW,
    thesaurus=None,
    *,
    stopwords: frozenset[str] = frozenset(),
    dictionary: frozenset[str] | None = None,
) -> list[str]:
    """Snippets of the document's classic text around every query match,
    clipped at document bounds, overlaps merged, ordered by position."""
    if window < 1:
        raise ValueError("window must be positive")
    if doc_id not in index.texts:
        raise UnknownDocument(f"document {doc_id!r} is not indexed under {index.label!r}")
    transformation = index.label.split("+", 1)[0]
    keys: set[str] = set()
    for expanded in expansion_groups(terms, thesaurus).values():
        for word in expanded:
            keys |= query_keys(word, transformation, stopwords, dictionary)
    text = index.texts[doc_id]
    spans = index.spans_for(doc_id, keys)
    return [text[a:b] for a, b in merge_spans(spans, window, len(text))]


def dump_index(index: PostingsIndex) -> bytes:
    lines = [SNAPSHOT_MAGIC, f"label {index.label}"]
    for doc_id in sorted(index.texts):
        mtime_ns, size = index.stamps.get(doc_id, (0, 0))
        lines.append(f"doc {doc_id} {mtime_ns} {size}")
        lines.append(f"text {doc_id} {json.dumps(index.texts[doc_id], ensure_ascii=False)}")
    for term in sorted(index.postings):
        for doc_id in sorted(index.postings[term]):
            posting = index.postings[term][doc_id]
            positions = ";".join(str(p) for p in posting.positions)
            spans = ";".join(f"{a}:{b}" for a, b in posting.spans)
            lines.append(f"term {json.dumps(term, ensure_ascii=False)} {doc_id} {positions} {spans}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_index(data: bytes, label: str) -> PostingsIndex:
    lines = data.decode("utf-8").splitlines()
    if not lines or lines[0] != SNAPSHOT_MAGIC:
        raise StorageFailure(f"unrecognized index snapshot format for {label!r}")
    index = PostingsIndex(label=label)
    for line in lines[1:]:
        kind, _, rest = line.partition(" ")
        if kind == "label":
            index.label = rest
        elif kind == "doc":
            doc_id, mtime_ns, size = rest.rsplit(" ", 2)
            index.stamps[doc_id] = (int(mtime_ns), int(size))
        elif kind == "text":
            doc_id, _, encoded = rest.partition(" ")
            index.texts[doc_id] = json.loads(encoded)
        elif kind == "term":
            encoded_term, doc_id, positions, spans = rest.rsplit(" ", 3)
            term = json.loads(encoded_term)
            index.postings.setdefault(term, {})[doc_id] = Posting(
                doc_id,
                tuple(int(p) for p in positions.split(";") if p),
                tuple(
                    (int(a), int(b))
                    for a, b in (s.split(":") for s in spans.split(";") if s)
                ),
            )
        elif kind:
            raise StorageFailure(f"unrecognized snapshot line kind {kind!r}")
    return index


class IndexStore:
    """Snapshot-backed index manager over a store root's presentation files."""

    def __init__(self, store_root: Path | str):
        self.store_root = Path(store_root)
        self.index_dir = self.store_root / "index"
        self.presentation_dir = self.store_root / "presentation"
        self._cache: dict[str, PostingsIndex] = {}

    def _snapshot_path(self, label: str) -> Path:
        return self.index_dir / f"{label}.idx"

    def _current_stamps(self, label: str) -> dict[str, tuple[int, int]]:
        stamps: dict[str, tuple[int, int]] = {}
        if not self.presentation_dir.is_dir():
            return stamps
        for doc_dir in self.presentation_dir.iterdir():
            artifact = doc_dir / f"{label}.txt"
            if artifact.is_file():
                st = artifact.stat()
                stamps[doc_dir.name] = (st.st_mtime_ns, st.st_size)
        return stamps

    def indexed_labels(self) -> list[str]:
        labels: set[str] = set()
        if self.presentation_dir.is_dir():
            for doc_dir in self.presentation_dir.iterdir():
                for artifact in doc_dir.glob("*classic_presentation.txt"):
                    labels.add(artifact.stem)
        return sorted(labels)

    def build(self, label: str) -> PostingsIndex:
        stamps = self._current_stamps(label)
        if not stamps:
            raise UnknownLabel(f"no classic-presentation artifacts for label {label!r}")
        index = PostingsIndex(label=label)
        for doc_id in sorted(stamps):
            text = (self.presentation_dir / doc_id / f"{label}.txt").read_text("utf-8")
            index.add_text(doc_id, text, stamps[doc_id])
        self.index_dir.mkdir(parents=True, exist_ok=True)
        tmp = self._snapshot_path(label).with_suffix(".idx.tmp")
        tmp.write_bytes(dump_index(index))
        tmp.replace(self._snapshot_path(label))
        self._cache[label] = index
        return index

    def get(self, label: str) -> PostingsIndex:
        """Current index for a label, rebuilding when the snapshot is stale."""
        current = self._current_stamps(label)
        if not current:
            raise UnknownLabel(f"no classic-presentation artifacts for label {label!r}")
        cached = self._cache.get(label)
        if cached is not None and cached.stamps == current:
            return cached
        path = self._snapshot_path(label)
        if path.is_file():
            index = load_index(path.read_bytes(), label)
            if index.stamps == current:
                self._cache[label] = index
                return index
        return self.build(label)

"""Transformation x presentation operation matrix.

A document's text is tokenized once; a transformation rewrites or filters the
token stream without touching the source, and a presentation renders the
transformed stream into one of four payload kinds:

* ``classic_presentation``  -> text (``str``)
* ``bag_of_words``          -> term multiset (``dict[str, int]``)
* ``term_frequency_vector`` -> :class:`TermVector` with integer weights
* ``tfidf_vector``          -> :class:`TermVector` with real weights

Artifact labels concatenate the two operation names: ``"<transformation>+<presentation>"``.
The pair (original_version, classic_presentation) is the lossless identity:
its payload is byte-identical to the source text.

TF-IDF is fixed to ``tf(t, d) * ln(N / df(t))`` with no smoothing; terms
present in every document (df = N) get weight 0 and are pruned.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from textpond.errors import EmptyCorpusStats, MissingResource, WrongPayloadKind
from textpond.stemming import stem

TRANSFORMATIONS = (
    "original_version",
    "stopword_removal",
    "lemmatized_version",
    "dictionary_filter",
)
PRESENTATIONS = (
    "classic_presentation",
    "bag_of_words",
    "term_frequency_vector",
    "tfidf_vector",
)

_NEEDS_RESOURCE = {"stopword_removal", "dictionary_filter"}

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class Token:
    """One word occurrence: original surface, lowercased form, token index,
    and the character span (start, end) into the source text."""

    surface: str
    normalized: str
    position: int
    char_span: tuple[int, int]


@dataclass(frozen=True)
class TransformationOp:
    kind: str
    resource_ref: str | None = None

    def __post_init__(self):
        if self.kind not in TRANSFORMATIONS:
            raise ValueError(f"unknown transformation kind: {self.kind!r}")
        if self.kind in _NEEDS_RESOURCE and not self.resource_ref:
            raise MissingResource(f"{self.kind} requires a resource_ref")
        if self.kind not in _NEEDS_RESOURCE and self.resource_ref:
            raise ValueError(f"{self.kind} does not take a resource_ref")


@dataclass(frozen=True)
class PresentationOp:
    kind: str

    def __post_init__(self):
        if self.kind not in PRESENTATIONS:
            raise ValueError(f"unknown presentation kind: {self.kind!r}")


def artifact_label(transformation: str, presentation: str) -> str:
    if transformation not in TRANSFORMATIONS:
        raise ValueError(f"unknown transformation kind: {transformation!r}")
    if presentation not in PRESENTATIONS:
        raise ValueError(f"unknown presentation kind: {presentation!r}")
    return f"{transformation}+{presentation}"


class TermVector:
    """Sparse term -> weight map with a cached Euclidean norm.

    Zero-weight entries are pruned at construction; negative weights are
    rejected (term frequencies and TF-IDF weights are non-negative).
    """

    __slots__ = ("entries", "norm")

    def __init__(self, entries: Mapping[str, float]):
        clean: dict[str, float] = {}
        for term, weight in entries.items():
            if weight < 0:
                raise ValueError(f"negative weight for term {term!r}: {weight}")
            if weight != 0:
                clean[term] = weight
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "norm", math.sqrt(math.fsum(w * w for w in clean.values())))

    def __setattr__(self, name, value):
        raise AttributeError("TermVector is immutable")

    def get(self, term: str, default: float = 0.0) -> float:
        return self.entries.get(term, default)

    def items(self):
        return self.entries.items()

    def __contains__(self, term: str) -> bool:
        return term in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, TermVector) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __repr__(self) -> str:
        return f"TermVector({self.entries!r})"


@dataclass(frozen=True)
class DocumentFrequency:
    """Corpus-level document-frequency table used by TF-IDF."""

    n_documents: int
    df: Mapping[str, int] = field(default_factory=dict)

    def of(self, term: str) -> int:
        return self.df.get(term, 0)


@dataclass(frozen=True)
class PresentationArtifact:
    doc_id: str
    label: str
    payload: object
    storage_uri: str | None = None


def tokenize(text: str) -> list[Token]:
    """Split text into maximal runs of Unicode letters/digits.

    Punctuation, whitespace and underscores separate tokens; ``surface``
    keeps the original casing, ``normalized`` is lowercased.
    """
    return [
        Token(m.group(), m.group().lower(), i, (m.start(), m.end()))
        for i, m in enumerate(_WORD_RE.finditer(text))
    ]


def _resource_words(op: TransformationOp, global_manifest) -> frozenset[str]:
    if global_manifest is None:
        raise MissingResource(f"{op.kind} needs a global manifest to resolve {op.resource_ref!r}")
    from textpond.manifests import resolve_resource

    payload = resolve_resource(global_manifest, op.resource_ref)
    if not isinstance(payload, (set, frozenset)):
        raise MissingResource(
            f"resource {op.resource_ref!r} is not a word list; {op.kind} needs one"
        )
    return frozenset(payload)


def transform(
    tokens: Iterable[Token],
    op: TransformationOp,
    global_manifest=None,
    *,
    language: str = "und",
) -> list[Token]:
    """Apply one transformation to a token stream.

    Surviving tokens keep their original positions and char spans;
    lemmatized_version rewrites only the normalized form, routed by
    ``language`` (unknown codes use the English rules).
    """
    tokens = list(tokens)
    if op.kind == "original_version":
        return tokens
    if op.kind == "stopword_removal":
        words = _resource_words(op, global_manifest)
        return [t for t in tokens if t.normalized not in words]
    if op.kind == "dictionary_filter":
        words = _resource_words(op, global_manifest)
        return [t for t in tokens if t.normalized in words]
    # lemmatized_version
    lang = language if language in ("en", "fr") else "en"
    return [
        Token(t.surface, stem(t.normalized, lang), t.position, t.char_span)
        for t in tokens
    ]


def present(
    tokens: Iterable[Token],
    op: PresentationOp,
    corpus_stats: DocumentFrequency | None = None,
    *,
    source_text: str | None = None,
):
    """Render a transformed token stream into the presentation payload.

    ``source_text`` is passed only for the neutral transformation, making
    classic_presentation byte-identical to the ingested text; otherwise the
    classic payload is the normalized tokens joined by single spaces.
    """
    tokens = list(tokens)
    if op.kind == "classic_presentation":
        if source_text is not None:
            return source_text
        return " ".join(t.normalized for t in tokens)
    counts = Counter(t.normalized for t in tokens)
    if op.kind == "bag_of_words":
        return dict(counts)
    if op.kind == "term_frequency_vector":
        return TermVector(counts)
    # tfidf_vector
    if corpus_stats is None or corpus_stats.n_documents < 1:
        raise EmptyCorpusStats("tfidf_vector requires document-frequency stats over >= 1 document")
    weights: dict[str, float] = {}
    for term, tf in counts.items():
        df = corpus_stats.of(term)
        if df < 1:
            raise ValueError(f"term {term!r} missing from the document-frequency table")
        weights[term] = tf * math.log(corpus_stats.n_documents / df)
    return TermVector(weights)


def previsualize(artifact: PresentationArtifact, k: int) -> list[tuple[str, float]]:
    """Top-k (term, weight) pairs of a bag or vector payload, weight descending,
    ties broken lexicographically."""
    if k < 1:
        raise ValueError("k must be positive")
    payload = artifact.payload
    if isinstance(payload, TermVector):
        entries = payload.entries
    elif isinstance(payload, Mapping):
        entries = payload
    else:
        raise WrongPayloadKind(
            f"previsualization needs a bag or term vector, got {type(payload).__name__}"
        )
    ranked = sorted(entries.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def build_document_frequency(vectors: Iterable[TermVector | Mapping[str, float]]) -> DocumentFrequency:
    """df(t) = number of vectors where t has positive weight; N = corpus size."""
    df: Counter[str] = Counter()
    n = 0
    for vec in vectors:
        n += 1
        entries = vec.entries if isinstance(vec, TermVector) else vec
        for term, weight in entries.items():
            if weight > 0:
                df[term] += 1
    return DocumentFrequency(n_documents=n, df=dict(df))


def payload_filename(label: str) -> str:
    """Artifact file name under ``presentation/<doc_id>/``: classic text is
    ``.txt``, every vector/bag payload is two-column CSV."""
    return f"{label}.txt" if label.endswith("classic_presentation") else f"{label}.csv"


def dump_payload(payload) -> bytes:
    """Serialize a payload deterministically (classic text verbatim; otherwise
    ``term,weight`` CSV sorted by term, integer weights unmarked)."""
    if isinstance(payload, str):
        return payload.encode("utf-8")
    if isinstance(payload, TermVector):
        entries = payload.entries
    elif isinstance(payload, Mapping):
        entries = payload
    else:
        raise WrongPayloadKind(f"cannot serialize payload of type {type(payload).__name__}")
    lines = ["term,weight"]
    for term in sorted(entries):
        weight = entries[term]
        rendered = str(weight) if isinstance(weight, int) else repr(float(weight))
        lines.append(f"{term},{rendered}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_payload(data: bytes, label: str):
    """Inverse of :func:`dump_payload` for the given artifact label."""
    if label.endswith("classic_presentation"):
        return data.decode("utf-8")
    text = data.decode("utf-8")
    entries: dict[str, float] = {}
    for line in text.splitlines()[1:]:
        if not line:
            continue
        term, _, raw = line.rpartition(",")
        entries[term] = int(raw) if re.fullmatch(r"-?\d+", raw) else float(raw)
    if label.endswith("bag_of_words"):
        return {t: int(w) for t, w in entries.items()}
    return TermVector(entries)

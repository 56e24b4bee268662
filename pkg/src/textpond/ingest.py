"""Document intake: identifiers, file properties, MIME/language detection,
and scanning of a pond source tree laid out as ``<company>/<category>/<file>``.

Binary formats (pdf/docx) are never parsed here; their plain text must be
provided by a ``<file>.txt`` sidecar next to the original. Original bytes are
always retained untouched.
"""

from __future__ import annotations

import io
import threading
import time
import zipfile
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

from textpond.errors import MalformedLayout, MissingSidecar, UnreadablePath
from textpond.textproc import tokenize

DOCX_MIME = "application/vnd.openxmlformats-officedocument.wordprocessingml.document"
PDF_MIME = "application/pdf"
BINARY_MIMES = frozenset({PDF_MIME, DOCX_MIME, "application/octet-stream"})
DEFAULT_LANGUAGES = ("fr", "en")

COVERAGE_FLOOR = 0.05
MIN_TOKENS = 5


@dataclass(frozen=True)
class RawDocument:
    source_path: Path
    content: bytes
    sidecar_text: str | None = None

    def __post_init__(self):
        if not self.content:
            raise ValueError("raw document bytes must be non-empty")


@dataclass(frozen=True)
class DocumentProperties:
    title: str
    creator: str
    created_at: float
    modified_at: float
    size_bytes: int


@dataclass(frozen=True)
class DetectedFacets:
    mime_type: str
    language: str
    company: str
    business_category: str


class IdGenerator:
    """Timestamp + counter identifiers: ``D-<epoch-nanoseconds>-<counter>``.

    The counter disambiguates calls within one nanosecond; it stays a single
    digit (when ten ids land on the same tick, the synthetic clock is bumped
    by 1 ns) so lexicographic order always equals assignment order.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._last_t = 0
        self._counter = 0

    def assign_id(self, now_ns: int | None = None) -> str:
        with self._lock:
            t = time.time_ns() if now_ns is None else now_ns
            if t < self._last_t:
                t = self._last_t
            if t == self._last_t:
                self._counter += 1
                if self._counter > 9:
                    t += 1
                    self._counter = 0
            else:
                self._counter = 0
            self._last_t = t
            return f"D-{t}-{self._counter}"


def extract_properties(doc: RawDocument) -> DocumentProperties:
    path = doc.source_path
    if not path or not Path(path).is_file():
        raise UnreadablePath(f"source path is not a readable file: {path!r}")
    path = Path(path)
    st = path.stat()
    birth = getattr(st, "st_birthtime", None)
    created = min(birth, st.st_mtime) if birth is not None else st.st_mtime
    try:
        creator = path.owner()
    except (KeyError, OSError):  # unmapped uid
        creator = "unknown"
    return DocumentProperties(
        title=path.stem,
        creator=creator,
        created_at=created,
        modified_at=st.st_mtime,
        size_bytes=len(doc.content),
    )


def detect_mime(doc: RawDocument) -> str:
    data = doc.content
    if data.startswith(b"%PDF"):
        return PDF_MIME
    if data.startswith(b"PK\x03\x04"):
        try:
            with zipfile.ZipFile(io.BytesIO(data)) as zf:
                if any(name.startswith("word/") for name in zf.namelist()):
                    return DOCX_MIME
        except zipfile.BadZipFile:
            pass
        return "application/octet-stream"
    if b"\x00" in data:
        return "application/octet-stream"
    try:
        data.decode("utf-8")
    except UnicodeDecodeError:
        return "application/octet-stream"
    return "text/plain"


def detect_language(
    text: str,
    profiles: dict[str, frozenset[str]],
    priority: tuple[str, ...] | None = None,
) -> str:
    """Language whose stopword list covers the largest token fraction.

    Returns "und" below the coverage floor or for texts under five tokens;
    exact ties go to the earlier language in the priority order.
    """
    tokens = [t.normalized for t in tokenize(text)]
    if len(tokens) < MIN_TOKENS or not profiles:
        return "und"
    order = priority if priority is not None else tuple(profiles)
    best_lang, best_cov = "und", -1.0
    for lang in order:
        words = profiles.get(lang)
        if words is None:
            continue
        cov = sum(1 for t in tokens if t in words) / len(tokens)
        if cov > best_cov:
            best_lang, best_cov = lang, cov
    if best_cov < COVERAGE_FLOOR:
        return "und"
    return best_lang


def load_default_profiles() -> dict[str, frozenset[str]]:
    """Stopword profiles shipped with the package (fr, en)."""
    base = importlib_resources.files("textpond") / "resources"
    profiles = {}
    for lang in DEFAULT_LANGUAGES:
        text = (base / f"stopwords_{lang}.txt").read_text("utf-8")
        profiles[lang] = frozenset(w.strip().lower() for w in text.splitlines() if w.strip())
    return profiles


def text_of(doc: RawDocument, mime: str | None = None) -> str:
    """The processable plain text of a document: the bytes themselves for
    text/plain, the sidecar for binary formats."""
    mime = mime or detect_mime(doc)
    if mime == "text/plain":
        return doc.content.decode("utf-8")
    if doc.sidecar_text is None:
        raise MissingSidecar(
            f"{doc.source_path}: binary document ({mime}) has no .txt sidecar"
        )
    return doc.sidecar_text


def derive_facets(
    doc: RawDocument,
    pond_root: Path,
    profiles: dict[str, frozenset[str]] | None = None,
    priority: tuple[str, ...] | None = None,
) -> DetectedFacets:
    """Company/category from the directory layout, MIME and language from
    the detectors."""
    try:
        rel = Path(doc.source_path).resolve().relative_to(Path(pond_root).resolve())
    except ValueError as exc:
        raise MalformedLayout(f"{doc.source_path} is not under {pond_root}") from exc
    if len(rel.parts) < 3:
        raise MalformedLayout(
            f"{doc.source_path}: expected <company>/<category>/<file> under the pond root"
        )
    mime = detect_mime(doc)
    profiles = profiles if profiles is not None else load_default_profiles()
    language = detect_language(text_of(doc, mime), profiles, priority)
    return DetectedFacets(
        mime_type=mime,
        language=language,
        company=rel.parts[0],
        business_category=rel.parts[1],
    )


def _is_sidecar(path: Path) -> bool:
    return path.suffix == ".txt" and path.with_suffix("").is_file()


def scan_pond(pond_root: Path) -> list[RawDocument]:
    """Collect raw documents from the source tree, pairing binaries with
    their sidecars and never listing a sidecar as a document itself."""
    pond_root = Path(pond_root)
    if not pond_root.is_dir():
        raise UnreadablePath(f"pond root is not a directory: {pond_root}")
    docs = []
    for path in sorted(pond_root.rglob("*")):
        if not path.is_file() or path.name.startswith(".") or _is_sidecar(path):
            continue
        if path.stat().st_size == 0:
            continue
        sidecar = path.parent / (path.name + ".txt")
        sidecar_text = sidecar.read_text("utf-8") if sidecar.is_file() else None
        docs.append(RawDocument(path, path.read_bytes(), sidecar_text))
    return docs

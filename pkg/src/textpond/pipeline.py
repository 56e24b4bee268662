"""End-to-end orchestration: a Pond owns one store root and drives
ingestion, artifact generation, manifest writing, and link-graph builds.

Store layout::

    <store_root>/
      raw/<doc_id>/<original filename>     untouched ingested bytes
      manifests/<doc_id>.xml               one manifest per document
      global-manifest.xml                  pond-wide resource registry
      resources/<file>                     registered resource payloads
      presentation/<doc_id>/<label>.{txt,csv}
      index/<label>.idx                    inverted-index snapshots
      links/<link_name>.csv                logical link graphs

The default artifact matrix is every transformation crossed with
{classic_presentation, term_frequency_vector, tfidf_vector}; bag_of_words
payloads and any other combination remain available through the library API.
dictionary_filter artifacts are produced only when a dictionary resource is
registered. TF-IDF weights depend on corpus-wide document frequencies, so
every ingest batch recomputes the tfidf payloads of the whole pond.
"""

from __future__ import annotations

import math
import shutil
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources as importlib_resources
from pathlib import Path

from textpond.errors import MissingSidecar, NotRegistered, UninitializedStore, UnknownLabel
from textpond.index import IndexStore
from textpond.ingest import (
    DEFAULT_LANGUAGES,
    IdGenerator,
    RawDocument,
    derive_facets,
    extract_properties,
    scan_pond,
    text_of,
)
from textpond.linkgraph import (
    GraphBuildReport,
    LogicalLinkGraph,
    SimilarityMeasure,
    build_graph,
    store_graph,
)
from textpond.manifests import (
    DocumentManifest,
    GlobalManifest,
    ManifestStore,
    MetadataRef,
    PhysicalLink,
    ResourceEntry,
    resolve_resource,
)
from textpond.textproc import (
    PresentationOp,
    TermVector,
    TransformationOp,
    artifact_label,
    build_document_frequency,
    dump_payload,
    load_payload,
    payload_filename,
    present,
    tokenize,
    transform,
)

DEFAULT_PRESENTATIONS = ("classic_presentation", "term_frequency_vector", "tfidf_vector")
TRANSFORMATION_ORDER = ("original_version", "stopword_removal", "lemmatized_version", "dictionary_filter")


@dataclass
class IngestReport:
    ingested: list[str] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)


def _iso_utc(ts: float) -> str:
    return datetime.fromtimestamp(int(ts), tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class Pond:
    """Facade over one store root and its sub-stores."""

    def __init__(self, store_root: Path | str, languages: tuple[str, ...] = DEFAULT_LANGUAGES):
        self.store_root = Path(store_root)
        self.languages = tuple(languages)
        self.manifests = ManifestStore(self.store_root)
        self.indexes = IndexStore(self.store_root)
        self.id_generator = IdGenerator()

    # -- lifecycle -----------------------------------------------------------

    @classmethod
    def initialize(cls, store_root: Path | str, languages: tuple[str, ...] = DEFAULT_LANGUAGES) -> "Pond":
        pond = cls(store_root, languages)
        resources_dir = pond.store_root / "resources"
        resources_dir.mkdir(parents=True, exist_ok=True)
        (pond.store_root / "raw").mkdir(exist_ok=True)
        (pond.store_root / "presentation").mkdir(exist_ok=True)
        entries = []
        shipped = importlib_resources.files("textpond") / "resources"
        for lang in pond.languages:
            filename = f"stopwords_{lang}.txt"
            source = shipped / filename
            if not source.is_file():
                continue
            (resources_dir / filename).write_text(source.read_text("utf-8"), "utf-8")
            entries.append(ResourceEntry(f"stopwords-{lang}", f"resources/{filename}", "stopwords"))
        pond.manifests.write_global_manifest(GlobalManifest(entries=tuple(entries)))
        return pond

    @classmethod
    def open(cls, store_root: Path | str, languages: tuple[str, ...] = DEFAULT_LANGUAGES) -> "Pond":
        store_root = Path(store_root)
        if not (store_root / "global-manifest.xml").is_file():
            raise UninitializedStore(f"{store_root} has no global manifest; initialize the store first")
        return cls(store_root, languages)

    @classmethod
    def ensure(cls, store_root: Path | str, languages: tuple[str, ...] = DEFAULT_LANGUAGES) -> "Pond":
        store_root = Path(store_root)
        if (store_root / "global-manifest.xml").is_file():
            return cls.open(store_root, languages)
        return cls.initialize(store_root, languages)

    # -- resources -----------------------------------------------------------

    def global_manifest(self) -> GlobalManifest:
        return self.manifests.read_global_manifest()

    def register_resource(self, name: str, rtype: str, content: str) -> GlobalManifest:
        """Store a resource payload under resources/ and (re-)register it."""
        filename = f"{name}.txt"
        (self.store_root / "resources").mkdir(exist_ok=True)
        (self.store_root / "resources" / filename).write_text(content, "utf-8")
        current = self.global_manifest()
        kept = tuple(e for e in current.entries if e.name != name)
        updated = GlobalManifest(
            entries=kept + (ResourceEntry(name, f"resources/{filename}", rtype),)
        )
        self.manifests.write_global_manifest(updated)
        return self.global_manifest()

    def _resources_of_type(self, rtype: str) -> list[str]:
        return sorted(e.name for e in self.global_manifest().entries if e.type == rtype)

    def stopword_union(self) -> frozenset[str]:
        g = self.global_manifest()
        union: set[str] = set()
        for name in self._resources_of_type("stopwords"):
            union |= resolve_resource(g, name)
        return frozenset(union)

    def dictionary_union(self) -> frozenset[str] | None:
        names = self._resources_of_type("dictionary")
        if not names:
            return None
        g = self.global_manifest()
        union: set[str] = set()
        for name in names:
            union |= resolve_resource(g, name)
        return frozenset(union)

    def thesaurus(self, name: str | None):
        """Resolve a thesaurus by registered name, accepting the bare
        language/topic suffix as shorthand for ``thesaurus-<name>``."""
        if name is None:
            return None
        g = self.global_manifest()
        try:
            return resolve_resource(g, name)
        except NotRegistered:
            return resolve_resource(g, f"thesaurus-{name}")

    def language_profiles(self) -> dict[str, frozenset[str]]:
        g = self.global_manifest()
        profiles: dict[str, frozenset[str]] = {}
        for lang in self.languages:
            try:
                profiles[lang] = frozenset(resolve_resource(g, f"stopwords-{lang}"))
            except Exception:
                continue
        return profiles

    # -- ingestion -----------------------------------------------------------

    def _stopword_op_for(self, language: str) -> str | None:
        names = self._resources_of_type("stopwords")
        preferred = f"stopwords-{language}"
        if preferred in names:
            return preferred
        return names[0] if names else None

    def _write_payload(self, doc_id: str, label: str, payload) -> str:
        doc_dir = self.store_root / "presentation" / doc_id
        doc_dir.mkdir(parents=True, exist_ok=True)
        filename = payload_filename(label)
        path = doc_dir / filename
        tmp = path.with_name(filename + ".tmp")
        tmp.write_bytes(dump_payload(payload))
        tmp.replace(path)
        return f"presentation/{doc_id}/{filename}"

    def ingest_document(self, doc: RawDocument, pond_root: Path) -> str:
        """Ingest one document: retain raw bytes, build the classic and TF
        artifact layers, and write the manifest. TF-IDF payloads are filled
        by :meth:`refresh_tfidf` once corpus stats exist."""
        facets = derive_facets(doc, pond_root, self.language_profiles(), self.languages)
        text = text_of(doc, facets.mime_type)
        props = extract_properties(doc)
        doc_id = self.id_generator.assign_id()

        raw_dir = self.store_root / "raw" / doc_id
        raw_dir.mkdir(parents=True, exist_ok=True)
        shutil.copy2(doc.source_path, raw_dir / Path(doc.source_path).name)

        global_manifest = self.global_manifest()
        tokens = tokenize(text)
        refs: list[MetadataRef] = []
        for op in self._doc_ops(facets.language):
            transformed = transform(tokens, op, global_manifest, language=facets.language)
            for presentation in ("classic_presentation", "term_frequency_vector"):
                label = artifact_label(op.kind, presentation)
                source = text if (op.kind == "original_version" and presentation == "classic_presentation") else None
                payload = present(transformed, PresentationOp(presentation), source_text=source)
                uri = self._write_payload(doc_id, label, payload)
                mdtype = "TEXT" if presentation == "classic_presentation" else "CSV"
                refs.append(MetadataRef(label, uri, mdtype))
            tfidf_label = artifact_label(op.kind, "tfidf_vector")
            refs.append(
                MetadataRef(tfidf_label, f"presentation/{doc_id}/{payload_filename(tfidf_label)}", "CSV")
            )

        manifest = DocumentManifest(
            doc_id=doc_id,
            atomic={
                "identifier": doc_id,
                "title": props.title,
                "creator": props.creator,
                "date": _iso_utc(props.created_at),
                "format": facets.mime_type,
                "language": facets.language,
                "extent": str(props.size_bytes),
            },
            refs=tuple(refs),
            links=(
                PhysicalLink("company", facets.company),
                PhysicalLink("category", facets.business_category),
                PhysicalLink("mime", facets.mime_type),
                PhysicalLink("language", facets.language),
            ),
        )
        self.manifests.write_manifest(manifest)
        return doc_id

    def _doc_ops(self, language: str) -> list[TransformationOp]:
        """Per-document transformation ops (stopword list routed by language)."""
        ops = [TransformationOp("original_version")]
        stopword_name = self._stopword_op_for(language)
        if stopword_name:
            ops.append(TransformationOp("stopword_removal", stopword_name))
        ops.append(TransformationOp("lemmatized_version"))
        dictionary_names = self._resources_of_type("dictionary")
        if dictionary_names:
            ops.append(TransformationOp("dictionary_filter", dictionary_names[0]))
        return ops

    def ingest_tree(self, pond_root: Path | str) -> IngestReport:
        """Ingest every document under ``<pond_root>/<company>/<category>/``,
        then refresh corpus-dependent artifacts and index snapshots."""
        pond_root = Path(pond_root)
        report = IngestReport()
        for doc in scan_pond(pond_root):
            try:
                report.ingested.append(self.ingest_document(doc, pond_root))
            except (MissingSidecar, UnicodeDecodeError) as exc:
                report.skipped.append((str(doc.source_path), str(exc)))
        self.refresh_tfidf()
        for label in self.indexes.indexed_labels():
            self.indexes.build(label)
        return report

    def refresh_tfidf(self) -> None:
        """Recompute every tfidf payload from pond-wide document frequencies."""
        doc_ids = self.manifests.list_ids()
        for kind in TRANSFORMATION_ORDER:
            tf_label = artifact_label(kind, "term_frequency_vector")
            vectors: dict[str, TermVector] = {}
            for doc_id in doc_ids:
                path = self.store_root / "presentation" / doc_id / payload_filename(tf_label)
                if path.is_file():
                    vectors[doc_id] = load_payload(path.read_bytes(), tf_label)
            if not vectors:
                continue
            stats = build_document_frequency(vectors.values())
            tfidf_label = artifact_label(kind, "tfidf_vector")
            for doc_id, tf_vec in vectors.items():
                weights = {
                    term: tf * math.log(stats.n_documents / stats.of(term))
                    for term, tf in tf_vec.items()
                }
                self._write_payload(doc_id, tfidf_label, TermVector(weights))

    # -- retrieval -----------------------------------------------------------

    def document_ids(self) -> list[str]:
        return self.manifests.list_ids()

    def corpus_vectors(self, label: str) -> dict[str, TermVector]:
        """All documents' persisted vectors for one vector label."""
        filename = payload_filename(label)
        if filename.endswith(".txt"):
            raise UnknownLabel(f"{label!r} is not a vector label")
        out: dict[str, TermVector] = {}
        for doc_id in self.manifests.list_ids():
            path = self.store_root / "presentation" / doc_id / filename
            if path.is_file():
                payload = load_payload(path.read_bytes(), label)
                out[doc_id] = payload if isinstance(payload, TermVector) else TermVector(payload)
        if not out:
            raise UnknownLabel(f"no persisted vectors for label {label!r}")
        return out

    def build_links(self, measure: SimilarityMeasure) -> tuple[LogicalLinkGraph, GraphBuildReport]:
        corpus = self.corpus_vectors(measure.presentation_label)
        report = GraphBuildReport()
        graph = build_graph(corpus, measure, report)
        store_graph(graph, self.store_root)
        return graph, report

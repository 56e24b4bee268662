"""Shared fixtures: a deterministic 101-document corpus laid out as
<company>/<category>/<file>, plus a fully ingested pond over it.

The corpus covers 12 companies, 3 business categories, 2 MIME types
(plain text and PDF-with-sidecar), and 2 languages. Texts are generated
from fixed word pools with a seeded RNG so every run produces identical
bytes. Each document carries one globally unique reference token
(``ref042`` style) so that no TF-IDF vector can ever prune to zero.

Tests must treat the session-scoped ``pond`` as read-only; anything that
mutates a store builds its own pond in a tmp_path.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import pytest

from textpond.linkgraph import SimilarityMeasure
from textpond.pipeline import Pond

COSINE_TFIDF_LINK = "original_version+tfidf_vector+cosine"

SEED = 20240601

COMPANIES = (
    "acme", "bluewave", "cortex", "deltaplane", "ensofin", "fjordline",
    "gigamesh", "helios", "ionmills", "jadevale", "kronos", "lumenware",
)
CATEGORIES = ("finance", "legal", "marketing")

_EN_FUNCTION = (
    "the", "of", "and", "to", "in", "is", "for", "with", "on", "as",
    "by", "at", "from", "this", "that", "are", "was", "be", "it", "we",
)
_EN_CONTENT = (
    "customer", "client", "revenue", "report", "quarterly", "growth",
    "market", "strategy", "contract", "agreement", "audit", "balance",
    "profit", "campaign", "brand", "product", "service", "sales",
    "forecast", "budget", "investment", "risk", "compliance", "supplier",
    "shipment", "invoice",
)
_FR_FUNCTION = (
    "le", "la", "les", "de", "des", "du", "et", "un", "une", "est",
    "pour", "avec", "sur", "par", "au", "ce", "cette", "dans", "qui", "nous",
)
_FR_CONTENT = (
    "client", "consommateur", "acheteur", "rapport", "annuel", "croissance",
    "bilan", "contrat", "accord", "audit", "campagne", "marque",
    "produit", "service", "ventes", "budget", "investissement", "risque",
    "fournisseur", "livraison", "facture", "clientèle", "trimestre",
)

PDF_STUB = (
    b"%PDF-1.4\n%\xe2\xe3\xcf\xd3\n"
    b"1 0 obj\n<< /Type /Catalog >>\nendobj\n"
    b"trailer\n<< /Root 1 0 R >>\n%%EOF\n"
)

THESAURUS_FR = "client,consommateur,acheteur\nrapport,report\n"
DICTIONARY_MARKETING = "\n".join(
    (
        "acheteur", "brand", "campagne", "campaign", "client", "clientèle",
        "consommateur", "customer", "market", "marque", "produit", "product",
        "sales", "service", "ventes",
    )
) + "\n"


def make_tree(root: Path, files: dict[str, str | bytes]) -> Path:
    """Lay out files under <root>/<relative path>, creating directories."""
    for rel, content in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content, "utf-8")
    return root


@dataclass(frozen=True)
class FixtureDoc:
    rel_path: str
    stem: str
    text: str
    language: str
    mime: str
    company: str
    category: str
    year: int


@dataclass(frozen=True)
class FixtureCorpus:
    root: Path
    docs: tuple[FixtureDoc, ...]

    def by_stem(self) -> dict[str, FixtureDoc]:
        return {d.stem: d for d in self.docs}


def _sentence(rng: random.Random, function_pool, content_pool) -> str:
    words = []
    for i in range(rng.randint(8, 14)):
        pool = function_pool if i % 2 == 0 else content_pool
        words.append(rng.choice(pool))
    words[0] = words[0].capitalize()
    return " ".join(words)


def _document_text(rng: random.Random, language: str, idx: int) -> str:
    function_pool = _EN_FUNCTION if language == "en" else _FR_FUNCTION
    content_pool = _EN_CONTENT if language == "en" else _FR_CONTENT
    sentences = [_sentence(rng, function_pool, content_pool) for _ in range(rng.randint(4, 8))]
    sentences.append(f"Reference ref{idx:03d}")
    return ". ".join(sentences) + ".\n"


def build_fixture_corpus(root: Path, n_docs: int = 101, seed: int = SEED) -> FixtureCorpus:
    rng = random.Random(seed)
    docs = []
    for idx in range(n_docs):
        company = COMPANIES[idx % len(COMPANIES)]
        category = CATEGORIES[idx % len(CATEGORIES)]
        language = "en" if idx % 2 == 0 else "fr"
        is_pdf = idx % 7 == 3
        year = 2015 + idx % 9
        stem = f"doc_{idx:03d}"
        filename = f"{stem}.pdf" if is_pdf else f"{stem}.txt"
        text = _document_text(rng, language, idx)

        doc_dir = root / company / category
        doc_dir.mkdir(parents=True, exist_ok=True)
        path = doc_dir / filename
        if is_pdf:
            path.write_bytes(PDF_STUB)
            (doc_dir / f"{filename}.txt").write_text(text, "utf-8")
        else:
            path.write_text(text, "utf-8")
        stamp = datetime(year, 1 + idx % 12, 1 + idx % 28, 12, 0, 0, tzinfo=timezone.utc).timestamp()
        os.utime(path, (stamp, stamp))

        docs.append(
            FixtureDoc(
                rel_path=f"{company}/{category}/{filename}",
                stem=stem,
                text=text,
                language=language,
                mime="application/pdf" if is_pdf else "text/plain",
                company=company,
                category=category,
                year=year,
            )
        )
    return FixtureCorpus(root=root, docs=tuple(docs))


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory) -> FixtureCorpus:
    root = tmp_path_factory.mktemp("pond-source")
    return build_fixture_corpus(root)


@pytest.fixture(scope="session")
def pond(tmp_path_factory, fixture_corpus) -> Pond:
    """A fully ingested pond over the fixture corpus. Read-only for tests."""
    store_root = tmp_path_factory.mktemp("pond-store")
    p = Pond.initialize(store_root)
    p.register_resource("thesaurus-fr", "thesaurus", THESAURUS_FR)
    p.register_resource("dict-marketing", "dictionary", DICTIONARY_MARKETING)
    report = p.ingest_tree(fixture_corpus.root)
    assert len(report.ingested) == len(fixture_corpus.docs)
    assert not report.skipped
    p.build_links(SimilarityMeasure("cosine", "original_version+tfidf_vector"))
    return p


@pytest.fixture(scope="session")
def id_by_stem(pond) -> dict[str, str]:
    """Map each fixture document's filename stem to its assigned id."""
    mapping = {}
    for doc_id in pond.document_ids():
        manifest = pond.manifests.read_manifest(doc_id)
        mapping[manifest.atomic["title"]] = doc_id
    return mapping

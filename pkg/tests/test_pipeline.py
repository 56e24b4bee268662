"""End-to-end pond behavior: store bootstrap, ingestion over the fixture
tree, manifest content, raw retention, artifact files, corpus-dependent
weight refresh across batches, and link-graph persistence."""

from __future__ import annotations

import math

import pytest

from conftest import PDF_STUB, make_tree as _mini_tree
from textpond.errors import UninitializedStore, UnknownLabel
from textpond.index import search
from textpond.linkgraph import SimilarityMeasure, list_graphs, load_graph
from textpond.pipeline import Pond
from textpond.textproc import load_payload


# -- lifecycle ----------------------------------------------------------------


def test_initialize_registers_shipped_stopword_lists(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    names = {e.name for e in pond.global_manifest().entries}
    assert {"stopwords-fr", "stopwords-en"} <= names
    assert "le" in pond.stopword_union()
    assert "the" in pond.stopword_union()


def test_open_requires_initialized_store(tmp_path):
    with pytest.raises(UninitializedStore):
        Pond.open(tmp_path / "nowhere")


def test_ensure_initializes_then_reopens(tmp_path):
    first = Pond.ensure(tmp_path / "store")
    again = Pond.ensure(tmp_path / "store")
    assert first.global_manifest() == again.global_manifest()


def test_register_resource_replaces_existing_entry(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    pond.register_resource("dict-a", "dictionary", "alpha\n")
    updated = pond.register_resource("dict-a", "dictionary", "beta\n")
    entries = [e for e in updated.entries if e.name == "dict-a"]
    assert len(entries) == 1
    assert pond.dictionary_union() == frozenset({"beta"})


# -- fixture-corpus ingestion --------------------------------------------------


def test_ingest_produces_expected_cluster_counts(pond, fixture_corpus):
    assert len(pond.document_ids()) == len(fixture_corpus.docs) == 101
    assert len(pond.manifests.link_values("company")) == 12
    assert len(pond.manifests.link_values("category")) == 3
    assert len(pond.manifests.link_values("mime")) == 2
    assert len(pond.manifests.link_values("language")) == 2


def test_ids_assigned_in_scan_order_sort_lexicographically(pond):
    ids = pond.document_ids()
    assert ids == sorted(ids)


def test_manifest_fields_match_fixture(pond, fixture_corpus, id_by_stem):
    for doc in fixture_corpus.docs:
        manifest = pond.manifests.read_manifest(id_by_stem[doc.stem])
        assert manifest.atomic["title"] == doc.stem
        assert manifest.atomic["format"] == doc.mime
        assert manifest.atomic["language"] == doc.language
        assert manifest.atomic["date"].startswith(str(doc.year))
        expected_size = len(PDF_STUB) if doc.mime == "application/pdf" else len(doc.text.encode("utf-8"))
        assert manifest.atomic["extent"] == str(expected_size)
        links = {l.name: l.value for l in manifest.links}
        assert links["company"] == doc.company
        assert links["category"] == doc.category


def test_raw_bytes_retained_verbatim(pond, fixture_corpus, id_by_stem):
    for doc in fixture_corpus.docs[:20]:
        doc_id = id_by_stem[doc.stem]
        filename = doc.rel_path.rsplit("/", 1)[1]
        raw = (pond.store_root / "raw" / doc_id / filename).read_bytes()
        expected = PDF_STUB if doc.mime == "application/pdf" else doc.text.encode("utf-8")
        assert raw == expected


def test_original_classic_artifacts_lossless(pond, fixture_corpus, id_by_stem):
    for doc in fixture_corpus.docs:
        doc_id = id_by_stem[doc.stem]
        path = pond.store_root / "presentation" / doc_id / "original_version+classic_presentation.txt"
        assert path.read_bytes() == doc.text.encode("utf-8")


def test_every_ref_uri_resolves_to_a_file(pond):
    for doc_id in pond.document_ids():
        manifest = pond.manifests.read_manifest(doc_id)
        assert manifest.refs, doc_id
        for ref in manifest.refs:
            assert (pond.store_root / ref.xptr).is_file(), ref.xptr


def test_default_matrix_covers_four_transformations(pond):
    doc_id = pond.document_ids()[0]
    labels = {r.label for r in pond.manifests.read_manifest(doc_id).refs}
    kinds = {label.split("+", 1)[0] for label in labels}
    assert kinds == {"original_version", "stopword_removal", "lemmatized_version", "dictionary_filter"}
    assert len(labels) == 12  # 4 transformations x 3 presentations


# -- corpus-dependent weights across batches -----------------------------------


def test_tfidf_refresh_covers_documents_from_earlier_batches(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    tree_a = _mini_tree(tmp_path / "a", {
        "acme/finance/one.txt": "alpha beta beta\n",
        "acme/finance/two.txt": "alpha gamma\n",
    })
    pond.ingest_tree(tree_a)
    label = "original_version+tfidf_vector"
    first_ids = pond.document_ids()
    before = pond.corpus_vectors(label)
    # N=2: alpha in both docs -> df=2=N, pruned; beta unique -> 2*ln(2)
    assert "alpha" not in before[first_ids[0]]
    assert before[first_ids[0]].get("beta") == pytest.approx(2 * math.log(2), abs=1e-12)

    tree_b = _mini_tree(tmp_path / "b", {"acme/finance/three.txt": "delta delta\n"})
    pond.ingest_tree(tree_b)
    after = pond.corpus_vectors(label)
    # N=3 now: alpha df=2 -> 1*ln(3/2) reappears in both early docs
    assert after[first_ids[0]].get("alpha") == pytest.approx(math.log(3 / 2), abs=1e-12)
    assert after[first_ids[0]].get("beta") == pytest.approx(2 * math.log(3), abs=1e-12)


def test_index_rebuilds_after_new_batch(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    pond.ingest_tree(_mini_tree(tmp_path / "a", {"acme/finance/one.txt": "alpha beta\n"}))
    label = "original_version+classic_presentation"
    index = pond.indexes.get(label)
    assert not search(index, ["zeta"], stopwords=frozenset(), dictionary=None)
    pond.ingest_tree(_mini_tree(tmp_path / "b", {"acme/finance/two.txt": "zeta zeta\n"}))
    index = pond.indexes.get(label)
    assert len(search(index, ["zeta"], stopwords=frozenset(), dictionary=None)) == 1


# -- skip handling --------------------------------------------------------------


def test_binary_without_sidecar_is_skipped_with_reason(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    tree = _mini_tree(tmp_path / "a", {
        "acme/finance/good.txt": "alpha beta\n",
        "acme/finance/blob.bin": b"\x00\x01\x02\xff",
    })
    report = pond.ingest_tree(tree)
    assert len(report.ingested) == 1
    assert len(report.skipped) == 1
    assert report.skipped[0][0].endswith("blob.bin")
    assert len(pond.document_ids()) == 1


# -- vector retrieval and link persistence --------------------------------------


def test_corpus_vectors_rejects_text_label(pond):
    with pytest.raises(UnknownLabel):
        pond.corpus_vectors("original_version+classic_presentation")


def test_corpus_vectors_unknown_label_raises(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    with pytest.raises(UnknownLabel):
        pond.corpus_vectors("original_version+tfidf_vector")


def test_build_links_persists_loadable_graph(pond):
    assert "original_version+tfidf_vector+cosine" in list_graphs(pond.store_root)
    graph = load_graph("original_version+tfidf_vector+cosine", pond.store_root)
    n = len(pond.document_ids())
    assert len(graph.nodes) == n
    assert len(graph.edges) == n * (n - 1) // 2


def test_build_links_unknown_presentation(tmp_path):
    pond = Pond.initialize(tmp_path / "store")
    with pytest.raises(UnknownLabel):
        pond.build_links(SimilarityMeasure("cosine", "original_version+tfidf_vector"))


def test_language_routing_picks_matching_stopword_list(pond, fixture_corpus, id_by_stem):
    """French docs keep English function words under stopword_removal and
    vice versa: removal uses the list matching each document's language."""
    fr_doc = next(d for d in fixture_corpus.docs if d.language == "fr" and " de " in d.text)
    doc_id = id_by_stem[fr_doc.stem]
    path = pond.store_root / "presentation" / doc_id / "stopword_removal+term_frequency_vector.csv"
    vector = load_payload(path.read_bytes(), "stopword_removal+term_frequency_vector")
    assert "de" not in vector
    assert "client" in vector or len(vector) > 0

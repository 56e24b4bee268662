import pytest
from hypothesis import given, strategies as st

from textpond.errors import UnknownDocument, UnknownLabel, WrongPayloadKind
from textpond.index import (
    IndexStore,
    Posting,
    PostingsIndex,
    dump_index,
    expansion_groups,
    highlights,
    index_artifact,
    load_index,
    merge_spans,
    query_keys,
    search,
)
from textpond.textproc import PresentationArtifact, tokenize

CLASSIC = "original_version+classic_presentation"


def _index(docs: dict[str, str], label: str = CLASSIC) -> PostingsIndex:
    index = PostingsIndex(label=label)
    for doc_id, text in docs.items():
        index.add_text(doc_id, text)
    return index


def test_postings_positions_and_spans():
    index = _index({"D-1-0": "client roi client"})
    client = index.postings["client"]["D-1-0"]
    roi = index.postings["roi"]["D-1-0"]
    assert client.positions == (0, 2)
    assert roi.positions == (1,)
    assert client.spans == ((0, 6), (11, 17))


def test_reindex_idempotent():
    index = _index({"D-1-0": "client roi client"})
    before = dump_index(index)
    index.add_text("D-1-0", "client roi client")
    assert dump_index(index) == before


def test_posting_count_recount():
    docs = {
        "D-1-0": "market client growth market",
        "D-2-0": "press release client",
        "D-3-0": "growth growth growth",
    }
    index = _index(docs)
    total_postings = sum(
        len(p.positions) for docs_ in index.postings.values() for p in docs_.values()
    )
    assert total_postings == sum(len(tokenize(t)) for t in docs.values())


def test_index_artifact_contract():
    index = PostingsIndex(label=CLASSIC)
    art = PresentationArtifact("D-1-0", CLASSIC, "some classic text")
    index_artifact(index, art)
    assert index.doc_ids() == {"D-1-0"}
    with pytest.raises(WrongPayloadKind):
        index_artifact(index, PresentationArtifact("D-2-0", CLASSIC, {"a": 1}))
    with pytest.raises(WrongPayloadKind):
        index_artifact(
            index, PresentationArtifact("D-2-0", "original_version+bag_of_words", "text")
        )


DOCS = {
    "D-1-0": "le client est roi",
    "D-2-0": "le consommateur a le choix",
    "D-3-0": "la presse annonce la nouvelle",
}
THESAURUS = [frozenset({"client", "consommateur", "acheteur"})]


def test_search_single_term():
    index = _index(DOCS)
    assert search(index, {"client"}) == {"D-1-0"}


def test_search_thesaurus_expansion():
    index = _index(DOCS)
    assert search(index, {"client"}, THESAURUS) == {"D-1-0", "D-2-0"}


def test_search_empty_terms_is_neutral():
    index = _index(DOCS)
    assert search(index, set()) == set(DOCS)


def test_search_absent_term():
    index = _index(DOCS)
    assert search(index, {"zeppelin"}) == set()


def test_search_or_and_semantics():
    index = _index(DOCS)
    assert search(index, {"client", "presse"}) == {"D-1-0", "D-3-0"}
    assert search(index, {"client", "roi"}, match_all=True) == {"D-1-0"}
    assert search(index, {"client", "presse"}, match_all=True) == set()


def test_search_stopword_label_drops_stopword_queries():
    index = _index({"D-1-0": "client roi"}, label="stopword_removal+classic_presentation")
    stop = frozenset({"le", "la"})
    assert search(index, {"le"}, stopwords=stop) == set()
    assert search(index, {"client"}, stopwords=stop) == {"D-1-0"}


def test_search_lemmatized_label_stems_queries():
    # documents under the lemmatized label hold stems
    index = _index({"D-1-0": "client consomm march"}, label="lemmatized_version+classic_presentation")
    assert search(index, {"clients"}) == {"D-1-0"}
    assert search(index, {"consommation"}) == {"D-1-0"}


def test_search_dictionary_label_filters_queries():
    index = _index({"D-1-0": "client roi"}, label="dictionary_filter+classic_presentation")
    d = frozenset({"client"})
    assert search(index, {"client"}, dictionary=d) == {"D-1-0"}
    assert search(index, {"roi"}, dictionary=d) == set()


@given(st.sets(st.sampled_from(["client", "roi", "presse", "choix", "absent"]), max_size=3))
def test_search_matches_brute_force_scan(terms):
    index = _index(DOCS)
    expected = {
        doc_id
        for doc_id, text in DOCS.items()
        if any(t in [tok.normalized for tok in tokenize(text)] for t in terms)
    } if terms else set(DOCS)
    assert search(index, terms) == expected


@given(st.sets(st.sampled_from(["client", "acheteur", "presse", "nouvelle"]), max_size=3))
def test_thesaurus_monotonicity(terms):
    index = _index(DOCS)
    assert search(index, terms) <= search(index, terms, THESAURUS)


def test_expansion_groups():
    groups = expansion_groups({"Client", "roi"}, THESAURUS)
    assert groups["client"] == {"client", "consommateur", "acheteur"}
    assert groups["roi"] == {"roi"}


def test_query_keys():
    assert query_keys("Client", "original_version") == {"client"}
    assert query_keys("le", "stopword_removal", stopwords=frozenset({"le"})) == set()
    assert query_keys("clients", "lemmatized_version") == {"client"}
    assert query_keys("roi", "dictionary_filter", dictionary=frozenset({"client"})) == set()


def test_highlights_bounds_clip():
    index = _index({"D-1-0": "aaa client bbb"})
    assert highlights(index, "D-1-0", {"client"}, window=4) == ["aaa client bbb"]


def test_highlights_merge_overlapping():
    index = _index({"D-1-0": "client client apart xxxxxxxxxxxxxxxxxxxxxxxxxxxxx client"})
    snippets = highlights(index, "D-1-0", {"client"}, window=3)
    assert len(snippets) == 2
    assert snippets[0] == "client client ap"  # spans (0,6)+(7,13), window 3 -> [0,16)
    assert snippets[1].endswith("client")


def test_highlights_term_absent():
    index = _index(DOCS)
    assert highlights(index, "D-1-0", {"zeppelin"}) == []


def test_highlights_ordered_and_contain_terms():
    text = "client aaaaaaaaaaaaaaaaaaaaaaaaaaaaaa roi bbbbbbbbbbbbbbbbbbbbbbbbbbbbbb client"
    index = _index({"D-1-0": text})
    snippets = highlights(index, "D-1-0", {"client", "roi"}, window=2)
    assert len(snippets) == 3
    assert [("client" in s) or ("roi" in s) for s in snippets] == [True, True, True]
    starts = [text.index(s) for s in snippets]
    assert starts == sorted(starts)


def test_highlights_thesaurus_expansion():
    index = _index(DOCS)
    snippets = highlights(index, "D-2-0", {"client"}, window=5, thesaurus=THESAURUS)
    assert len(snippets) == 1
    assert "consommateur" in snippets[0]


def test_highlights_unknown_document():
    index = _index(DOCS)
    with pytest.raises(UnknownDocument):
        highlights(index, "D-404-0", {"client"})


def test_merge_spans_windowing():
    assert merge_spans([(4, 10)], 4, 14) == [(0, 14)]
    assert merge_spans([(0, 6), (7, 13)], 3, 20) == [(0, 16)]
    assert merge_spans([], 5, 10) == []


def test_snapshot_round_trip():
    index = _index(DOCS)
    index.stamps["D-1-0"] = (123456789, 42)
    data = dump_index(index)
    loaded = load_index(data, CLASSIC)
    assert loaded.label == index.label
    assert loaded.texts == index.texts
    assert loaded.stamps == index.stamps
    assert loaded.postings == index.postings
    assert dump_index(loaded) == data


def _store_with_docs(tmp_path, docs: dict[str, str], label: str = CLASSIC) -> IndexStore:
    for doc_id, text in docs.items():
        d = tmp_path / "presentation" / doc_id
        d.mkdir(parents=True, exist_ok=True)
        (d / f"{label}.txt").write_text(text, "utf-8")
    return IndexStore(tmp_path)


def test_index_store_build_and_search(tmp_path):
    store = _store_with_docs(tmp_path, DOCS)
    index = store.get(CLASSIC)
    assert search(index, {"client"}) == {"D-1-0"}
    assert (tmp_path / "index" / f"{CLASSIC}.idx").is_file()


def test_index_store_unknown_label(tmp_path):
    store = _store_with_docs(tmp_path, DOCS)
    with pytest.raises(UnknownLabel):
        store.get("lemmatized_version+classic_presentation")


def test_index_store_staleness_rebuild(tmp_path):
    import os

    store = _store_with_docs(tmp_path, DOCS)
    first = store.get(CLASSIC)
    assert search(first, {"zeppelin"}) == set()

    path = tmp_path / "presentation" / "D-1-0" / f"{CLASSIC}.txt"
    path.write_text("zeppelin only now", "utf-8")
    os.utime(path, ns=(path.stat().st_atime_ns + 10, path.stat().st_mtime_ns + 10))

    fresh_store = IndexStore(tmp_path)  # no warm cache
    rebuilt = fresh_store.get(CLASSIC)
    assert search(rebuilt, {"zeppelin"}) == {"D-1-0"}
    assert search(rebuilt, {"client"}) == set()


def test_index_store_snapshot_reused_when_fresh(tmp_path):
    store = _store_with_docs(tmp_path, DOCS)
    store.get(CLASSIC)
    snapshot = (tmp_path / "index" / f"{CLASSIC}.idx").read_bytes()

    other = IndexStore(tmp_path)
    index = other.get(CLASSIC)
    assert dump_index(index) == snapshot


def test_indexed_labels(tmp_path):
    store = _store_with_docs(tmp_path, DOCS)
    _store_with_docs(tmp_path, {"D-1-0": "client roi"}, "stopword_removal+classic_presentation")
    assert store.indexed_labels() == [
        CLASSIC,
        "stopword_removal+classic_presentation",
    ]


def test_posting_validation():
    with pytest.raises(ValueError):
        Posting("D-1-0", (0, 0), ((0, 1), (2, 3)))
    with pytest.raises(ValueError):
        Posting("D-1-0", (0, 1), ((0, 1),))

"""Command-line interface.

Subcommands: ingest, manifest, search, link, query, communities,
centrality, serve. Store location comes from ``--store-root``, falling
back to the ``store_root`` key of ``--config`` (a flat ``key = value``
text file; see README), then to ``./textpond-store``.

Short label aliases are accepted everywhere a transformation,
presentation, or link name is expected: ``original``, ``stopword``,
``lemmatized``, ``dictionary``, ``classic``, ``bag``, ``tf``, ``tfidf``,
so ``original+tfidf+cosine`` means
``original_version+tfidf_vector+cosine``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from textpond import analytics
from textpond.errors import TextPondError
from textpond.index import highlights as index_highlights
from textpond.index import search as index_search
from textpond.linkgraph import MEASURES, SimilarityMeasure, list_graphs, load_graph
from textpond.pipeline import Pond
from textpond.service import (
    ApiConfig,
    serialize_aggregate,
    serialize_centrality,
    serialize_communities,
    serialize_manifest,
    serialize_search,
    serve,
)
from textpond.textproc import PRESENTATIONS, TRANSFORMATIONS

DEFAULT_STORE = "textpond-store"

_TRANSFORMATION_ALIASES = {
    "original": "original_version",
    "stopword": "stopword_removal",
    "stopwords": "stopword_removal",
    "lemmatized": "lemmatized_version",
    "lemma": "lemmatized_version",
    "dictionary": "dictionary_filter",
    "dict": "dictionary_filter",
}
_PRESENTATION_ALIASES = {
    "classic": "classic_presentation",
    "bag": "bag_of_words",
    "tf": "term_frequency_vector",
    "tfidf": "tfidf_vector",
}
_MEASURE_ALIASES = {"chi2": "chi_square", "chi": "chi_square"}


def expand_transformation(name: str) -> str:
    full = _TRANSFORMATION_ALIASES.get(name, name)
    if full not in TRANSFORMATIONS:
        raise ValueError(f"unknown transformation {name!r}")
    return full


def expand_presentation(name: str) -> str:
    full = _PRESENTATION_ALIASES.get(name, name)
    if full not in PRESENTATIONS:
        raise ValueError(f"unknown presentation {name!r}")
    return full


def expand_measure(name: str) -> str:
    full = _MEASURE_ALIASES.get(name, name)
    if full not in MEASURES:
        raise ValueError(f"unknown similarity measure {name!r}")
    return full


def expand_label(label: str) -> str:
    parts = label.split("+")
    if len(parts) != 2:
        raise ValueError(f"label must be <transformation>+<presentation>, got {label!r}")
    return f"{expand_transformation(parts[0])}+{expand_presentation(parts[1])}"


def expand_link(link: str) -> str:
    parts = link.split("+")
    if len(parts) != 3:
        raise ValueError(f"link must be <transformation>+<presentation>+<measure>, got {link!r}")
    label = expand_label("+".join(parts[:2]))
    return f"{label}+{expand_measure(parts[2])}"


def read_config(path: Path) -> dict[str, str]:
    """Flat key-value config: one ``key = value`` per line, ``#`` comments."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _store_root(args) -> Path:
    if args.store_root:
        return Path(args.store_root)
    if args.config:
        cfg = read_config(Path(args.config))
        if "store_root" in cfg:
            return Path(cfg["store_root"])
    return Path(DEFAULT_STORE)


def _facet_filters(pairs: list[str]) -> dict[str, set[str]]:
    filters: dict[str, set[str]] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError(f"--facet expects name=value, got {pair!r}")
        name, _, value = pair.partition("=")
        filters.setdefault(name, set()).add(value)
    return filters


# -- subcommand handlers ----------------------------------------------------------


def _cmd_ingest(args) -> int:
    pond = Pond.ensure(_store_root(args))
    report = pond.ingest_tree(Path(args.source))
    print(f"Ingested {len(report.ingested)} document(s) into {pond.store_root}.")
    for path, reason in report.skipped:
        print(f"  skipped {path}: {reason}")
    return 0


def _cmd_manifest(args) -> int:
    pond = Pond.open(_store_root(args))
    if args.raw:
        sys.stdout.write(pond.manifests.read_manifest_raw(args.doc_id).decode("utf-8"))
    else:
        print(json.dumps(serialize_manifest(pond.manifests.read_manifest(args.doc_id)), indent=2))
    return 0


def _cmd_search(args) -> int:
    pond = Pond.open(_store_root(args))
    label = expand_label(args.label)
    index = pond.indexes.get(label)
    terms = args.terms.split()
    thesaurus = pond.thesaurus(args.thesaurus)
    stopwords, dictionary = pond.stopword_union(), pond.dictionary_union()
    ids = sorted(
        index_search(
            index, terms, thesaurus, stopwords=stopwords, dictionary=dictionary, match_all=args.match_all
        )
    )
    if args.json:
        payload = serialize_search(label, terms, ids)
        if args.highlight_size:
            payload["highlights"] = {
                doc_id: index_highlights(
                    index, doc_id, terms, args.highlight_size, thesaurus,
                    stopwords=stopwords, dictionary=dictionary,
                )
                for doc_id in ids
            }
        print(json.dumps(payload, indent=2))
        return 0
    for doc_id in ids:
        print(doc_id)
        if args.highlight_size:
            for snippet in index_highlights(
                index, doc_id, terms, args.highlight_size, thesaurus,
                stopwords=stopwords, dictionary=dictionary,
            ):
                print(f"    …{snippet}…")
    if not ids:
        print("(no matches)")
    return 0


def _cmd_link(args) -> int:
    pond = Pond.open(_store_root(args))
    if args.link_action == "list":
        for name in list_graphs(pond.store_root):
            print(name)
        return 0
    measure = SimilarityMeasure(expand_measure(args.measure), expand_label(args.presentation))
    graph, report = pond.build_links(measure)
    print(f"Built {graph.link_name}: {len(graph.nodes)} nodes, {len(graph.edges)} edges.")
    if report.excluded:
        print(f"  excluded zero vectors: {', '.join(sorted(report.excluded))}")
    if report.pair_failures:
        print(f"  pairs defaulted to 0.0: {len(report.pair_failures)}")
    return 0


def _cmd_query(args) -> int:
    pond = Pond.open(_store_root(args))
    query = analytics.AnalysisQuery(
        facet_filters=_facet_filters(args.facet),
        keyword_terms=frozenset(args.keywords.split() if args.keywords else []),
        transformation=expand_transformation(args.transform),
        use_thesaurus=args.thesaurus,
    )
    ids = analytics.filter_documents(pond, query)
    if args.aggregate:
        report = analytics.aggregate(pond, ids, args.aggregate, args.granularity, args.k_terms)
        print(json.dumps(serialize_aggregate(report), indent=2))
        return 0
    if args.json:
        print(json.dumps({"ids": sorted(ids), "count": len(ids)}, indent=2))
        return 0
    for doc_id in sorted(ids):
        print(doc_id)
    print(f"({len(ids)} document(s))")
    return 0


def _cmd_communities(args) -> int:
    pond = Pond.open(_store_root(args))
    graph = load_graph(expand_link(args.link), pond.store_root)
    report = analytics.detect_communities(graph, threshold=args.threshold, t=args.walk_length)
    if args.json:
        print(json.dumps(serialize_communities(report), indent=2))
        return 0
    print(f"{len(report.communities)} communities at threshold {args.threshold} "
          f"(modularity {report.modularity:.4f})")
    for i, block in enumerate(report.communities):
        print(f"  [{i}] {' '.join(block)}")
    return 0


def _cmd_centrality(args) -> int:
    pond = Pond.open(_store_root(args))
    graph = load_graph(expand_link(args.link), pond.store_root)
    report = analytics.compute_centrality(graph, threshold=args.threshold)
    if args.json:
        print(json.dumps(serialize_centrality(report), indent=2))
        return 0
    for doc_id, score in sorted(report.scores.items(), key=lambda kv: (-kv[1], kv[0])):
        print(f"{score:.6f}  {doc_id}")
    return 0


def _cmd_serve(args) -> int:
    cfg = read_config(Path(args.config)) if args.config else {}
    store_root = Path(args.store_root or cfg.get("store_root", DEFAULT_STORE))
    languages = tuple(
        part.strip() for part in cfg.get("languages", "fr,en").split(",") if part.strip()
    )
    config = ApiConfig(
        store_root=store_root,
        host=args.host or cfg.get("host", "127.0.0.1"),
        port=args.port or int(cfg.get("port", "8000")),
        languages=languages,
        cors_origins=tuple(
            origin.strip() for origin in cfg.get("cors_origins", "").split(",") if origin.strip()
        ),
        ui_dist=Path(cfg["ui_dist"]) if "ui_dist" in cfg else None,
    )
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="textpond", description="Textual data pond metadata engine")
    parser.add_argument("--store-root", help=f"store directory (default: ./{DEFAULT_STORE})")
    parser.add_argument("--config", help="flat key-value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a <company>/<category>/<file> tree")
    p.add_argument("source", help="root of the source document tree")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("manifest", help="print one document manifest")
    p.add_argument("doc_id")
    p.add_argument("--raw", action="store_true", help="print the stored XML instead of JSON")
    p.set_defaults(func=_cmd_manifest)

    p = sub.add_parser("search", help="keyword search over an index")
    p.add_argument("terms", help="space-separated terms")
    p.add_argument("--label", default="original+classic", help="<transformation>+<presentation>")
    p.add_argument("--thesaurus", help="registered thesaurus name (e.g. fr)")
    p.add_argument("--highlight-size", type=int, default=0, metavar="N", help="show ±N-char snippets")
    p.add_argument("--match-all", action="store_true", help="require every term")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("link", help="build or list similarity link graphs")
    link_sub = p.add_subparsers(dest="link_action", required=True)
    b = link_sub.add_parser("build", help="compute and store one link graph")
    b.add_argument("--presentation", required=True, help="e.g. original+tfidf")
    b.add_argument("--measure", required=True, help="cosine | chi_square | spearman")
    b.set_defaults(func=_cmd_link)
    link_sub.add_parser("list", help="list stored link graphs").set_defaults(func=_cmd_link)

    p = sub.add_parser("query", help="filter documents by facets and keywords")
    p.add_argument("--facet", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--keywords", help="space-separated keyword terms")
    p.add_argument("--transform", default="original", help="transformation for keyword matching")
    p.add_argument("--thesaurus")
    p.add_argument("--aggregate", metavar="FACET", help="print an aggregate report over the matches")
    p.add_argument("--granularity", choices=("year", "month"), default="year")
    p.add_argument("--k-terms", type=int, default=10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("communities", help="detect communities on a stored link graph")
    p.add_argument("--link", required=True, help="e.g. original+tfidf+cosine")
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--walk-length", type=int, default=4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_communities)

    p = sub.add_parser("centrality", help="weighted-degree centrality on a stored link graph")
    p.add_argument("--link", required=True)
    p.add_argument("--threshold", type=float, default=float("-inf"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_centrality)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TextPondError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Corpus analytics over a pond: facet/keyword filtering, aggregation
(distribution, timeline, term statistics), and proximity analyses
(community detection and centrality) on stored link graphs.

All operations are pure reads over the stores; nothing here mutates state.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from textpond.errors import TooFewNodes, UnknownFacet
from textpond.index import search
from textpond.linkgraph import LogicalLinkGraph
from textpond.pipeline import Pond
from textpond.textproc import TRANSFORMATIONS, artifact_label, load_payload, payload_filename
from textpond.walktrap import UndirectedGraph, walktrap

TIME_GRANULARITIES = ("year", "month")
TERM_STATS_LABEL = artifact_label("stopword_removal", "term_frequency_vector")


@dataclass(frozen=True)
class AnalysisQuery:
    """A slice of the corpus: facet clusters are disjunctive within one
    facet name and conjunctive across names; keyword terms restrict the
    result to search hits. Empty components impose no restriction."""

    facet_filters: dict[str, frozenset[str]] = field(default_factory=dict)
    keyword_terms: frozenset[str] = frozenset()
    transformation: str = "original_version"
    use_thesaurus: str | None = None
    highlight_window: int = 80

    def __post_init__(self):
        if self.transformation not in TRANSFORMATIONS:
            raise ValueError(f"unknown transformation {self.transformation!r}")
        if self.highlight_window < 1:
            raise ValueError("highlight_window must be positive")
        object.__setattr__(
            self,
            "facet_filters",
            {name: frozenset(values) for name, values in self.facet_filters.items()},
        )
        object.__setattr__(self, "keyword_terms", frozenset(self.keyword_terms))


@dataclass(frozen=True)
class AggregateReport:
    matched_ids: frozenset[str]
    distribution: dict[str, int]
    timeline: dict[str, int]
    top_terms: list[tuple[str, float]]
    tagcloud: list[tuple[str, float]]


@dataclass(frozen=True)
class CommunityReport:
    link_name: str
    threshold: float
    communities: tuple[tuple[str, ...], ...]
    modularity: float


@dataclass(frozen=True)
class CentralityReport:
    link_name: str
    scores: dict[str, float]


def filter_documents(pond: Pond, query: AnalysisQuery) -> frozenset[str]:
    """Intersect per-facet cluster unions with the keyword search result."""
    known_facets = pond.manifests.link_names()
    result = set(pond.document_ids())
    for name in sorted(query.facet_filters):
        if name not in known_facets:
            raise UnknownFacet(f"no document carries a physical link named {name!r}")
        cluster: set[str] = set()
        for value in query.facet_filters[name]:
            cluster |= pond.manifests.query_by_physical_link(name, value)
        result &= cluster
    if query.keyword_terms:
        label = artifact_label(query.transformation, "classic_presentation")
        index = pond.indexes.get(label)
        hits = search(
            index,
            sorted(query.keyword_terms),
            pond.thesaurus(query.use_thesaurus),
            stopwords=pond.stopword_union(),
            dictionary=pond.dictionary_union(),
        )
        result &= hits
    return frozenset(result)


def aggregate(
    pond: Pond,
    ids: frozenset[str] | set[str],
    facet: str,
    time_granularity: str = "year",
    k_terms: int = 10,
) -> AggregateReport:
    """Summarize a document set: count per facet value, count per creation
    period, top-k terms by summed frequency, and mean-frequency tag cloud."""
    if time_granularity not in TIME_GRANULARITIES:
        raise ValueError(f"time_granularity must be one of {TIME_GRANULARITIES}")
    if k_terms < 1:
        raise ValueError("k_terms must be positive")
    if facet not in pond.manifests.link_names():
        raise UnknownFacet(f"no document carries a physical link named {facet!r}")

    matched = frozenset(ids)
    distribution: Counter[str] = Counter()
    timeline: Counter[str] = Counter()
    prefix_len = 4 if time_granularity == "year" else 7
    summed: Counter[str] = Counter()
    for doc_id in sorted(matched):
        manifest = pond.manifests.read_manifest(doc_id)
        for link in manifest.links:
            if link.name == facet:
                distribution[link.value] += 1
                break
        timeline[manifest.atomic["date"][:prefix_len]] += 1
        path = pond.store_root / "presentation" / doc_id / payload_filename(TERM_STATS_LABEL)
        if path.is_file():
            vector = load_payload(path.read_bytes(), TERM_STATS_LABEL)
            for term, weight in vector.items():
                summed[term] += weight

    ranked = sorted(summed.items(), key=lambda kv: (-kv[1], kv[0]))[:k_terms]
    tagcloud = [(term, weight / len(matched)) for term, weight in ranked] if matched else []
    return AggregateReport(
        matched_ids=matched,
        distribution=dict(sorted(distribution.items())),
        timeline=dict(sorted(timeline.items())),
        top_terms=ranked,
        tagcloud=tagcloud,
    )


def threshold_subgraph(
    graph: LogicalLinkGraph,
    ids: frozenset[str] | set[str] | None = None,
    threshold: float = float("-inf"),
) -> UndirectedGraph:
    """Node-induced subgraph keeping only edges with strength >= threshold.

    Isolated nodes are retained. Ids absent from the graph (documents
    ingested after the graph was built) are silently dropped.
    """
    kept = set(graph.nodes) if ids is None else set(ids) & set(graph.nodes)
    edges = {
        pair: strength
        for pair, strength in graph.edges.items()
        if pair[0] in kept and pair[1] in kept and strength >= threshold
    }
    return UndirectedGraph(tuple(sorted(kept)), edges)


def detect_communities(
    graph: LogicalLinkGraph,
    ids: frozenset[str] | set[str] | None = None,
    threshold: float = float("-inf"),
    t: int = 4,
) -> CommunityReport:
    subgraph = threshold_subgraph(graph, ids, threshold)
    result = walktrap(subgraph, t)
    return CommunityReport(
        link_name=graph.link_name,
        threshold=threshold,
        communities=result.communities,
        modularity=result.modularity,
    )


def weighted_degree_scores(graph: UndirectedGraph) -> dict[str, float]:
    """score(v) = sum of incident edge strengths / (n - 1)."""
    n = len(graph.nodes)
    if n < 2:
        raise TooFewNodes(f"centrality needs at least 2 nodes, got {n}")
    totals = {node: 0.0 for node in graph.nodes}
    for (a, b), strength in graph.edges.items():
        totals[a] += strength
        totals[b] += strength
    return {node: total / (n - 1) for node, total in totals.items()}


def compute_centrality(
    graph: LogicalLinkGraph,
    ids: frozenset[str] | set[str] | None = None,
    threshold: float = float("-inf"),
) -> CentralityReport:
    subgraph = threshold_subgraph(graph, ids, threshold)
    return CentralityReport(link_name=graph.link_name, scores=weighted_degree_scores(subgraph))

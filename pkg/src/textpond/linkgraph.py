"""Logical links: complete pairwise similarity graphs over term vectors.

Three measures produce edge strengths:

* ``cosine``     — dot(u, v) / (|u|·|v|), in [0, 1] for non-negative weights;
* ``chi_square`` — both vectors normalized to distributions p, q over the
  union vocabulary, chi2 = sum (p-q)^2 / (p+q) over terms with p+q > 0,
  strength = 1 / (1 + chi2), in (0, 1]; two disjoint distributions give
  chi2 = 2, strength 1/3;
* ``spearman``   — terms of the union vocabulary ranked by weight within
  each document (absent term = weight 0, ties get average ranks), strength =
  Pearson correlation of the two rank sequences, in [-1, 1].

A graph over n measurable documents has exactly n(n-1)/2 edges — one per
unordered pair. Documents whose vectors fail a measure's preconditions are
excluded before pairing; pairs that fail during computation (degenerate
ranks) get strength 0. Both cases land in the build report, so completeness
over included nodes always holds.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from textpond.errors import DegenerateRanks, NotFound, StorageFailure, ZeroVector
from textpond.textproc import TermVector

MEASURES = ("cosine", "chi_square", "spearman")


@dataclass(frozen=True)
class SimilarityMeasure:
    kind: str
    presentation_label: str

    def __post_init__(self):
        if self.kind not in MEASURES:
            raise ValueError(f"unknown similarity measure: {self.kind!r}")
        vector_kind = self.presentation_label.rsplit("+", 1)[-1]
        if self.kind == "spearman":
            if vector_kind != "term_frequency_vector":
                raise ValueError("spearman requires term-frequency vectors")
        elif vector_kind not in ("term_frequency_vector", "tfidf_vector"):
            raise ValueError(f"{self.kind} requires TF or TF-IDF vectors, not {vector_kind!r}")

    @property
    def link_name(self) -> str:
        return f"{self.presentation_label}+{self.kind}"


@dataclass(frozen=True)
class LogicalLinkGraph:
    link_name: str
    nodes: frozenset[str]
    edges: dict[tuple[str, str], float]

    def strength(self, a: str, b: str) -> float:
        key = (a, b) if a < b else (b, a)
        return self.edges[key]


@dataclass
class GraphBuildReport:
    excluded: list[tuple[str, str]] = field(default_factory=list)
    pair_failures: list[tuple[str, str, str]] = field(default_factory=list)


def cosine(u: TermVector, v: TermVector) -> float:
    if u.norm == 0 or v.norm == 0:
        raise ZeroVector("cosine is undefined for zero-norm vectors")
    small, large = (u, v) if len(u) <= len(v) else (v, u)
    dot = math.fsum(w * large.get(t) for t, w in small.items())
    return min(max(dot / (u.norm * v.norm), 0.0), 1.0)


def chi_square_similarity(u: TermVector, v: TermVector) -> float:
    mass_u = math.fsum(u.entries.values())
    mass_v = math.fsum(v.entries.values())
    if mass_u == 0 or mass_v == 0:
        raise ZeroVector("chi-square similarity is undefined for zero-mass vectors")
    chi2 = 0.0
    terms = []
    for t in set(u.entries) | set(v.entries):
        p = u.get(t) / mass_u
        q = v.get(t) / mass_v
        if p + q > 0:
            terms.append((p - q) ** 2 / (p + q))
    chi2 = math.fsum(terms)
    return 1.0 / (1.0 + chi2)


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1  # ranks are 1-based; ties share the average
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def spearman(u: TermVector, v: TermVector) -> float:
    vocabulary = sorted(set(u.entries) | set(v.entries))
    if len(vocabulary) < 2:
        raise DegenerateRanks("spearman needs a union vocabulary of at least 2 terms")
    ranks_u = _average_ranks([u.get(t) for t in vocabulary])
    ranks_v = _average_ranks([v.get(t) for t in vocabulary])
    n = len(vocabulary)
    mean_u = math.fsum(ranks_u) / n
    mean_v = math.fsum(ranks_v) / n
    dev_u = [r - mean_u for r in ranks_u]
    dev_v = [r - mean_v for r in ranks_v]
    var_u = math.fsum(d * d for d in dev_u)
    var_v = math.fsum(d * d for d in dev_v)
    if var_u == 0 or var_v == 0:
        raise DegenerateRanks("constant rank sequence (all weights tied)")
    cov = math.fsum(a * b for a, b in zip(dev_u, dev_v))
    return min(max(cov / math.sqrt(var_u * var_v), -1.0), 1.0)


_MEASURE_FNS = {"cosine": cosine, "chi_square": chi_square_similarity, "spearman": spearman}


def measure_fn(kind: str):
    try:
        return _MEASURE_FNS[kind]
    except KeyError:
        raise ValueError(f"unknown similarity measure: {kind!r}") from None


def build_graph(
    corpus: dict[str, TermVector],
    measure: SimilarityMeasure,
    report: GraphBuildReport | None = None,
) -> LogicalLinkGraph:
    """Complete logical-link graph over every measurable document pair.

    Documents with empty/zero vectors are excluded up front (recorded in the
    report); a pair whose computation degenerates keeps its edge with
    strength 0 so the n(n-1)/2 completeness over included nodes holds.
    """
    report = report if report is not None else GraphBuildReport()
    fn = measure_fn(measure.kind)
    included: dict[str, TermVector] = {}
    for doc_id in sorted(corpus):
        vec = corpus[doc_id]
        if len(vec) == 0 or vec.norm == 0:
            report.excluded.append((doc_id, "zero vector"))
        else:
            included[doc_id] = vec
    ids = sorted(included)
    edges: dict[tuple[str, str], float] = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            try:
                edges[(a, b)] = fn(included[a], included[b])
            except (ZeroVector, DegenerateRanks) as exc:
                edges[(a, b)] = 0.0
                report.pair_failures.append((a, b, str(exc)))
    return LogicalLinkGraph(link_name=measure.link_name, nodes=frozenset(ids), edges=edges)


_HEADER_RE = re.compile(r"^# (\w+)=(.*)$")


def store_graph(g: LogicalLinkGraph, store_root: Path | str) -> Path:
    links_dir = Path(store_root) / "links"
    path = links_dir / f"{g.link_name}.csv"
    lines = [f"# link_name={g.link_name}", "# nodes=" + ";".join(sorted(g.nodes)), "id_a,id_b,strength"]
    for a, b in sorted(g.edges):
        lines.append(f"{a},{b},{g.edges[(a, b)]!r}")
    try:
        links_dir.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".csv.tmp")
        tmp.write_text("\n".join(lines) + "\n", "utf-8")
        tmp.replace(path)
    except OSError as exc:
        raise StorageFailure(f"cannot write graph {g.link_name!r}: {exc}") from exc
    return path


def load_graph(link_name: str, store_root: Path | str) -> LogicalLinkGraph:
    path = Path(store_root) / "links" / f"{link_name}.csv"
    if not path.exists():
        raise NotFound(f"no stored graph named {link_name!r}")
    lines = path.read_text("utf-8").splitlines()
    headers: dict[str, str] = {}
    body_start = 0
    for i, line in enumerate(lines):
        m = _HEADER_RE.match(line)
        if not m:
            body_start = i
            break
        headers[m.group(1)] = m.group(2)
    if "link_name" not in headers or "nodes" not in headers:
        raise StorageFailure(f"{path} is missing the link_name/nodes header comments")
    if body_start >= len(lines) or lines[body_start] != "id_a,id_b,strength":
        raise StorageFailure(f"{path} is missing the id_a,id_b,strength column header")
    nodes = frozenset(n for n in headers["nodes"].split(";") if n)
    edges: dict[tuple[str, str], float] = {}
    for lineno, line in enumerate(lines[body_start + 1 :], start=body_start + 2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise StorageFailure(f"{path}:{lineno}: expected 'id_a,id_b,strength'")
        try:
            edges[(fields[0], fields[1])] = float(fields[2])
        except ValueError as exc:
            raise StorageFailure(f"{path}:{lineno}: bad strength value") from exc
    return LogicalLinkGraph(link_name=headers["link_name"], nodes=nodes, edges=edges)


def list_graphs(store_root: Path | str) -> list[str]:
    links_dir = Path(store_root) / "links"
    if not links_dir.is_dir():
        return []
    return sorted(p.stem for p in links_dir.glob("*.csv"))

"""Random-walk community detection over weighted undirected graphs.

The method follows the classic random-walk agglomeration scheme: short walks
of length ``t`` tend to stay inside densely connected groups, so two vertices
are close when their t-step transition-probability rows are close.

* transition matrix ``P = D^-1 A`` over the non-isolated vertices, walked
  ``t`` steps (default 4);
* a community's probability row is the mean of its members' rows; the
  squared distance between communities C1, C2 is
  ``r2 = sum_k (P_t[C1,k] - P_t[C2,k])^2 / d(k)``;
* only communities joined by at least one edge may merge; each step merges
  the adjacent pair minimizing the variance increase
  ``dsigma = (1/n) * |C1||C2| / (|C1|+|C2|) * r2``, ties broken by lowest
  (then second-lowest) community index, and the merged community takes the
  next free index;
* the partition kept is the one of maximal weighted modularity along the
  merge sequence (earliest on ties); isolated vertices stay singletons.

Weighted modularity: Q = sum_c (intra_c / m - (deg_c / 2m)^2) with m the
total edge weight; Q = 0 for edgeless graphs. Edges with non-positive weight
carry no random-walk mass and are ignored here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple weighted undirected graph; edge keys are (a, b) with a < b."""

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        known = set(self.nodes)
        for (a, b), w in self.edges.items():
            if a >= b:
                raise ValueError(f"edge key ({a!r}, {b!r}) must be ordered a < b")
            if a not in known or b not in known:
                raise ValueError(f"edge ({a!r}, {b!r}) references unknown node")

    def total_weight(self) -> float:
        return float(sum(w for w in self.edges.values() if w > 0))


def modularity(graph: UndirectedGraph, partition: list[list[str]]) -> float:
    """Weighted modularity of a partition; 0 for edgeless graphs."""
    community_of: dict[str, int] = {}
    for c, members in enumerate(partition):
        for node in members:
            community_of[node] = c
    m = graph.total_weight()
    if m == 0:
        return 0.0
    intra = [0.0] * len(partition)
    deg: dict[str, float] = {n: 0.0 for n in graph.nodes}
    for (a, b), w in graph.edges.items():
        if w <= 0:
            continue
        deg[a] += w
        deg[b] += w
        if community_of[a] == community_of[b]:
            intra[community_of[a]] += w
    q = 0.0
    for c, members in enumerate(partition):
        deg_c = sum(deg[n] for n in members)
        q += intra[c] / m - (deg_c / (2 * m)) ** 2
    return q


@dataclass(frozen=True)
class CommunityResult:
    communities: tuple[tuple[str, ...], ...]
    modularity: float


def walktrap(graph: UndirectedGraph, t: int = 4) -> CommunityResult:
    """Detect communities; deterministic for a given graph and walk length."""
    if len(graph.nodes) == 0:
        return CommunityResult(communities=(), modularity=0.0)

    nodes = list(graph.nodes)
    index = {n: i for i, n in enumerate(nodes)}
    n_all = len(nodes)
    adj = np.zeros((n_all, n_all))
    for (a, b), w in graph.edges.items():
        if w <= 0:
            continue
        i, j = index[a], index[b]
        adj[i, j] += w
        adj[j, i] += w
    degrees = adj.sum(axis=1)
    active = [i for i in range(n_all) if degrees[i] > 0]
    isolated = [nodes[i] for i in range(n_all) if degrees[i] == 0]

    if not active:
        partition = [[n] for n in nodes]
        return CommunityResult(
            communities=tuple(tuple(c) for c in partition),
            modularity=modularity(graph, partition),
        )

    sub = adj[np.ix_(active, active)]
    deg = sub.sum(axis=1)
    p_matrix = sub / deg[:, None]
    p_t = np.linalg.matrix_power(p_matrix, t)
    n_active = len(active)

    # community state, keyed by community index
    members: dict[int, list[int]] = {c: [c] for c in range(n_active)}  # positions into `active`
    rows: dict[int, np.ndarray] = {c: p_t[c].copy() for c in range(n_active)}
    between: dict[int, dict[int, float]] = {c: {} for c in range(n_active)}
    for i in range(n_active):
        for j in range(i + 1, n_active):
            if sub[i, j] > 0:
                between[i][j] = float(sub[i, j])
                between[j][i] = float(sub[i, j])

    def delta_sigma(c1: int, c2: int) -> float:
        diff = rows[c1] - rows[c2]
        r2 = float(((diff * diff) / deg).sum())
        s1, s2 = len(members[c1]), len(members[c2])
        return (s1 * s2) / (s1 + s2) / n_active * r2

    def snapshot() -> list[list[str]]:
        part = [sorted(nodes[active[pos]] for pos in group) for group in members.values()]
        part += [[n] for n in isolated]
        return sorted(part)

    best_partition = snapshot()
    best_q = modularity(graph, best_partition)

    pair_cost: dict[tuple[int, int], float] = {}
    for c1, neigh in between.items():
        for c2 in neigh:
            if c1 < c2:
                pair_cost[(c1, c2)] = delta_sigma(c1, c2)

    next_id = n_active
    while pair_cost:
        (c1, c2), _ = min(pair_cost.items(), key=lambda kv: (kv[1], kv[0][0], kv[0][1]))
        merged = next_id
        next_id += 1
        s1, s2 = len(members[c1]), len(members[c2])
        members[merged] = members.pop(c1) + members.pop(c2)
        rows[merged] = (s1 * rows.pop(c1) + s2 * rows.pop(c2)) / (s1 + s2)

        neighbors: dict[int, float] = {}
        for old in (c1, c2):
            for other, w in between.pop(old).items():
                if other in (c1, c2):
                    continue
                neighbors[other] = neighbors.get(other, 0.0) + w
        between[merged] = {}
        for other, w in neighbors.items():
            between[merged][other] = w
            other_map = between[other]
            other_map.pop(c1, None)
            other_map.pop(c2, None)
            other_map[merged] = w

        stale = [key for key in pair_cost if c1 in key or c2 in key]
        for key in stale:
            del pair_cost[key]
        for other in between[merged]:
            key = (other, merged) if other < merged else (merged, other)
            pair_cost[key] = delta_sigma(other, merged)

        partition = snapshot()
        q = modularity(graph, partition)
        if q > best_q + 1e-12:
            best_q = q
            best_partition = partition

    return CommunityResult(
        communities=tuple(tuple(c) for c in best_partition),
        modularity=best_q,
    )

"""Structural and sentiment analytics over one knowledge graph.

Distances are unweighted hop counts on the largest connected component.
Community structure comes from a seeded two-phase greedy modularity
optimizer (local moves until no gain above GAIN_EPS, then aggregation,
repeated until stable); the reported modularity is always re-evaluated on
the original graph with the final partition, so the two code paths agree
exactly. Spearman uses fractional (average) ranks computed in exact
rational arithmetic, so perfectly monotone inputs give exactly +/-1.0.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import InputError, InternalError
from .graph import KnowledgeGraph

GAIN_EPS = 1e-9

POLARITY_BINS = 40
SUBJECTIVITY_BINS = 20

Partition = dict[str, int]


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceStats:
    radius: int
    diameter: int
    avg_path_length: float
    path_length_sum: int          # over unordered pairs in the component
    pair_count: int
    component_size: int
    component_count: int
    degenerate: bool              # single-vertex component: lengths undefined


def connected_components(graph: KnowledgeGraph) -> list[set[str]]:
    adj = graph.adjacency()
    seen: set[str] = set()
    components = []
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        seen.add(start)
        while queue:
            node = queue.popleft()
            for nbr in adj[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    comp.add(nbr)
                    queue.append(nbr)
        components.append(comp)
    return components


def largest_component(graph: KnowledgeGraph) -> tuple[set[str], int]:
    """Largest component by vertex count; ties by edge count, then by
    lexicographically smallest member. Returns (component, component count)."""
    components = connected_components(graph)
    if not components:
        raise InputError("graph is empty")

    def comp_edges(comp: set[str]) -> int:
        return sum(1 for u, v in graph.edges if u in comp)

    components.sort(key=lambda c: (-len(c), -comp_edges(c), min(c)))
    return components[0], len(components)


def _bfs_lengths(adj: dict[str, list[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        d = dist[node] + 1
        for nbr in adj[node]:
            if nbr not in dist:
                dist[nbr] = d
                queue.append(nbr)
    return dist


def eccentricity_stats(graph: KnowledgeGraph) -> DistanceStats:
    """Radius, diameter and mean shortest-path length (hop counts).

    Computed on the largest connected component; a single-vertex component
    reports (0, 0, 0.0) with the `degenerate` flag set.
    """
    component, n_components = largest_component(graph)
    if len(component) == 1:
        return DistanceStats(0, 0, 0.0, 0, 0, 1, n_components, True)
    adj = {v: nbrs for v, nbrs in graph.adjacency().items() if v in component}
    eccentricities = []
    total = 0
    for source in sorted(component):
        dist = _bfs_lengths(adj, source)
        if len(dist) != len(component):
            raise InternalError("BFS did not reach the whole component")
        eccentricities.append(max(dist.values()))
        total += sum(dist.values())
    path_sum = total // 2
    pairs = len(component) * (len(component) - 1) // 2
    return DistanceStats(
        radius=min(eccentricities),
        diameter=max(eccentricities),
        avg_path_length=path_sum / pairs,
        path_length_sum=path_sum,
        pair_count=pairs,
        component_size=len(component),
        component_count=n_components,
        degenerate=False,
    )


# ---------------------------------------------------------------------------
# Modularity and community detection
# ---------------------------------------------------------------------------

def _edge_weights(graph: KnowledgeGraph, weight_source: str) -> dict[tuple[str, str], float]:
    if weight_source == "frequency":
        return {pair: float(attrs.frequency) for pair, attrs in graph.edges.items()}
    if weight_source == "unit":
        return {pair: 1.0 for pair in graph.edges}
    raise InputError(f"unknown weight source {weight_source!r}")


def modularity_of(
    graph: KnowledgeGraph, partition: Partition, weight_source: str = "frequency"
) -> float:
    """Newman modularity Q of a partition.

    Q = sum over communities of (W_in/m - (tot/(2m))^2) with W_in the
    intra-community weight, tot the total degree of members, m the total
    edge weight. Equivalent to (1/2m) sum_ij (A_ij - k_i k_j / 2m) delta_ij.
    """
    missing = graph.vertices.keys() - partition.keys()
    if missing:
        raise InputError(f"partition does not cover all vertices (missing {len(missing)})")
    weights = _edge_weights(graph, weight_source)
    m = math.fsum(weights.values())
    if m <= 0:
        raise InputError("modularity undefined on an edgeless graph")
    degree: dict[str, float] = {v: 0.0 for v in graph.vertices}
    for (u, v), w in weights.items():
        degree[u] += w
        degree[v] += w
    internal: dict[int, float] = {}
    total: dict[int, float] = {}
    for (u, v), w in weights.items():
        if partition[u] == partition[v]:
            internal[partition[u]] = internal.get(partition[u], 0.0) + w
    for v in graph.vertices:
        c = partition[v]
        total[c] = total.get(c, 0.0) + degree[v]
    two_m = 2.0 * m
    terms = [
        internal.get(c, 0.0) / m - (total[c] / two_m) ** 2 for c in sorted(total)
    ]
    return math.fsum(terms)


class _LevelGraph:
    """Working graph for one aggregation level (nodes are ints)."""

    def __init__(self, n: int, edges: dict[tuple[int, int], float], loops: dict[int, float]):
        self.n = n
        self.edges = edges
        self.loops = loops
        self.adj: dict[int, dict[int, float]] = {i: {} for i in range(n)}
        for (u, v), w in edges.items():
            self.adj[u][v] = self.adj[u].get(v, 0.0) + w
            self.adj[v][u] = self.adj[v].get(u, 0.0) + w
        self.degree = {
            i: math.fsum(self.adj[i].values()) + 2.0 * loops.get(i, 0.0) for i in range(n)
        }
        self.m = math.fsum(edges.values()) + math.fsum(loops.values())


def _one_level(g: _LevelGraph, rng: random.Random) -> tuple[dict[int, int], bool]:
    """Local-moving phase; returns (node -> community, any move happened)."""
    community = {i: i for i in range(g.n)}
    com_total = dict(g.degree)
    moved_any = False
    improved = True
    while improved:
        improved = False
        order = list(range(g.n))
        rng.shuffle(order)
        for node in order:
            old = community[node]
            neigh_w: dict[int, float] = {}
            for nbr, w in g.adj[node].items():
                c = community[nbr]
                neigh_w[c] = neigh_w.get(c, 0.0) + w
            com_total[old] -= g.degree[node]
            k = g.degree[node]
            two_m_sq = 2.0 * g.m * g.m

            def gain(c: int) -> float:
                return neigh_w.get(c, 0.0) / g.m - com_total[c] * k / two_m_sq

            stay_gain = gain(old)
            best, best_delta = old, 0.0
            for c in sorted(neigh_w):
                if c == old:
                    continue
                delta = gain(c) - stay_gain
                if delta > best_delta and delta > GAIN_EPS:
                    best, best_delta = c, delta
            community[node] = best
            com_total[best] += g.degree[node]
            if best != old:
                improved = True
                moved_any = True
    return community, moved_any


def _aggregate(g: _LevelGraph, community: dict[int, int]) -> tuple[_LevelGraph, dict[int, int]]:
    labels = sorted(set(community.values()))
    renum = {c: i for i, c in enumerate(labels)}
    mapping = {node: renum[c] for node, c in community.items()}
    edges: dict[tuple[int, int], float] = {}
    loops: dict[int, float] = {}
    for (u, v), w in g.edges.items():
        cu, cv = mapping[u], mapping[v]
        if cu == cv:
            loops[cu] = loops.get(cu, 0.0) + w
        else:
            key = (cu, cv) if cu < cv else (cv, cu)
            edges[key] = edges.get(key, 0.0) + w
    for node, w in g.loops.items():
        c = mapping[node]
        loops[c] = loops.get(c, 0.0) + w
    return _LevelGraph(len(labels), edges, loops), mapping


def louvain(
    graph: KnowledgeGraph,
    weight_source: str = "frequency",
    seed: int = 0,
    trace: list[float] | None = None,
) -> tuple[Partition, float]:
    """Two-phase greedy modularity maximization (seeded, deterministic).

    Vertex visit order is a seeded pseudorandom permutation per pass. The
    returned Q is modularity_of(graph, partition), evaluated on the original
    graph, so it matches the standalone evaluator bit for bit. Passing a
    list as `trace` records Q after every aggregation level (diagnostic).
    """
    if not graph.edges:
        raise InputError("community detection needs at least one edge")
    names = sorted(graph.vertices)
    index = {v: i for i, v in enumerate(names)}
    weights = _edge_weights(graph, weight_source)
    edges = {(index[u], index[v]): w for (u, v), w in weights.items()}
    level = _LevelGraph(len(names), edges, {})
    rng = random.Random(seed)

    node_to_comm = {i: i for i in range(len(names))}  # original index -> current node
    while True:
        community, moved = _one_level(level, rng)
        if not moved:
            break
        level, mapping = _aggregate(level, community)
        node_to_comm = {orig: mapping[cur] for orig, cur in node_to_comm.items()}
        if trace is not None:
            trace.append(
                modularity_of(
                    graph,
                    {v: node_to_comm[index[v]] for v in names},
                    weight_source,
                )
            )
        if level.n == 1:
            break

    # Renumber communities 0..k-1 in order of first appearance over sorted names.
    partition: Partition = {}
    renum: dict[int, int] = {}
    for v in names:
        c = node_to_comm[index[v]]
        if c not in renum:
            renum[c] = len(renum)
        partition[v] = renum[c]
    q = modularity_of(graph, partition, weight_source)
    return partition, q


# ---------------------------------------------------------------------------
# Sentiment statistics
# ---------------------------------------------------------------------------

def fractional_ranks(values: list[float]) -> list[Fraction]:
    """1-based ranks; tied values share the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = Fraction(i + 1 + j + 1, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman(xs: list[float], ys: list[float]) -> float | None:
    """Spearman rank correlation with average-rank tie handling.

    Returns None when undefined (fewer than two points, or constant ranks
    in either variable). Monotone inputs give exactly +/-1.0: the rank
    covariance arithmetic is exact rationals, floats only enter at the
    final division.
    """
    if len(xs) != len(ys):
        raise InputError("spearman needs equal-length sequences")
    if len(xs) < 2:
        return None
    rx = fractional_ranks(xs)
    ry = fractional_ranks(ys)
    n = len(xs)
    mean_x = sum(rx, Fraction(0)) / n
    mean_y = sum(ry, Fraction(0)) / n
    dx = [r - mean_x for r in rx]
    dy = [r - mean_y for r in ry]
    sxx = sum((d * d for d in dx), Fraction(0))
    syy = sum((d * d for d in dy), Fraction(0))
    if sxx == 0 or syy == 0:
        return None
    sxy = sum((a * b for a, b in zip(dx, dy)), Fraction(0))
    if sxy * sxy == sxx * syy:
        return 1.0 if sxy > 0 else -1.0
    return float(sxy) / math.sqrt(float(sxx) * float(syy))


def histogram(values: list[float], lo: float, hi: float, bins: int) -> list[int]:
    """Fixed-bin counts over [lo, hi], right-closed; bin 0 includes lo."""
    counts = [0] * bins
    span = hi - lo
    for x in values:
        idx = math.ceil((x - lo) * bins / span) - 1
        counts[min(max(idx, 0), bins - 1)] += 1
    return counts


@dataclass(frozen=True)
class SentimentStats:
    avg_polarity: float
    avg_subjectivity: float
    spearman_pol_subj: float | None
    polarity_histogram: list[int]
    subjectivity_histogram: list[int]


def sentiment_stats(graph: KnowledgeGraph) -> SentimentStats:
    """Edge-level sentiment averages, histograms, and rank correlation.

    Averages are unweighted over edges. A constant polarity or subjectivity
    column makes Spearman undefined (None), never 0.
    """
    if not graph.edges:
        raise InputError("sentiment statistics need at least one edge")
    ordered = sorted(graph.edges)
    pols = [graph.edges[pair].polarity for pair in ordered]
    subs = [graph.edges[pair].subjectivity for pair in ordered]
    n = len(ordered)
    return SentimentStats(
        avg_polarity=math.fsum(pols) / n + 0.0,
        avg_subjectivity=math.fsum(subs) / n + 0.0,
        spearman_pol_subj=spearman(pols, subs),
        polarity_histogram=histogram(pols, -1.0, 1.0, POLARITY_BINS),
        subjectivity_histogram=histogram(subs, 0.0, 1.0, SUBJECTIVITY_BINS),
    )


# ---------------------------------------------------------------------------
# Combined summary
# ---------------------------------------------------------------------------

@dataclass
class GraphSummary:
    source_label: str
    vertex_count: int
    edge_count: int
    component_count: int
    component_size: int
    radius: int
    diameter: int
    avg_path_length: float
    path_length_degenerate: bool
    modularity: float | None
    community_count: int
    partition: Partition = field(default_factory=dict)
    avg_polarity: float = 0.0
    avg_subjectivity: float = 0.0
    spearman_pol_subj: float | None = None
    polarity_histogram: list[int] = field(default_factory=list)
    subjectivity_histogram: list[int] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "source_label": self.source_label,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "component_count": self.component_count,
            "largest_component_size": self.component_size,
            "radius": self.radius,
            "diameter": self.diameter,
            "avg_path_length": self.avg_path_length,
            "path_length_degenerate": self.path_length_degenerate,
            "modularity": self.modularity,
            "community_count": self.community_count,
            "avg_polarity": self.avg_polarity,
            "avg_subjectivity": self.avg_subjectivity,
            "spearman_pol_subj": self.spearman_pol_subj,
            "polarity_histogram": self.polarity_histogram,
            "subjectivity_histogram": self.subjectivity_histogram,
            "partition": {v: self.partition[v] for v in sorted(self.partition)},
            "config": self.config,
        }


def summarize(
    graph: KnowledgeGraph, weight_source: str = "frequency", seed: int = 0
) -> GraphSummary:
    """Full per-graph summary; edgeless graphs yield a partial one with flags."""
    if not graph.vertices:
        raise InputError("graph is empty")
    dist = eccentricity_stats(graph)
    if graph.edges:
        partition, q = louvain(graph, weight_source=weight_source, seed=seed)
        sent = sentiment_stats(graph)
        community_count = len(set(partition.values()))
    else:
        partition, q = {v: i for i, v in enumerate(sorted(graph.vertices))}, None
        sent = SentimentStats(0.0, 0.0, None, [0] * POLARITY_BINS, [0] * SUBJECTIVITY_BINS)
        community_count = len(partition)
    return GraphSummary(
        source_label=graph.source_label,
        vertex_count=len(graph.vertices),
        edge_count=len(graph.edges),
        component_count=dist.component_count,
        component_size=dist.component_size,
        radius=dist.radius,
        diameter=dist.diameter,
        avg_path_length=dist.avg_path_length,
        path_length_degenerate=dist.degenerate,
        modularity=q,
        community_count=community_count,
        partition=partition,
        avg_polarity=sent.avg_polarity,
        avg_subjectivity=sent.avg_subjectivity,
        spearman_pol_subj=sent.spearman_pol_subj,
        polarity_histogram=sent.polarity_histogram,
        subjectivity_histogram=sent.subjectivity_histogram,
        config={
            "weight_source": weight_source,
            "seed": seed,
            "graph_build_config": dict(graph.build_config),
        },
    )

"""Cross-source divergence: contrast edges and contrast vertices.

A contrast edge is a shared entity pair whose polarity has strictly
opposite signs in the two graphs (zero counts as signless). A contrast
vertex is a shared entity whose mean adjacent-edge polarity differs
between the sources; the signed difference of those per-source means is
its contrast score, so swapping the graphs negates every score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import InputError
from .graph import KnowledgeGraph

DEFAULT_MIN_EDGE_FREQ = 3
DEFAULT_MIN_ABS_POLARITY = 0.05
DEFAULT_MIN_DEGREE = 3


@dataclass(frozen=True)
class ContrastEdge:
    pair: tuple[str, str]
    polarity_a: float
    polarity_b: float
    frequency_a: int
    frequency_b: int

    @property
    def divergence(self) -> float:
        return abs(self.polarity_a - self.polarity_b)


@dataclass(frozen=True)
class ContrastVertex:
    entity: str
    mean_adjacent_polarity_a: float
    mean_adjacent_polarity_b: float

    @property
    def contrast_score(self) -> float:
        return self.mean_adjacent_polarity_a - self.mean_adjacent_polarity_b

    @property
    def lean(self) -> str:
        return "A" if self.contrast_score > 0 else "B"


@dataclass
class ContrastReport:
    source_a: str
    source_b: str
    edge_items: list[ContrastEdge] = field(default_factory=list)
    vertex_items: list[ContrastVertex] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "source_a": self.source_a,
            "source_b": self.source_b,
            "config": self.config,
            "edge_items": [
                {
                    "source": e.pair[0],
                    "target": e.pair[1],
                    "polarity_a": e.polarity_a,
                    "polarity_b": e.polarity_b,
                    "frequency_a": e.frequency_a,
                    "frequency_b": e.frequency_b,
                    "divergence": e.divergence,
                }
                for e in self.edge_items
            ],
            "vertex_items": [
                {
                    "entity": v.entity,
                    "mean_adjacent_polarity_a": v.mean_adjacent_polarity_a,
                    "mean_adjacent_polarity_b": v.mean_adjacent_polarity_b,
                    "contrast_score": v.contrast_score,
                    "lean": v.lean,
                }
                for v in self.vertex_items
            ],
        }


def align(
    graph_a: KnowledgeGraph, graph_b: KnowledgeGraph
) -> tuple[set[str], set[tuple[str, str]]]:
    """Shared canonical vertices and shared unordered edge pairs."""
    shared_vertices = graph_a.vertices.keys() & graph_b.vertices.keys()
    shared_edges = graph_a.edges.keys() & graph_b.edges.keys()
    return set(shared_vertices), set(shared_edges)


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def contrast_edges(
    graph_a: KnowledgeGraph,
    graph_b: KnowledgeGraph,
    min_freq: int = DEFAULT_MIN_EDGE_FREQ,
    min_abs_pol: float = DEFAULT_MIN_ABS_POLARITY,
) -> list[ContrastEdge]:
    """Shared edges with strictly opposite polarity signs in the two graphs.

    Both polarities must clear `min_abs_pol` (suppressing sign flips inside
    scorer noise) and both frequencies must reach `min_freq`. Sorted by
    polarity divergence, largest first; ties lexicographic by pair.
    """
    if min_freq < 1:
        raise InputError("min_freq must be >= 1")
    if min_abs_pol < 0:
        raise InputError("min_abs_pol must be >= 0")
    _, shared = align(graph_a, graph_b)
    items = []
    for pair in shared:
        ea, eb = graph_a.edges[pair], graph_b.edges[pair]
        if (
            _sign(ea.polarity) * _sign(eb.polarity) < 0
            and abs(ea.polarity) >= min_abs_pol
            and abs(eb.polarity) >= min_abs_pol
            and ea.frequency >= min_freq
            and eb.frequency >= min_freq
        ):
            items.append(ContrastEdge(pair, ea.polarity, eb.polarity, ea.frequency, eb.frequency))
    items.sort(key=lambda e: (-e.divergence, e.pair))
    return items


def _mean_adjacent_polarity(graph: KnowledgeGraph, vertex: str) -> tuple[float, int]:
    pols = [attrs.polarity for pair, attrs in sorted(graph.edges.items()) if vertex in pair]
    if not pols:
        return 0.0, 0
    return math.fsum(pols) / len(pols) + 0.0, len(pols)


def contrast_vertices(
    graph_a: KnowledgeGraph,
    graph_b: KnowledgeGraph,
    min_degree: int = DEFAULT_MIN_DEGREE,
    top_k: int = 25,
) -> list[ContrastVertex]:
    """Shared vertices ranked by |difference of mean adjacent polarity|.

    Only vertices with degree >= `min_degree` in both graphs are eligible;
    zero-score vertices carry no lean and are excluded. Ties break
    lexicographically by entity name.
    """
    if min_degree < 1 or top_k < 1:
        raise InputError("min_degree and top_k must be >= 1")
    shared, _ = align(graph_a, graph_b)
    items = []
    for entity in shared:
        mean_a, deg_a = _mean_adjacent_polarity(graph_a, entity)
        mean_b, deg_b = _mean_adjacent_polarity(graph_b, entity)
        if deg_a < min_degree or deg_b < min_degree:
            continue
        item = ContrastVertex(entity, mean_a, mean_b)
        if item.contrast_score != 0.0:
            items.append(item)
    items.sort(key=lambda v: (-abs(v.contrast_score), v.entity))
    return items[:top_k]


@dataclass
class ContrastSubgraph:
    """Induced contrast structure with per-source attributes, ready to export."""

    source_a: str
    source_b: str
    vertices: dict[str, dict] = field(default_factory=dict)
    edges: dict[tuple[str, str], dict] = field(default_factory=dict)


def contrast_subgraph(
    edge_items: list[ContrastEdge],
    vertex_items: list[ContrastVertex],
    graph_a: KnowledgeGraph,
    graph_b: KnowledgeGraph,
) -> ContrastSubgraph:
    """Bundle contrast items into one exportable dual-attribute structure."""
    sub = ContrastSubgraph(source_a=graph_a.source_label, source_b=graph_b.source_label)

    def add_vertex(name: str) -> None:
        if name not in sub.vertices:
            sub.vertices[name] = {
                "weight_a": graph_a.vertices.get(name, 0),
                "weight_b": graph_b.vertices.get(name, 0),
            }

    for item in edge_items:
        add_vertex(item.pair[0])
        add_vertex(item.pair[1])
        sub.edges[item.pair] = {
            "polarity_a": item.polarity_a,
            "polarity_b": item.polarity_b,
            "frequency_a": item.frequency_a,
            "frequency_b": item.frequency_b,
        }
    for item in vertex_items:
        add_vertex(item.entity)
        sub.vertices[item.entity].update(
            {
                "contrast_score": item.contrast_score,
                "lean": item.lean,
            }
        )
    return sub


def contrast_report(
    graph_a: KnowledgeGraph,
    graph_b: KnowledgeGraph,
    min_freq: int = DEFAULT_MIN_EDGE_FREQ,
    min_abs_pol: float = DEFAULT_MIN_ABS_POLARITY,
    min_degree: int = DEFAULT_MIN_DEGREE,
    top_k: int = 25,
) -> ContrastReport:
    edges = contrast_edges(graph_a, graph_b, min_freq=min_freq, min_abs_pol=min_abs_pol)
    vertices = contrast_vertices(graph_a, graph_b, min_degree=min_degree, top_k=top_k)
    return ContrastReport(
        source_a=graph_a.source_label,
        source_b=graph_b.source_label,
        edge_items=edges,
        vertex_items=vertices,
        config={
            "min_freq": min_freq,
            "min_abs_pol": min_abs_pol,
            "min_degree": min_degree,
            "top_k": top_k,
        },
    )

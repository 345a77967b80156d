"""Knowledge-graph construction from annotations plus an alias table.

Vertices are canonical entities weighted by mention count; undirected edges
carry a co-mention frequency and the mean polarity/subjectivity of their
supporting sentences. Per-sentence entity sets expand to pairwise cliques
(`sentence_cooccurrence`) or to argument pairs of each extracted relation
(`relation_pair`).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from . import InputError, InternalError, __version__
from .annotate import SentenceAnnotation, admissible_entities
from .canon import AliasTable
from .text import contains_token_seq, normalize_surface

log = logging.getLogger("mediagraph")

EDGE_MODES = ("auto", "sentence_cooccurrence", "relation_pair")
ADMISSION_MODES = ("intersection", "union")


@dataclass(frozen=True)
class EdgeAttrs:
    frequency: int
    polarity: float
    subjectivity: float


@dataclass
class KnowledgeGraph:
    source_label: str
    vertices: dict[str, int] = field(default_factory=dict)
    edges: dict[tuple[str, str], EdgeAttrs] = field(default_factory=dict)
    build_config: dict = field(default_factory=dict)

    def degree(self, vertex: str) -> int:
        return sum(1 for pair in self.edges if vertex in pair)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def incident_edges(self, vertex: str) -> list[tuple[tuple[str, str], EdgeAttrs]]:
        return [(pair, attrs) for pair, attrs in self.edges.items() if vertex in pair]

    def validate(self) -> None:
        for (u, v), attrs in self.edges.items():
            if u == v:
                raise InternalError(f"self-loop on {u!r}")
            if u not in self.vertices or v not in self.vertices:
                raise InternalError(f"edge ({u!r}, {v!r}) has a missing endpoint")
            if attrs.frequency < 1:
                raise InternalError(f"edge ({u!r}, {v!r}) frequency < 1")
            if not -1.0 <= attrs.polarity <= 1.0 or not 0.0 <= attrs.subjectivity <= 1.0:
                raise InternalError(f"edge ({u!r}, {v!r}) attribute out of range")
        for v, w in self.vertices.items():
            if w < 1:
                raise InternalError(f"vertex {v!r} weight < 1")


def edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def _relation_pairs(
    annotation: SentenceAnnotation, admitted: set[str], table: AliasTable
) -> list[tuple[str, str]]:
    """Canonical pairs (c0, c1) with an admitted entity in each argument.

    Each relation contributes a canonical pair at most once, but several
    relations in one sentence each contribute their own co-mention.
    """
    pairs: list[tuple[str, str]] = []
    ent_tokens = {e: e.split() for e in admitted}
    for rel in annotation.relations:
        arg0 = normalize_surface(rel.arg0_surface).split()
        arg1 = normalize_surface(rel.arg1_surface).split()
        in0 = {e for e, toks in ent_tokens.items() if contains_token_seq(toks, arg0)}
        in1 = {e for e, toks in ent_tokens.items() if contains_token_seq(toks, arg1)}
        rel_pairs = set()
        for e0 in in0:
            c0 = table.resolve(e0)
            if c0 is None:
                continue
            for e1 in in1:
                c1 = table.resolve(e1)
                if c1 is None or c0 == c1:
                    continue
                rel_pairs.add(edge_key(c0, c1))
        pairs.extend(sorted(rel_pairs))
    return pairs


def build_graph(
    annotations: list[SentenceAnnotation],
    table: AliasTable,
    source_label: str,
    edge_mode: str = "auto",
    admission_mode: str = "intersection",
) -> KnowledgeGraph:
    """Assemble the per-source graph from annotated sentences.

    Vertex weight counts one mention per canonical entity per sentence it
    appears in. Edge polarity/subjectivity are unweighted means over
    supporting sentences; sums use math.fsum, so the result is identical
    under any permutation of the annotation list.
    """
    if edge_mode not in EDGE_MODES:
        raise InputError(f"unknown edge mode {edge_mode!r}")
    if admission_mode not in ADMISSION_MODES:
        raise InputError(f"unknown admission mode {admission_mode!r}")
    oie_available = any(a.relations for a in annotations)
    if edge_mode == "auto":
        edge_mode = "relation_pair" if oie_available else "sentence_cooccurrence"

    weights: dict[str, int] = {}
    contributions: dict[tuple[str, str], list[tuple[float, float]]] = {}
    unknown_surfaces: set[str] = set()

    for ann in annotations:
        admitted = admissible_entities(ann, admission_mode, oie_available=oie_available)
        canon_set: set[str] = set()
        for surface in admitted:
            target = table.resolve(surface)
            if target is None:
                if surface not in table.dropped:
                    unknown_surfaces.add(surface)
                continue
            canon_set.add(target)
        for entity in canon_set:
            weights[entity] = weights.get(entity, 0) + 1
        if edge_mode == "sentence_cooccurrence":
            ordered = sorted(canon_set)
            pairs = {
                edge_key(ordered[i], ordered[j])
                for i in range(len(ordered))
                for j in range(i + 1, len(ordered))
            }
        else:
            pairs = _relation_pairs(ann, admitted, table)
        for pair in pairs:
            contributions.setdefault(pair, []).append((ann.polarity, ann.subjectivity))

    if unknown_surfaces:
        log.warning(
            "%d admitted surface(s) unknown to the alias table (first few: %s)",
            len(unknown_surfaces),
            ", ".join(sorted(unknown_surfaces)[:5]),
        )

    edges = {}
    for pair, samples in contributions.items():
        n = len(samples)
        polarity = math.fsum(p for p, _ in samples) / n + 0.0
        subjectivity = math.fsum(s for _, s in samples) / n + 0.0
        edges[pair] = EdgeAttrs(frequency=n, polarity=polarity, subjectivity=subjectivity)

    graph = KnowledgeGraph(
        source_label=source_label,
        vertices=weights,
        edges=edges,
        build_config={
            "edge_mode": edge_mode,
            "admission_mode": admission_mode,
            "oie_available": oie_available,
        },
    )
    graph.validate()
    return graph


def filter_graph(
    graph: KnowledgeGraph, min_vertex_weight: int = 1, min_edge_freq: int = 1
) -> KnowledgeGraph:
    """Drop light vertices/edges, then vertices the filter newly isolated.

    Vertices that were already edgeless in the input survive (if heavy
    enough); only vertices that lose their last edge here are pruned.
    """
    if min_vertex_weight < 1 or min_edge_freq < 1:
        raise InputError("filter thresholds must be >= 1")
    had_edges = {v for pair in graph.edges for v in pair}
    vertices = {v: w for v, w in graph.vertices.items() if w >= min_vertex_weight}
    edges = {
        pair: attrs
        for pair, attrs in graph.edges.items()
        if attrs.frequency >= min_edge_freq and pair[0] in vertices and pair[1] in vertices
    }
    still_connected = {v for pair in edges for v in pair}
    vertices = {
        v: w for v, w in vertices.items() if v in still_connected or v not in had_edges
    }
    config = dict(graph.build_config)
    config.update({"min_vertex_weight": min_vertex_weight, "min_edge_freq": min_edge_freq})
    out = KnowledgeGraph(
        source_label=graph.source_label,
        vertices=vertices,
        edges=edges,
        build_config=config,
    )
    out.validate()
    return out


# ---------------------------------------------------------------------------
# Native JSON file format (lossless, byte-stable)
# ---------------------------------------------------------------------------

def graph_to_obj(graph: KnowledgeGraph) -> dict:
    return {
        "meta": {
            "format": "mediagraph-graph/1",
            "tool_version": __version__,
            "source_label": graph.source_label,
            "build_config": graph.build_config,
        },
        "vertices": [
            {"name": v, "weight": graph.vertices[v]} for v in sorted(graph.vertices)
        ],
        "edges": [
            {
                "source": u,
                "target": v,
                "frequency": graph.edges[(u, v)].frequency,
                "polarity": graph.edges[(u, v)].polarity,
                "subjectivity": graph.edges[(u, v)].subjectivity,
            }
            for u, v in sorted(graph.edges)
        ],
    }


def save_graph(graph: KnowledgeGraph, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_obj(graph), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_graph(path: str | Path) -> KnowledgeGraph:
    path = Path(path)
    try:
        obj = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed graph file: {exc.msg}", path=path) from exc
    try:
        meta = obj["meta"]
        vertices = {rec["name"]: int(rec["weight"]) for rec in obj["vertices"]}
        edges = {}
        for rec in obj["edges"]:
            pair = edge_key(rec["source"], rec["target"])
            edges[pair] = EdgeAttrs(
                frequency=int(rec["frequency"]),
                polarity=float(rec["polarity"]),
                subjectivity=float(rec["subjectivity"]),
            )
        graph = KnowledgeGraph(
            source_label=meta["source_label"],
            vertices=vertices,
            edges=edges,
            build_config=dict(meta.get("build_config", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"graph file missing or bad field: {exc}", path=path) from exc
    graph.validate()
    return graph

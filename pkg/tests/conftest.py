import json
from pathlib import Path

import pytest

from mediagraph.annotate import SentenceAnnotation
from mediagraph.graph import EdgeAttrs, KnowledgeGraph, edge_key


def write_jsonl(path: Path, records) -> Path:
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path


def make_graph(edge_specs, label="T", extra_vertices=(), weights=None):
    """Graph from (u, v, freq, pol, subj) tuples; vertex weights default to 1."""
    vertices: dict[str, int] = {}
    edges = {}
    for spec in edge_specs:
        u, v = spec[0], spec[1]
        freq = spec[2] if len(spec) > 2 else 1
        pol = spec[3] if len(spec) > 3 else 0.0
        subj = spec[4] if len(spec) > 4 else 0.0
        vertices.setdefault(u, 1)
        vertices.setdefault(v, 1)
        edges[edge_key(u, v)] = EdgeAttrs(freq, pol, subj)
    for v in extra_vertices:
        vertices.setdefault(v, 1)
    if weights:
        vertices.update(weights)
    return KnowledgeGraph(source_label=label, vertices=vertices, edges=edges, build_config={})


def ann(article_id, idx, entities=(), relations=(), polarity=0.0, subjectivity=0.0):
    """Shorthand SentenceAnnotation: entities as normalized strings."""
    from mediagraph.annotate import EntityMention, RelationMention

    ents = tuple(
        EntityMention(surface=e, normalized=e, start=0, end=max(1, len(e)), origin="NER")
        for e in entities
    )
    rels = tuple(RelationMention(a0, a1) for a0, a1 in relations)
    return SentenceAnnotation(
        article_id=article_id,
        sentence_index=idx,
        entities=ents,
        relations=rels,
        polarity=polarity,
        subjectivity=subjectivity,
    )


@pytest.fixture
def tmp_jsonl(tmp_path):
    def _write(records, name="corpus.jsonl"):
        return write_jsonl(tmp_path / name, records)

    return _write

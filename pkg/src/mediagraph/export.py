"""Graph serializers: GEXF 1.3, GraphML, DOT, CSV, and the native JSON format.

All writers emit elements in sorted order (vertices lexicographic, edges by
endpoint pair) with no timestamps unless explicitly stamped, so identical
inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from . import InputError, __version__
from .contrast import ContrastSubgraph
from .graph import KnowledgeGraph, graph_to_obj
from .metrics import Partition

FORMATS = ("gexf", "graphml", "dot", "csv-edges", "csv-vertices", "json")
COLOR_MODES = ("none", "community", "lean")

# Distinguishable palette for community coloring, cycled by community id.
_PALETTE = [
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (214, 39, 40),
    (148, 103, 189), (140, 86, 75), (227, 119, 194), (127, 127, 127),
    (188, 189, 34), (23, 190, 207), (174, 199, 232), (255, 187, 120),
]
_LEAN_COLORS = {"A": (214, 69, 65), "B": (65, 105, 225)}


@dataclass(frozen=True)
class ExportSpec:
    format: str = "gexf"
    include_attrs: bool = True
    color_by: str = "none"
    stamp: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise InputError(f"unknown export format {self.format!r}")
        if self.color_by not in COLOR_MODES:
            raise InputError(f"unknown color mode {self.color_by!r}")


@dataclass
class _Payload:
    """Format-independent view: ordered attribute dicts plus type schema."""

    description: str
    node_schema: list[tuple[str, str]]       # (name, type) with GEXF-style types
    edge_schema: list[tuple[str, str]]
    nodes: list[tuple[str, dict]]            # sorted by name
    edges: list[tuple[str, str, dict]]       # sorted by pair
    colors: dict[str, tuple[int, int, int]]  # node name -> rgb


def _gexf_type(value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "long"
    if isinstance(value, float):
        return "double"
    return "string"


def _make_payload(
    graph: KnowledgeGraph | ContrastSubgraph,
    partition: Partition | None,
    spec: ExportSpec,
) -> _Payload:
    if isinstance(graph, KnowledgeGraph):
        if spec.color_by == "lean":
            raise InputError("color_by=lean requires a contrast subgraph")
        nodes = []
        for name in sorted(graph.vertices):
            attrs: dict = {"weight": graph.vertices[name]}
            if partition is not None:
                if name not in partition:
                    raise InputError(f"partition is missing vertex {name!r}")
                attrs["community"] = partition[name]
            nodes.append((name, attrs))
        edges = [
            (
                u,
                v,
                {
                    "frequency": graph.edges[(u, v)].frequency,
                    "polarity": graph.edges[(u, v)].polarity,
                    "subjectivity": graph.edges[(u, v)].subjectivity,
                },
            )
            for u, v in sorted(graph.edges)
        ]
        description = f"source={graph.source_label}"
        if graph.build_config:
            description += " config=" + json.dumps(graph.build_config, sort_keys=True)
    else:
        nodes = [(name, dict(graph.vertices[name])) for name in sorted(graph.vertices)]
        edges = [(u, v, dict(graph.edges[(u, v)])) for u, v in sorted(graph.edges)]
        description = f"contrast A={graph.source_a} B={graph.source_b}"

    colors: dict[str, tuple[int, int, int]] = {}
    if spec.color_by == "community":
        if not all("community" in attrs for _, attrs in nodes):
            raise InputError("color_by=community needs a partition")
        for name, attrs in nodes:
            colors[name] = _PALETTE[attrs["community"] % len(_PALETTE)]
    elif spec.color_by == "lean":
        for name, attrs in nodes:
            if attrs.get("lean") in _LEAN_COLORS:
                colors[name] = _LEAN_COLORS[attrs["lean"]]

    if not spec.include_attrs:
        nodes = [(name, {}) for name, _ in nodes]
        edges = [(u, v, {}) for u, v, _ in edges]

    def schema(items: list[dict]) -> list[tuple[str, str]]:
        seen: dict[str, str] = {}
        for attrs in items:
            for key, value in attrs.items():
                seen.setdefault(key, _gexf_type(value))
        return sorted(seen.items())

    return _Payload(
        description=description,
        node_schema=schema([a for _, a in nodes]),
        edge_schema=schema([a for _, _, a in edges]),
        nodes=nodes,
        edges=edges,
        colors=colors,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_gexf(payload: _Payload, path: Path, stamp: bool) -> None:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        '<gexf xmlns="http://gexf.net/1.3" xmlns:viz="http://gexf.net/1.3/viz" version="1.3">'
    )
    meta = "  <meta"
    if stamp:
        meta += f' lastmodifieddate="{dt.date.today().isoformat()}"'
    lines.append(meta + ">")
    lines.append(f"    <creator>mediagraph {__version__}</creator>")
    lines.append(f"    <description>{escape(payload.description)}</description>")
    lines.append("  </meta>")
    lines.append('  <graph defaultedgetype="undirected">')
    for cls, schema in (("node", payload.node_schema), ("edge", payload.edge_schema)):
        if schema:
            lines.append(f'    <attributes class="{cls}">')
            for i, (name, typ) in enumerate(schema):
                lines.append(f'      <attribute id="{i}" title={quoteattr(name)} type="{typ}"/>')
            lines.append("    </attributes>")
    node_ids = {name: str(i) for i, (name, _) in enumerate(payload.nodes)}
    node_attr_id = {name: str(i) for i, (name, _) in enumerate(payload.node_schema)}
    edge_attr_id = {name: str(i) for i, (name, _) in enumerate(payload.edge_schema)}
    lines.append("    <nodes>")
    for name, attrs in payload.nodes:
        open_tag = f"      <node id={quoteattr(node_ids[name])} label={quoteattr(name)}"
        body = []
        if attrs:
            body.append("        <attvalues>")
            for key in sorted(attrs):
                body.append(
                    f"          <attvalue for={quoteattr(node_attr_id[key])} value={quoteattr(_fmt(attrs[key]))}/>"
                )
            body.append("        </attvalues>")
        if name in payload.colors:
            r, g, b = payload.colors[name]
            body.append(f'        <viz:color r="{r}" g="{g}" b="{b}"/>')
        if body:
            lines.append(open_tag + ">")
            lines.extend(body)
            lines.append("      </node>")
        else:
            lines.append(open_tag + "/>")
    lines.append("    </nodes>")
    lines.append("    <edges>")
    for idx, (u, v, attrs) in enumerate(payload.edges):
        weight = attrs.get("frequency", attrs.get("frequency_a"))
        open_tag = (
            f'      <edge id="{idx}" source={quoteattr(node_ids[u])} target={quoteattr(node_ids[v])}'
        )
        if weight is not None:
            open_tag += f' weight={quoteattr(_fmt(float(weight)))}'
        if attrs:
            lines.append(open_tag + ">")
            lines.append("        <attvalues>")
            for key in sorted(attrs):
                lines.append(
                    f"          <attvalue for={quoteattr(edge_attr_id[key])} value={quoteattr(_fmt(attrs[key]))}/>"
                )
            lines.append("        </attvalues>")
            lines.append("      </edge>")
        else:
            lines.append(open_tag + "/>")
    lines.append("    </edges>")
    lines.append("  </graph>")
    lines.append("</gexf>")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


_GRAPHML_TYPES = {"long": "long", "double": "double", "string": "string", "boolean": "boolean"}


def _write_graphml(payload: _Payload, path: Path) -> None:
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    lines.append(
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns" '
        'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
        'xsi:schemaLocation="http://graphml.graphdrawing.org/xmlns '
        'http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd">'
    )
    lines.append(f"  <desc>{escape(payload.description)}</desc>")
    key_ids: dict[tuple[str, str], str] = {}
    counter = 0
    for domain, schema in (("node", payload.node_schema), ("edge", payload.edge_schema)):
        for name, typ in schema:
            kid = f"d{counter}"
            counter += 1
            key_ids[(domain, name)] = kid
            lines.append(
                f'  <key id="{kid}" for="{domain}" attr.name={quoteattr(name)} '
                f'attr.type="{_GRAPHML_TYPES[typ]}"/>'
            )
    lines.append('  <graph id="G" edgedefault="undirected">')
    for name, attrs in payload.nodes:
        if attrs:
            lines.append(f"    <node id={quoteattr(name)}>")
            for key in sorted(attrs):
                lines.append(
                    f'      <data key="{key_ids[("node", key)]}">{escape(_fmt(attrs[key]))}</data>'
                )
            lines.append("    </node>")
        else:
            lines.append(f"    <node id={quoteattr(name)}/>")
    for idx, (u, v, attrs) in enumerate(payload.edges):
        lines.append(f'    <edge id="e{idx}" source={quoteattr(u)} target={quoteattr(v)}>')
        for key in sorted(attrs):
            lines.append(
                f'      <data key="{key_ids[("edge", key)]}">{escape(_fmt(attrs[key]))}</data>'
            )
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _write_dot(payload: _Payload, path: Path) -> None:
    lines = ["graph mediagraph {"]
    for name, attrs in payload.nodes:
        parts = [f"label={_dot_quote(name)}"]
        for key in sorted(attrs):
            parts.append(f"{key}={_dot_quote(_fmt(attrs[key]))}")
        if name in payload.colors:
            r, g, b = payload.colors[name]
            parts.append(f'color="#{r:02x}{g:02x}{b:02x}"')
        lines.append(f"  {_dot_quote(name)} [{', '.join(parts)}];")
    for u, v, attrs in payload.edges:
        if attrs:
            attr_str = ", ".join(f"{k}={_dot_quote(_fmt(attrs[k]))}" for k in sorted(attrs))
            lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)} [{attr_str}];")
        else:
            lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)};")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_csv_edges(payload: _Payload, path: Path) -> None:
    fields = [name for name, _ in payload.edge_schema]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", *fields])
        for u, v, attrs in payload.edges:
            writer.writerow([u, v, *[_fmt(attrs[f]) if f in attrs else "" for f in fields]])


def _write_csv_vertices(payload: _Payload, path: Path) -> None:
    fields = [name for name, _ in payload.node_schema]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", *fields])
        for name, attrs in payload.nodes:
            writer.writerow([name, *[_fmt(attrs[f]) if f in attrs else "" for f in fields]])


def _contrast_to_obj(graph: ContrastSubgraph) -> dict:
    return {
        "meta": {
            "format": "mediagraph-contrast-subgraph/1",
            "tool_version": __version__,
            "source_a": graph.source_a,
            "source_b": graph.source_b,
        },
        "vertices": [{"name": v, **graph.vertices[v]} for v in sorted(graph.vertices)],
        "edges": [
            {"source": u, "target": v, **graph.edges[(u, v)]} for u, v in sorted(graph.edges)
        ],
    }


def export_graph(
    graph: KnowledgeGraph | ContrastSubgraph,
    partition: Partition | None,
    spec: ExportSpec,
    path: str | Path,
) -> None:
    """Write `graph` to `path` in the format chosen by `spec`."""
    path = Path(path)
    if spec.format == "json":
        obj = graph_to_obj(graph) if isinstance(graph, KnowledgeGraph) else _contrast_to_obj(graph)
        if isinstance(graph, KnowledgeGraph) and partition is not None:
            obj["partition"] = {v: partition[v] for v in sorted(partition)}
        path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        return
    payload = _make_payload(graph, partition, spec)
    if spec.format == "gexf":
        _write_gexf(payload, path, spec.stamp)
    elif spec.format == "graphml":
        _write_graphml(payload, path)
    elif spec.format == "dot":
        _write_dot(payload, path)
    elif spec.format == "csv-edges":
        _write_csv_edges(payload, path)
    elif spec.format == "csv-vertices":
        _write_csv_vertices(payload, path)

import csv
import json
import re
import xml.etree.ElementTree as ET

import pytest

from mediagraph import InputError
from mediagraph.contrast import contrast_edges, contrast_report, contrast_subgraph
from mediagraph.export import ExportSpec, export_graph
from mediagraph.graph import load_graph

from conftest import make_graph

GEXF_NS = "{http://gexf.net/1.3}"
VIZ_NS = "{http://gexf.net/1.3/viz}"
GRAPHML_NS = "{http://graphml.graphdrawing.org/xmlns}"


@pytest.fixture
def small_graph():
    return make_graph(
        [("alpha", "beta", 2, 0.25, 0.5), ("beta", 'quote"name', 1, -0.75, 0.1)],
        label="DL",
        weights={"alpha": 3, "beta": 5, 'quote"name': 1},
    )


class TestGexf:
    def test_minimal_wellformed_gexf13(self, small_graph, tmp_path):
        path = tmp_path / "g.gexf"
        export_graph(small_graph, None, ExportSpec(format="gexf"), path)
        root = ET.parse(path).getroot()
        assert root.tag == f"{GEXF_NS}gexf"
        assert root.get("version") == "1.3"
        graph = root.find(f"{GEXF_NS}graph")
        assert graph.get("defaultedgetype") == "undirected"
        nodes = graph.find(f"{GEXF_NS}nodes").findall(f"{GEXF_NS}node")
        edges = graph.find(f"{GEXF_NS}edges").findall(f"{GEXF_NS}edge")
        assert len(nodes) == 3 and len(edges) == 2
        # attribute declarations are typed and referenced by id
        attr_decls = {
            a.get("id"): (a.get("title"), a.get("type"))
            for attrs in graph.findall(f"{GEXF_NS}attributes")
            if attrs.get("class") == "edge"
            for a in attrs.findall(f"{GEXF_NS}attribute")
        }
        assert ("frequency", "long") in attr_decls.values()
        assert ("polarity", "double") in attr_decls.values()
        for edge in edges:
            for av in edge.find(f"{GEXF_NS}attvalues").findall(f"{GEXF_NS}attvalue"):
                assert av.get("for") in attr_decls
        # node ids unique, labels carry the entity names
        ids = [n.get("id") for n in nodes]
        assert len(set(ids)) == len(ids)
        assert {n.get("label") for n in nodes} == set(small_graph.vertices)

    def test_no_timestamp_unless_stamped(self, small_graph, tmp_path):
        export_graph(small_graph, None, ExportSpec(format="gexf"), tmp_path / "a.gexf")
        assert "lastmodifieddate" not in (tmp_path / "a.gexf").read_text()
        export_graph(
            small_graph, None, ExportSpec(format="gexf", stamp=True), tmp_path / "b.gexf"
        )
        assert "lastmodifieddate" in (tmp_path / "b.gexf").read_text()

    def test_byte_identical_repeat(self, small_graph, tmp_path):
        spec = ExportSpec(format="gexf")
        export_graph(small_graph, None, spec, tmp_path / "a.gexf")
        export_graph(small_graph, None, spec, tmp_path / "b.gexf")
        assert (tmp_path / "a.gexf").read_bytes() == (tmp_path / "b.gexf").read_bytes()

    def test_community_coloring(self, small_graph, tmp_path):
        partition = {v: i % 2 for i, v in enumerate(sorted(small_graph.vertices))}
        path = tmp_path / "c.gexf"
        export_graph(
            small_graph, partition, ExportSpec(format="gexf", color_by="community"), path
        )
        root = ET.parse(path).getroot()
        colors = root.iter(f"{VIZ_NS}color")
        assert sum(1 for _ in colors) == 3

    def test_community_color_needs_partition(self, small_graph, tmp_path):
        with pytest.raises(InputError, match="partition"):
            export_graph(
                small_graph, None, ExportSpec(format="gexf", color_by="community"),
                tmp_path / "x.gexf",
            )

    def test_lean_color_needs_contrast_payload(self, small_graph, tmp_path):
        with pytest.raises(InputError, match="lean"):
            export_graph(
                small_graph, None, ExportSpec(format="gexf", color_by="lean"),
                tmp_path / "x.gexf",
            )


class TestGraphml:
    def test_structure_and_keys(self, small_graph, tmp_path):
        path = tmp_path / "g.graphml"
        export_graph(small_graph, None, ExportSpec(format="graphml"), path)
        root = ET.parse(path).getroot()
        assert root.tag == f"{GRAPHML_NS}graphml"
        keys = {k.get("id"): k for k in root.findall(f"{GRAPHML_NS}key")}
        graph = root.find(f"{GRAPHML_NS}graph")
        assert graph.get("edgedefault") == "undirected"
        for node in graph.findall(f"{GRAPHML_NS}node"):
            for data in node.findall(f"{GRAPHML_NS}data"):
                assert data.get("key") in keys
        for edge in graph.findall(f"{GRAPHML_NS}edge"):
            assert edge.get("source") in small_graph.vertices
            for data in edge.findall(f"{GRAPHML_NS}data"):
                assert data.get("key") in keys
        names = {k.get("attr.name") for k in keys.values()}
        assert {"weight", "frequency", "polarity", "subjectivity"} <= names


class TestDot:
    def test_parseable_structure(self, small_graph, tmp_path):
        path = tmp_path / "g.dot"
        export_graph(small_graph, None, ExportSpec(format="dot"), path)
        text = path.read_text()
        assert text.startswith("graph ") and text.rstrip().endswith("}")
        assert text.count("{") == text.count("}") == 1
        # one node statement per vertex, one edge statement per edge
        assert len(re.findall(r"^\s+\"[^\n]*\[label=", text, re.M)) == 3
        assert len(re.findall(r" -- ", text)) == 2
        # embedded quote must be escaped inside quoted ids
        assert '"quote\\"name"' in text

    def test_no_attrs_flag(self, small_graph, tmp_path):
        path = tmp_path / "g.dot"
        export_graph(small_graph, None, ExportSpec(format="dot", include_attrs=False), path)
        assert "frequency" not in path.read_text()


class TestCsv:
    def test_edges_rfc4180(self, small_graph, tmp_path):
        path = tmp_path / "edges.csv"
        export_graph(small_graph, None, ExportSpec(format="csv-edges"), path)
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["source", "target", "frequency", "polarity", "subjectivity"]
        assert len(rows) == 3
        assert rows[1][:2] == ["alpha", "beta"]
        raw = path.read_bytes()
        assert b"\r\n" in raw  # RFC 4180 line endings
        assert b'"quote""name"' in raw  # doubled-quote escaping

    def test_vertices_csv(self, small_graph, tmp_path):
        path = tmp_path / "vertices.csv"
        export_graph(small_graph, None, ExportSpec(format="csv-vertices"), path)
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["name", "weight"]
        assert [r[0] for r in rows[1:]] == sorted(small_graph.vertices)


class TestJsonNative:
    def test_roundtrip_equality(self, small_graph, tmp_path):
        path = tmp_path / "g.json"
        export_graph(small_graph, None, ExportSpec(format="json"), path)
        assert load_graph(path) == small_graph

    def test_partition_embedded(self, small_graph, tmp_path):
        partition = {v: 0 for v in small_graph.vertices}
        path = tmp_path / "g.json"
        export_graph(small_graph, partition, ExportSpec(format="json"), path)
        assert json.loads(path.read_text())["partition"] == partition


class TestContrastExport:
    def test_dual_attribute_gexf(self, tmp_path):
        a = make_graph([("x", "y", 4, 0.3, 0.1)])
        b = make_graph([("x", "y", 6, -0.2, 0.1)])
        report = contrast_report(a, b, min_freq=1, min_abs_pol=0.05, min_degree=1, top_k=3)
        sub = contrast_subgraph(report.edge_items, report.vertex_items, a, b)
        path = tmp_path / "c.gexf"
        export_graph(sub, None, ExportSpec(format="gexf", color_by="lean"), path)
        text = path.read_text()
        assert "polarity_a" in text and "polarity_b" in text
        ET.parse(path)  # well-formed

    def test_unknown_format_rejected(self):
        with pytest.raises(InputError):
            ExportSpec(format="urdf")

"""Command-line pipeline: ingest-check, annotate, build-graph, metrics,
contrast, export, aliases.

Stages communicate only through files (article JSONL, annotation JSONL,
graph JSON), so each stage can be re-run, tested, or replaced (e.g. by an
external annotator) independently. Every command is deterministic given
its inputs, seed and flags; worker-thread count never changes output.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from collections import Counter
from pathlib import Path

from . import InputError, InternalError, MediagraphError, __version__
from .annotate import (
    ORIGIN_NER,
    annotate_builtin,
    import_annotations,
    read_annotation_header,
    write_annotations,
)
from .canon import (
    DEFAULT_MIN_CHILD_FREQ,
    DEFAULT_MIN_PARENT_FREQ,
    build_alias_table,
    load_blocklist,
)
from .contrast import (
    DEFAULT_MIN_ABS_POLARITY,
    DEFAULT_MIN_DEGREE,
    DEFAULT_MIN_EDGE_FREQ,
    contrast_report,
    contrast_subgraph,
)
from .corpus import article_sentences, load_corpus
from .export import ExportSpec, export_graph
from .graph import build_graph, filter_graph, load_graph, save_graph
from .metrics import summarize
from .sentiment import load_lexicon

log = logging.getLogger("mediagraph")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; bad usage is an input error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_config_file(path: str) -> dict[str, str]:
    """Parse a `key = value` config file mirroring the long flag names."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError("expected key=value", path=path, line=lineno)
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _mention_multiset(annotations) -> Counter:
    """Normalized NER mention counts feeding the alias table."""
    counts: Counter = Counter()
    for ann in annotations:
        for ent in ann.entities:
            if ent.origin == ORIGIN_NER:
                counts[ent.normalized] += 1
    return counts


def _build_table(annotations, args):
    blocklist = load_blocklist(args.blocklist) if args.blocklist else frozenset()
    return build_alias_table(
        _mention_multiset(annotations),
        min_parent_freq=args.min_parent_freq,
        min_child_freq=args.min_child_freq,
        blocklist=blocklist,
    )


def cmd_ingest_check(args) -> int:
    corpus = load_corpus(args.corpus, source_label=args.source_label)
    sentence_count = sum(len(article_sentences(a, args.include_title)) for a in corpus.articles)
    dates = [a.published_date for a in corpus.articles if a.published_date]
    report = {
        "source_label": corpus.source_label,
        "articles": len(corpus),
        "sentences": sentence_count,
        "date_min": min(dates).isoformat() if dates else None,
        "date_max": max(dates).isoformat() if dates else None,
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_annotate(args) -> int:
    corpus = load_corpus(args.corpus, source_label=args.source_label)
    config = {"mode": args.mode, "include_title": args.include_title, "seed": args.seed}
    if args.mode == "builtin":
        lexicon = load_lexicon(args.lexicon)
        config["lexicon"] = str(args.lexicon) if args.lexicon else "bundled"
        annotations = annotate_builtin(
            corpus, lexicon, include_title=args.include_title, threads=args.threads
        )
    else:
        if not args.annotations:
            raise InputError("--mode import requires --annotations")
        annotations = import_annotations(args.annotations, corpus)
        config["imported_from"] = str(args.annotations)
    write_annotations(annotations, args.output, source_label=corpus.source_label, header_config=config)
    log.info("wrote %d annotations to %s", len(annotations), args.output)
    return EXIT_OK


def _load_annotation_file(path: str):
    """Annotation records for graph building; revalidates ranges, not ids."""
    from .annotate import EntityMention, RelationMention, SentenceAnnotation
    from .text import normalize_surface

    annotations = []
    seen: set[tuple[str, int]] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON: {exc.msg}", path=path, line=lineno) from exc
            try:
                entities = tuple(
                    EntityMention(
                        e["surface"],
                        normalize_surface(e["surface"]),
                        e["start"],
                        e["end"],
                        e["origin"],
                    )
                    for e in obj["entities"]
                )
                relations = tuple(
                    RelationMention(r["arg0"], r["arg1"]) for r in obj["relations"]
                )
                ann = SentenceAnnotation(
                    article_id=obj["article_id"],
                    sentence_index=int(obj["sentence_index"]),
                    entities=entities,
                    relations=relations,
                    polarity=float(obj["polarity"]),
                    subjectivity=float(obj["subjectivity"]),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"bad annotation record: {exc}", path=path, line=lineno) from exc
            if not -1.0 <= ann.polarity <= 1.0 or not 0.0 <= ann.subjectivity <= 1.0:
                raise InputError("polarity/subjectivity out of range", path=path, line=lineno)
            annotations.append(ann)
    return annotations


def _resolve_source_label(args, path) -> str:
    if getattr(args, "source_label", None):
        return args.source_label
    header = read_annotation_header(path)
    if "source" in header:
        return header["source"]
    raise InputError(
        "annotation file carries no source= header; pass --source-label", path=path
    )


def cmd_build_graph(args) -> int:
    annotations = _load_annotation_file(args.annotations)
    if not annotations:
        log.warning("annotation file %s has no records; graph will be empty", args.annotations)
    label = _resolve_source_label(args, args.annotations)
    table = _build_table(annotations, args)
    graph = build_graph(
        annotations,
        table,
        source_label=label,
        edge_mode=args.edge_mode,
        admission_mode=args.admission_mode,
    )
    graph = filter_graph(graph, args.min_vertex_weight, args.min_edge_freq)
    graph.build_config.update(
        {
            "min_parent_freq": args.min_parent_freq,
            "min_child_freq": args.min_child_freq,
            "blocklist": str(args.blocklist) if args.blocklist else None,
            "seed": args.seed,
        }
    )
    save_graph(graph, args.output)
    log.info(
        "wrote graph with %d vertices / %d edges to %s",
        len(graph.vertices),
        len(graph.edges),
        args.output,
    )
    return EXIT_OK


def cmd_aliases(args) -> int:
    annotations = _load_annotation_file(args.annotations)
    counts = _mention_multiset(annotations)
    table = _build_table(annotations, args)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["surface", "canonical", "frequency"])
        for surface in sorted(table.canonical):
            writer.writerow([surface, table.canonical[surface], counts[surface]])
    log.info("wrote %d alias rows to %s", len(table.canonical), args.output)
    return EXIT_OK


def cmd_metrics(args) -> int:
    graph = load_graph(args.graph)
    if not graph.edges:
        log.warning("graph %s has no edges; summary will be partial", args.graph)
    summary = summarize(graph, weight_source=args.weight_source, seed=args.seed)
    out = Path(args.output)
    out.write_text(json.dumps(summary.to_obj(), ensure_ascii=False, indent=2) + "\n", "utf-8")
    hist_dir = Path(args.hist_dir) if args.hist_dir else out.parent
    hist_dir.mkdir(parents=True, exist_ok=True)
    for stem, counts, lo, hi in (
        ("polarity_histogram", summary.polarity_histogram, -1.0, 1.0),
        ("subjectivity_histogram", summary.subjectivity_histogram, 0.0, 1.0),
    ):
        if not counts:
            continue
        width = (hi - lo) / len(counts)
        with (hist_dir / f"{out.stem}.{stem}.csv").open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["bin_low", "bin_high", "count"])
            for i, count in enumerate(counts):
                writer.writerow([repr(lo + i * width), repr(lo + (i + 1) * width), count])
    log.info("wrote summary to %s", out)
    return EXIT_OK


def cmd_contrast(args) -> int:
    graph_a = load_graph(args.graph_a)
    graph_b = load_graph(args.graph_b)
    shared = graph_a.vertices.keys() & graph_b.vertices.keys()
    if not shared:
        log.warning("graphs share no vertices; contrast report will be empty")
    report = contrast_report(
        graph_a,
        graph_b,
        min_freq=args.min_freq,
        min_abs_pol=args.min_abs_pol,
        min_degree=args.min_degree,
        top_k=args.top_k,
    )
    Path(args.output).write_text(
        json.dumps(report.to_obj(), ensure_ascii=False, indent=2) + "\n", "utf-8"
    )
    if args.subgraph:
        sub = contrast_subgraph(report.edge_items, report.vertex_items, graph_a, graph_b)
        spec = ExportSpec(format=args.subgraph_format, color_by="lean", stamp=args.stamp)
        export_graph(sub, None, spec, args.subgraph)
    log.info(
        "contrast: %d edge items, %d vertex items",
        len(report.edge_items),
        len(report.vertex_items),
    )
    return EXIT_OK


def cmd_export(args) -> int:
    graph = load_graph(args.graph)
    partition = None
    if args.partition:
        try:
            summary_obj = json.loads(Path(args.partition).read_text("utf-8"))
            partition = {k: int(v) for k, v in summary_obj["partition"].items()}
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot read partition from {args.partition}: {exc}") from exc
    elif args.color_by == "community":
        from .metrics import louvain

        partition, _ = louvain(graph, weight_source=args.weight_source, seed=args.seed)
    spec = ExportSpec(format=args.format, include_attrs=not args.no_attrs,
                      color_by=args.color_by, stamp=args.stamp)
    export_graph(graph, partition, spec, args.output)
    log.info("wrote %s export to %s", args.format, args.output)
    return EXIT_OK


def _add_common(parser: _Parser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="seed for all seeded stages")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker thread bound (never changes output)")
    parser.add_argument("--config", default=None,
                        help="key=value file mirroring the long flags")


def _add_alias_flags(parser: _Parser) -> None:
    parser.add_argument("--min-parent-freq", type=int, default=DEFAULT_MIN_PARENT_FREQ,
                        help="minimum mentions for a merge parent")
    parser.add_argument("--min-child-freq", type=int, default=DEFAULT_MIN_CHILD_FREQ,
                        help="minimum mentions for a surface to survive")
    parser.add_argument("--blocklist", default=None,
                        help="file of normalized surfaces to exclude")


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="mediagraph", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mediagraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, _Parser] = {}

    p = registry["ingest-check"] = sub.add_parser(
        "ingest-check", help="validate an article file"
    )
    p.add_argument("--corpus", required=True)
    p.add_argument("--source-label", default=None)
    p.add_argument("--include-title", action=argparse.BooleanOptionalAction, default=True)
    _add_common(p)
    p.set_defaults(func=cmd_ingest_check)

    p = registry["annotate"] = sub.add_parser("annotate", help="produce or import sentence annotations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--mode", choices=("builtin", "import"), default="builtin")
    p.add_argument("--lexicon", default=None, help="TSV lexicon (default: bundled)")
    p.add_argument("--annotations", default=None, help="input file for --mode import")
    p.add_argument("--source-label", default=None)
    p.add_argument("--include-title", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_annotate)

    p = registry["build-graph"] = sub.add_parser("build-graph", help="build a knowledge graph from annotations")
    p.add_argument("--annotations", required=True)
    p.add_argument("--source-label", default=None)
    p.add_argument("--edge-mode", choices=("auto", "sentence_cooccurrence", "relation_pair"),
                   default="auto")
    p.add_argument("--admission-mode", choices=("intersection", "union"), default="intersection")
    p.add_argument("--min-vertex-weight", type=int, default=1)
    p.add_argument("--min-edge-freq", type=int, default=1)
    _add_alias_flags(p)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_build_graph)

    p = registry["aliases"] = sub.add_parser("aliases", help="dump the alias table as CSV")
    p.add_argument("--annotations", required=True)
    _add_alias_flags(p)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_aliases)

    p = registry["metrics"] = sub.add_parser("metrics", help="summarize one graph (JSON + histogram CSVs)")
    p.add_argument("--graph", required=True)
    p.add_argument("--weight-source", choices=("frequency", "unit"), default="frequency")
    p.add_argument("--hist-dir", default=None)
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_metrics)

    p = registry["contrast"] = sub.add_parser("contrast", help="compare two graphs")
    p.add_argument("--graph-a", required=True)
    p.add_argument("--graph-b", required=True)
    p.add_argument("--min-freq", type=int, default=DEFAULT_MIN_EDGE_FREQ)
    p.add_argument("--min-abs-pol", type=float, default=DEFAULT_MIN_ABS_POLARITY)
    p.add_argument("--min-degree", type=int, default=DEFAULT_MIN_DEGREE)
    p.add_argument("--top-k", type=int, default=25)
    p.add_argument("--subgraph", default=None, help="also export the contrast subgraph here")
    p.add_argument("--subgraph-format", choices=("gexf", "graphml", "dot", "json"),
                   default="gexf")
    p.add_argument("--stamp", action="store_true")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_contrast)

    p = registry["export"] = sub.add_parser("export", help="convert a graph file to another format")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=("gexf", "graphml", "dot", "csv-edges",
                                        "csv-vertices", "json"), required=True)
    p.add_argument("--color-by", choices=("none", "community", "lean"), default="none")
    p.add_argument("--partition", default=None, help="metrics summary JSON to reuse")
    p.add_argument("--weight-source", choices=("frequency", "unit"), default="frequency")
    p.add_argument("--no-attrs", action="store_true")
    p.add_argument("--stamp", action="store_true")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_export)

    return parser, registry


def _apply_config_file(registry: dict[str, _Parser], argv: list[str]) -> None:
    """Install values from --config as typed defaults; CLI flags still win."""
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return  # argparse will report the missing value
    values = _read_config_file(argv[idx + 1])
    known = {action.dest for sp in registry.values() for action in sp._actions}  # noqa: SLF001
    unknown = values.keys() - known
    if unknown:
        raise InputError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for sp in registry.values():
        defaults = {}
        for action in sp._actions:  # noqa: SLF001
            if action.dest not in values:
                continue
            raw = values[action.dest]
            if isinstance(action, (argparse.BooleanOptionalAction, argparse._StoreTrueAction)):  # noqa: SLF001
                defaults[action.dest] = raw.lower() in ("true", "1", "yes")
            elif action.type is not None:
                try:
                    defaults[action.dest] = action.type(raw)
                except ValueError as exc:
                    raise InputError(f"config key {action.dest!r}: {exc}") from exc
            else:
                defaults[action.dest] = raw
        if defaults:
            sp.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="mediagraph: %(levelname)s: %(message)s")
    parser, registry = build_parser()
    try:
        _apply_config_file(registry, argv)
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise InputError("--threads must be >= 1")
        return args.func(args)
    except SystemExit as exc:  # argparse usage errors and --version
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except OSError as exc:
        print(f"mediagraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"mediagraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalError as exc:
        print(f"mediagraph: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except MediagraphError as exc:
        print(f"mediagraph: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

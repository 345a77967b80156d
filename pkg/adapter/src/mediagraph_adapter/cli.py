"""Command-line entry point for the annotation adapter."""

from __future__ import annotations

import argparse
import sys

from . import AdapterError, __version__
from .adapter import AdapterConfig, run_adapter


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mediagraph-adapter", description=__doc__)
    parser.add_argument("--version", action="version", version=f"mediagraph-adapter {__version__}")
    parser.add_argument("--articles", required=True, help="article JSON-lines file")
    parser.add_argument("--out", required=True, help="annotation JSON-lines output")
    parser.add_argument("--ner-model", default="rule-ner@1")
    parser.add_argument("--oie-model", default="pattern-oie@1")
    parser.add_argument("--sentiment-model", default="wordlist-sentiment@1")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--include-title", action=argparse.BooleanOptionalAction, default=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = AdapterConfig(
        ner_model=args.ner_model,
        oie_model=args.oie_model,
        sentiment_model=args.sentiment_model,
        batch_size=args.batch_size,
        include_title=args.include_title,
    )
    try:
        count = run_adapter(args.articles, config, args.out)
    except AdapterError as exc:
        print(f"mediagraph-adapter: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mediagraph-adapter: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {count} annotation lines to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Batch driver: article JSON-lines in, annotation JSON-lines out."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from . import AdapterError, __version__
from .engines import resolve_ner, resolve_oie, resolve_sentiment
from .schema import validate_line

_SPLIT_RE = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")
_NO_BREAK = re.compile(r"\b(?:Mr|Mrs|Ms|Dr|St|U\.S|U\.K|U\.N)\.$")


@dataclass(frozen=True)
class AdapterConfig:
    ner_model: str = "rule-ner@1"
    oie_model: str = "pattern-oie@1"
    sentiment_model: str = "wordlist-sentiment@1"
    batch_size: int = 32
    include_title: bool = True

    def __post_init__(self):
        if self.batch_size < 1:
            raise AdapterError("batch_size must be >= 1")


def split_sentences(body: str) -> list[str]:
    """Regex splitter: break after terminal punctuation before a capital,
    re-joining obvious abbreviation false splits."""
    rough = [p for p in _SPLIT_RE.split(body.strip()) if p.strip()]
    merged: list[str] = []
    for part in rough:
        if merged and _NO_BREAK.search(merged[-1]):
            merged[-1] = merged[-1] + " " + part
        else:
            merged.append(part.strip())
    return merged


def read_articles(path: str | Path):
    """Yield (line_number, article dict) after key validation."""
    path = Path(path)
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise AdapterError(f"{path}:{lineno}: malformed JSON: {exc.msg}") from exc
            for key in ("id", "source", "title", "body"):
                if key not in obj or not isinstance(obj[key], str):
                    raise AdapterError(f"{path}:{lineno}: missing or non-string {key!r}")
            if obj["id"] in seen:
                raise AdapterError(f"{path}:{lineno}: duplicate article id {obj['id']!r}")
            seen.add(obj["id"])
            yield lineno, obj


def _clamp(value: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, float(value))) + 0.0


def _batched(items: list, size: int):
    for i in range(0, len(items), size):
        yield items[i : i + size]


def run_adapter(article_path: str | Path, config: AdapterConfig, out_path: str | Path) -> int:
    """Annotate every sentence of every article; returns the line count.

    Engines are resolved before any input is read, so unresolvable model
    ids fail at startup. Output lines are buffered and written in
    (article order, sentence_index) order whatever the batch size; each
    line is schema-validated before it is written.
    """
    ner = resolve_ner(config.ner_model)
    oie = resolve_oie(config.oie_model)
    sentiment = resolve_sentiment(config.sentiment_model)

    units: list[tuple[str, int, str]] = []  # article_id, sentence_index, text
    source_label = None
    for _, article in read_articles(article_path):
        if source_label is None:
            source_label = article["source"]
        sentences: list[str] = []
        if config.include_title and article["title"].strip():
            sentences.append(article["title"].strip())
        sentences.extend(split_sentences(article["body"]))
        for idx, text in enumerate(sentences):
            units.append((article["id"], idx, text))

    results: list[dict] = []
    for batch in _batched(units, config.batch_size):
        for article_id, idx, text in batch:
            entities = [
                {"surface": surface, "start": start, "end": end, "origin": "NER"}
                for surface, start, end in ner.annotate(text)
                if surface.strip()
            ]
            relations = [
                {"arg0": arg0, "arg1": arg1}
                for arg0, arg1 in oie.extract(text)
                if arg0 and arg1
            ]
            polarity, subjectivity = sentiment.score(text)
            line = {
                "article_id": article_id,
                "sentence_index": idx,
                "entities": entities,
                "relations": relations,
                "polarity": _clamp(polarity, -1.0, 1.0),
                "subjectivity": _clamp(subjectivity, 0.0, 1.0),
            }
            try:
                validate_line(line)
            except jsonschema.ValidationError as exc:
                raise AdapterError(
                    f"internal: produced invalid line for {article_id}/{idx}: {exc.message}"
                ) from exc
            results.append(line)

    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            f"# mediagraph-adapter v{__version__}"
            f" source={source_label if source_label is not None else 'unknown'}"
            f" ner={config.ner_model} oie={config.oie_model}"
            f" sentiment={config.sentiment_model} batch={config.batch_size}\n"
        )
        for line in results:
            fh.write(json.dumps(line, ensure_ascii=False) + "\n")
    return len(results)

"""Corpus data model: article ingest and sentence splitting.

Articles are exchanged as UTF-8 JSON lines, one object per line with keys
`id`, `source`, `date` (ISO-8601, optional), `title`, `body`. A loaded
Corpus is immutable and safe to share across workers.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import InputError
from .text import abbreviations


@dataclass(frozen=True)
class Article:
    id: str
    source_label: str
    title: str
    body: str
    published_date: dt.date | None = None


@dataclass(frozen=True)
class Corpus:
    source_label: str
    articles: tuple[Article, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.articles)

    def article_ids(self) -> set[str]:
        return {a.id for a in self.articles}


def _parse_date(raw: str, path, line: int) -> dt.date:
    """Parse ISO-8601 dates; missing month/day default to 1."""
    parts = raw.strip().split("-")
    try:
        if len(parts) == 1:
            return dt.date(int(parts[0]), 1, 1)
        if len(parts) == 2:
            return dt.date(int(parts[0]), int(parts[1]), 1)
        if len(parts) == 3:
            return dt.date(int(parts[0]), int(parts[1]), int(parts[2]))
    except ValueError:
        pass
    raise InputError(f"invalid date {raw!r}", path=path, line=line)


def _parse_article(obj: dict, path, line: int) -> tuple[Article, str]:
    for key in ("id", "source", "title", "body"):
        if key not in obj:
            raise InputError(f"record missing {key!r}", path=path, line=line)
        if not isinstance(obj[key], str):
            raise InputError(f"field {key!r} must be a string", path=path, line=line)
    art_id = obj["id"].strip()
    if not art_id:
        raise InputError("record has empty 'id'", path=path, line=line)
    body = obj["body"]
    if not body.strip():
        raise InputError("record has empty 'body'", path=path, line=line)
    date = None
    if obj.get("date") is not None:
        if not isinstance(obj["date"], str):
            raise InputError("field 'date' must be a string", path=path, line=line)
        date = _parse_date(obj["date"], path, line)
    article = Article(
        id=art_id,
        source_label=obj["source"],
        title=obj["title"],
        body=body,
        published_date=date,
    )
    return article, obj["source"]


def load_corpus(path: str | Path, source_label: str | None = None) -> Corpus:
    """Load a JSON-lines article file, preserving file order.

    `source_label` (the CLI --source-label flag) overrides an empty `source`
    field and must match non-empty ones; without it, the first record fixes
    the corpus label. An empty file needs an explicit label.
    """
    path = Path(path)
    articles: list[Article] = []
    seen_ids: set[str] = set()
    label = source_label
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON: {exc.msg}", path=path, line=lineno) from exc
            if not isinstance(obj, dict):
                raise InputError("record is not a JSON object", path=path, line=lineno)
            article, rec_source = _parse_article(obj, path, lineno)
            if article.id in seen_ids:
                raise InputError(f"duplicate article id {article.id!r}", path=path, line=lineno)
            seen_ids.add(article.id)
            if source_label is not None and rec_source and rec_source != source_label:
                raise InputError(
                    f"record source {rec_source!r} conflicts with --source-label {source_label!r}",
                    path=path,
                    line=lineno,
                )
            if label is None:
                label = rec_source
            elif rec_source and rec_source != label:
                raise InputError(
                    f"mixed source labels: {rec_source!r} after {label!r}", path=path, line=lineno
                )
            if article.source_label != label:
                article = Article(
                    id=article.id,
                    source_label=label,
                    title=article.title,
                    body=article.body,
                    published_date=article.published_date,
                )
            articles.append(article)
    if label is None:
        raise InputError("empty corpus file and no --source-label given", path=path)
    return Corpus(source_label=label, articles=tuple(articles))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus back out in the interchange format (one line each)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for a in corpus.articles:
            obj = {"id": a.id, "source": a.source_label, "title": a.title, "body": a.body}
            if a.published_date is not None:
                obj["date"] = a.published_date.isoformat()
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _is_abbreviation(token: str) -> bool:
    low = token.lower()
    if low in abbreviations():
        return True
    # capital initial ("W." in "George W. Bush") or dotted acronym ("U.S.A.")
    if len(token) == 2 and token[0].isupper() and token[1] == ".":
        return True
    bare = low.rstrip(".")
    return "." in bare and all(len(p) <= 1 for p in bare.split("."))


def split_sentences(body: str) -> list[tuple[str, int, int]]:
    """Split plain text into (sentence, start, end) spans.

    A sentence ends at '.', '!' or '?' followed by whitespace and a capital
    letter, unless the terminator belongs to a known abbreviation. Spans are
    non-overlapping, ordered, and cover every non-whitespace character;
    text between spans is always pure whitespace.
    """
    n = len(body)
    spans: list[tuple[int, int]] = []
    start = 0
    while start < n and body[start].isspace():
        start += 1
    i = start
    while i < n:
        ch = body[i]
        if ch in ".!?":
            j = i + 1
            while j < n and body[j].isspace():
                j += 1
            follows_break = j > i + 1 and j < n and body[j].isupper()
            if follows_break and ch == ".":
                w = i
                while w > 0 and not body[w - 1].isspace():
                    w -= 1
                if _is_abbreviation(body[w : i + 1]):
                    follows_break = False
            if follows_break:
                spans.append((start, i + 1))
                start = j
                i = j
                continue
        i += 1
    if start < n:
        end = n
        while end > start and body[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return [(body[s:e], s, e) for s, e in spans]


def article_sentences(article: Article, include_title: bool = True) -> list[str]:
    """Sentences of one article; a non-empty title becomes sentence 0."""
    sentences = []
    if include_title and article.title.strip():
        sentences.append(article.title.strip())
    sentences.extend(text for text, _, _ in split_sentences(article.body))
    return sentences

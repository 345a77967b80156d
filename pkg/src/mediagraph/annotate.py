"""Per-sentence annotations: entity mentions, relation argument pairs, sentiment.

Two producers feed the same shape: the built-in heuristic annotator
(capitalization-based entity runs, no relations) and an importer for
externally produced annotation files. Vertex admission combines both
signals: an entity qualifies when named-entity recognition found it *and*
it occurs inside a relation argument of the same sentence.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import InputError, __version__
from .corpus import Article, Corpus, split_sentences
from .sentiment import SentimentLexicon, score_sentence
from .text import (
    contains_token_seq,
    normalize_surface,
    score_tokens,
    stopwords,
    word_tokens,
)

ORIGIN_NER = "NER"
ORIGIN_OIE_ARG = "OIE_ARG"
CONNECTORS = frozenset({"of", "the"})


@dataclass(frozen=True)
class EntityMention:
    surface: str
    normalized: str
    start: int
    end: int
    origin: str = ORIGIN_NER


@dataclass(frozen=True)
class RelationMention:
    arg0_surface: str
    arg1_surface: str
    start: int = 0
    end: int = 0


@dataclass(frozen=True)
class SentenceAnnotation:
    article_id: str
    sentence_index: int
    entities: tuple[EntityMention, ...] = ()
    relations: tuple[RelationMention, ...] = ()
    polarity: float = 0.0
    subjectivity: float = 0.0


def _entity_runs(sentence: str) -> list[EntityMention]:
    """Maximal runs of capitalized tokens, bridged by internal of/the.

    A capitalized stopword never starts or extends a run; "of"/"the" may sit
    inside one when both neighbours are run tokens ("Bank of England"). A
    lone sentence-initial token followed by a stopword is discarded: that
    position is capitalized by convention, so a single token there with no
    capitalized continuation is usually not a name.
    """
    toks = word_tokens(sentence)
    stops = stopwords()

    def is_cap(i: int) -> bool:
        t = toks[i][0]
        return t[0].isupper() and t.lower() not in stops

    runs: list[tuple[int, int]] = []  # [start_tok, end_tok) indices
    i = 0
    while i < len(toks):
        if not is_cap(i):
            i += 1
            continue
        j = i + 1
        while j < len(toks):
            if is_cap(j):
                j += 1
            elif (
                toks[j][0].lower() in CONNECTORS
                and j + 1 < len(toks)
                and is_cap(j + 1)
            ):
                j += 2
            else:
                break
        runs.append((i, j))
        i = j
    mentions = []
    for a, b in runs:
        if a == 0 and b == 1 and len(toks) > 1 and toks[1][0].lower() in stops:
            continue
        start, end = toks[a][1], toks[b - 1][2]
        surface = sentence[start:end]
        normalized = normalize_surface(surface)
        if normalized:
            mentions.append(EntityMention(surface, normalized, start, end, ORIGIN_NER))
    return mentions


def _annotate_article(
    article: Article, lexicon: SentimentLexicon, include_title: bool
) -> list[SentenceAnnotation]:
    sentences: list[str] = []
    if include_title and article.title.strip():
        sentences.append(article.title.strip())
    sentences.extend(text for text, _, _ in split_sentences(article.body))
    out = []
    for idx, sent in enumerate(sentences):
        polarity, subjectivity = score_sentence(score_tokens(sent), lexicon)
        out.append(
            SentenceAnnotation(
                article_id=article.id,
                sentence_index=idx,
                entities=tuple(_entity_runs(sent)),
                relations=(),
                polarity=polarity,
                subjectivity=subjectivity,
            )
        )
    return out


def annotate_builtin(
    corpus: Corpus,
    lexicon: SentimentLexicon,
    include_title: bool = True,
    threads: int = 1,
) -> list[SentenceAnnotation]:
    """Annotate every sentence with the built-in recognizer and scorer.

    Deterministic: output is always in (article order, sentence_index) order
    no matter how many worker threads run.
    """
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_article = list(
                pool.map(lambda a: _annotate_article(a, lexicon, include_title), corpus.articles)
            )
    else:
        per_article = [_annotate_article(a, lexicon, include_title) for a in corpus.articles]
    return [ann for anns in per_article for ann in anns]


def admissible_entities(
    annotation: SentenceAnnotation,
    mode: str = "intersection",
    oie_available: bool = True,
) -> set[str]:
    """Normalized entity strings admitted as graph vertices for one sentence.

    `intersection` keeps NER entities whose token sequence occurs (on token
    boundaries) inside some relation argument of the same sentence. When the
    producing annotator had no relation extractor at all (`oie_available`
    False), intersection falls back to NER-only; an empty relation list from
    an annotator that *did* run yields the empty set.

    `union` admits every NER entity plus every relation argument surface.
    """
    ner = {e.normalized for e in annotation.entities if e.origin == ORIGIN_NER}
    if mode == "union":
        admitted = {e.normalized for e in annotation.entities}
        for rel in annotation.relations:
            for arg in (rel.arg0_surface, rel.arg1_surface):
                norm = normalize_surface(arg)
                if norm:
                    admitted.add(norm)
        return admitted
    if mode != "intersection":
        raise InputError(f"unknown admission mode {mode!r}")
    if not oie_available:
        return ner
    arg_token_lists = [
        normalize_surface(arg).split()
        for rel in annotation.relations
        for arg in (rel.arg0_surface, rel.arg1_surface)
    ]
    admitted = set()
    for norm in ner:
        ent_tokens = norm.split()
        if any(contains_token_seq(ent_tokens, arg) for arg in arg_token_lists):
            admitted.add(norm)
    return admitted


# ---------------------------------------------------------------------------
# Interchange format: one JSON object per line, comment lines start with '#'.
# ---------------------------------------------------------------------------

def annotation_to_obj(ann: SentenceAnnotation) -> dict:
    return {
        "article_id": ann.article_id,
        "sentence_index": ann.sentence_index,
        "entities": [
            {"surface": e.surface, "start": e.start, "end": e.end, "origin": e.origin}
            for e in ann.entities
        ],
        "relations": [
            {"arg0": r.arg0_surface, "arg1": r.arg1_surface} for r in ann.relations
        ],
        "polarity": ann.polarity,
        "subjectivity": ann.subjectivity,
    }


def write_annotations(
    annotations: list[SentenceAnnotation],
    path: str | Path,
    source_label: str | None = None,
    header_config: dict | None = None,
) -> None:
    """Write the annotation interchange file with a comment metadata header."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        header = f"# mediagraph-annotations v{__version__}"
        if source_label is not None:
            header += f" source={source_label}"
        if header_config:
            header += " config=" + json.dumps(header_config, sort_keys=True)
        fh.write(header + "\n")
        for ann in annotations:
            fh.write(json.dumps(annotation_to_obj(ann), ensure_ascii=False) + "\n")


def read_annotation_header(path: str | Path) -> dict:
    """Pull `key=value` metadata out of leading comment lines (best effort)."""
    meta: dict[str, str] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for raw in fh:
            if not raw.startswith("#"):
                break
            for part in raw[1:].split():
                if "=" in part:
                    key, _, value = part.partition("=")
                    meta.setdefault(key, value)
    return meta


def _parse_entity(obj: dict, path, lineno: int) -> EntityMention:
    for key in ("surface", "start", "end", "origin"):
        if key not in obj:
            raise InputError(f"entity missing {key!r}", path=path, line=lineno)
    start, end = obj["start"], obj["end"]
    if not (isinstance(start, int) and isinstance(end, int) and 0 <= start < end):
        raise InputError(f"entity span [{start}, {end}) invalid", path=path, line=lineno)
    if obj["origin"] not in (ORIGIN_NER, ORIGIN_OIE_ARG):
        raise InputError(f"unknown entity origin {obj['origin']!r}", path=path, line=lineno)
    surface = str(obj["surface"])
    normalized = normalize_surface(surface)
    if not normalized:
        raise InputError(f"entity surface {surface!r} normalizes to nothing", path=path, line=lineno)
    return EntityMention(surface, normalized, start, end, obj["origin"])


def import_annotations(path: str | Path, corpus: Corpus) -> list[SentenceAnnotation]:
    """Load and validate an annotation interchange file against a corpus.

    Checks referential integrity (article ids), value ranges, span sanity and
    per-article sentence_index uniqueness; returns annotations sorted into
    (corpus article order, sentence_index) order.
    """
    path = Path(path)
    known_ids = corpus.article_ids()
    order = {a.id: i for i, a in enumerate(corpus.articles)}
    seen: set[tuple[str, int]] = set()
    annotations: list[SentenceAnnotation] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InputError(f"malformed JSON: {exc.msg}", path=path, line=lineno) from exc
            for key in ("article_id", "sentence_index", "entities", "relations", "polarity", "subjectivity"):
                if key not in obj:
                    raise InputError(f"annotation missing {key!r}", path=path, line=lineno)
            art_id = obj["article_id"]
            if art_id not in known_ids:
                raise InputError(f"unknown article_id {art_id!r}", path=path, line=lineno)
            idx = obj["sentence_index"]
            if not isinstance(idx, int) or idx < 0:
                raise InputError(f"sentence_index {idx!r} must be an integer >= 0", path=path, line=lineno)
            if (art_id, idx) in seen:
                raise InputError(
                    f"duplicate sentence_index {idx} for article {art_id!r}", path=path, line=lineno
                )
            seen.add((art_id, idx))
            polarity = obj["polarity"]
            if not isinstance(polarity, (int, float)) or not -1.0 <= polarity <= 1.0:
                raise InputError(f"polarity {polarity!r} outside [-1, 1]", path=path, line=lineno)
            subjectivity = obj["subjectivity"]
            if not isinstance(subjectivity, (int, float)) or not 0.0 <= subjectivity <= 1.0:
                raise InputError(f"subjectivity {subjectivity!r} outside [0, 1]", path=path, line=lineno)
            entities = tuple(_parse_entity(e, path, lineno) for e in obj["entities"])
            relations = []
            for rel in obj["relations"]:
                arg0, arg1 = rel.get("arg0", ""), rel.get("arg1", "")
                if not arg0 or not arg1:
                    raise InputError("relation with empty arg0/arg1", path=path, line=lineno)
                relations.append(RelationMention(arg0, arg1))
            annotations.append(
                SentenceAnnotation(
                    article_id=art_id,
                    sentence_index=idx,
                    entities=entities,
                    relations=tuple(relations),
                    polarity=float(polarity) + 0.0,
                    subjectivity=float(subjectivity) + 0.0,
                )
            )
    annotations.sort(key=lambda a: (order[a.article_id], a.sentence_index))
    return annotations

"""Engine registry: NER, open-IE and sentiment backends behind string ids.

Built-in ids are always resolvable: `rule-ner@1`, `pattern-oie@1`,
`wordlist-sentiment@1`, plus `stub-*@1` test doubles. Ids starting with
`hf-ner:` or `hf-sentiment:` load a transformers pipeline when the optional
dependencies and weights are present; failures surface at startup, never
mid-run. Tests may register extra ids with `register_*`.
"""

from __future__ import annotations

import re
from collections.abc import Callable

from . import AdapterError

EntitySpan = tuple[str, int, int]          # surface, start, end
ArgPair = tuple[str, str]                  # arg0, arg1

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’\-][A-Za-z0-9]+)*")

_NER_SKIP = frozenset(
    """the a an and or but if then he she it they we you i his her its their
    this that these those there here when where while after before during
    monday tuesday wednesday thursday friday saturday sunday""".split()
)

_OIE_VERBS = frozenset(
    """said says told tells met meets meet called calls visited visits praised
    praises criticized criticizes condemned condemns accused accuses announced
    announces warned warns blamed blames backed backs endorsed endorses
    denounced denounces supported supports opposed opposes sued sues attacked
    attacks defended defends urged urges joined joins phoned phones addressed
    addresses presented presents welcomed welcomes dismissed dismisses
    published publishes cleared clears credited credits objected objects
    denied denies insisted insists argued argues exposed exposes replied
    replies reported reports wrote writes pitched pitches appealed appeals
    celebrated celebrates produced produces repeated repeats advanced advances
    questioned questions applauded applauds brushed won defeated defeats
    signed signs vetoed vetoes nominated nominates fired fires hired hires
    thanked thanks mocked mocks""".split()
)

# Compact sentiment word list, deliberately independent of the primary
# toolkit's bundled lexicon. (polarity, subjectivity) per word.
_SENTIMENT_WORDS = {
    "good": (0.6, 0.6), "great": (0.8, 0.7), "excellent": (0.9, 0.9),
    "positive": (0.5, 0.5), "success": (0.6, 0.4), "successful": (0.6, 0.5),
    "win": (0.5, 0.4), "won": (0.5, 0.4), "praise": (0.6, 0.6),
    "praised": (0.6, 0.6), "hope": (0.4, 0.5), "hopeful": (0.5, 0.6),
    "strong": (0.4, 0.4), "support": (0.3, 0.3), "supported": (0.3, 0.3),
    "helpful": (0.5, 0.5), "progress": (0.5, 0.4), "improve": (0.5, 0.4),
    "improved": (0.5, 0.4), "safe": (0.4, 0.3), "fair": (0.4, 0.5),
    "promising": (0.5, 0.6), "victory": (0.6, 0.4), "calm": (0.3, 0.3),
    "bad": (-0.6, 0.6), "terrible": (-0.8, 0.8), "awful": (-0.8, 0.8),
    "negative": (-0.5, 0.5), "failure": (-0.6, 0.4), "failed": (-0.5, 0.4),
    "crisis": (-0.6, 0.3), "scandal": (-0.6, 0.4), "corrupt": (-0.8, 0.7),
    "criticize": (-0.5, 0.6), "criticized": (-0.5, 0.6), "attack": (-0.5, 0.4),
    "attacked": (-0.5, 0.4), "threat": (-0.5, 0.3), "harmful": (-0.5, 0.5),
    "dangerous": (-0.6, 0.5), "weak": (-0.4, 0.5), "unfair": (-0.5, 0.6),
    "reckless": (-0.6, 0.7), "dismal": (-0.6, 0.7), "angry": (-0.5, 0.6),
    "fear": (-0.4, 0.4), "wasteful": (-0.5, 0.6), "hollow": (-0.4, 0.6),
    "risky": (-0.4, 0.5), "vague": (-0.3, 0.5), "doubt": (-0.3, 0.4),
}
_SENTIMENT_NEGATORS = frozenset({"not", "no", "never", "without"})


def _tokens(sentence: str) -> list[tuple[str, int, int]]:
    return [(m.group(), m.start(), m.end()) for m in _TOKEN_RE.finditer(sentence)]


class RuleNer:
    """Capitalized-run recognizer with character spans."""

    def annotate(self, sentence: str) -> list[EntitySpan]:
        toks = _tokens(sentence)
        spans: list[EntitySpan] = []
        run: list[tuple[str, int, int]] = []
        for tok in toks + [("", -1, -1)]:
            word = tok[0]
            if word and word[0].isupper() and word.lower() not in _NER_SKIP:
                run.append(tok)
                continue
            if run:
                start, end = run[0][1], run[-1][2]
                spans.append((sentence[start:end], start, end))
                run = []
        return spans


class PatternOie:
    """One (ARG0, ARG1) pair per known-verb occurrence with text on both sides."""

    def extract(self, sentence: str) -> list[ArgPair]:
        toks = _tokens(sentence)
        pairs: list[ArgPair] = []
        for i, (word, start, end) in enumerate(toks):
            if word.lower() not in _OIE_VERBS or i == 0 or i == len(toks) - 1:
                continue
            arg0 = sentence[toks[0][1] : start].strip(" ,;:")
            arg1 = sentence[end : toks[-1][2]].strip(" ,;:")
            if arg0 and arg1:
                pairs.append((arg0, arg1))
        return pairs


class WordlistSentiment:
    """Mean of matched word scores; a negator in the 2 previous tokens flips."""

    def score(self, sentence: str) -> tuple[float, float]:
        words = [t[0].lower() for t in _tokens(sentence)]
        pols, subs = [], []
        for i, word in enumerate(words):
            if word not in _SENTIMENT_WORDS:
                continue
            pol, sub = _SENTIMENT_WORDS[word]
            if any(w in _SENTIMENT_NEGATORS for w in words[max(0, i - 2) : i]):
                pol = -pol
            pols.append(pol)
            subs.append(sub)
        if not pols:
            return 0.0, 0.0
        return sum(pols) / len(pols), sum(subs) / len(subs)


class StubNer:
    """Identity test double: the first token is the only entity."""

    def annotate(self, sentence: str) -> list[EntitySpan]:
        toks = _tokens(sentence)
        if not toks:
            return []
        word, start, end = toks[0]
        return [(word, start, end)]


class StubOie:
    def extract(self, sentence: str) -> list[ArgPair]:
        toks = _tokens(sentence)
        if len(toks) < 2:
            return []
        return [(toks[0][0], toks[-1][0])]


class StubSentiment:
    def score(self, sentence: str) -> tuple[float, float]:
        return 0.0, 0.0


class NullOie:
    """For corpora where no relation extraction is wanted."""

    def extract(self, sentence: str) -> list[ArgPair]:
        return []


def _load_hf_ner(model_id: str):
    try:
        from transformers import pipeline

        pipe = pipeline("token-classification", model=model_id, aggregation_strategy="simple")
    except Exception as exc:  # model missing, no weights, no package
        raise AdapterError(f"NER model {model_id!r} not resolvable: {exc}") from exc

    class HfNer:
        def annotate(self, sentence: str) -> list[EntitySpan]:
            return [
                (r["word"], int(r["start"]), int(r["end"]))
                for r in pipe(sentence)
                if r.get("start") is not None
            ]

    return HfNer()


def _load_hf_sentiment(model_id: str):
    try:
        from transformers import pipeline

        pipe = pipeline("text-classification", model=model_id)
    except Exception as exc:
        raise AdapterError(f"sentiment model {model_id!r} not resolvable: {exc}") from exc

    class HfSentiment:
        def score(self, sentence: str) -> tuple[float, float]:
            result = pipe(sentence[:512])[0]
            signed = result["score"] if result["label"].upper().startswith("POS") else -result["score"]
            return signed, abs(signed)

    return HfSentiment()


_NER_FACTORIES: dict[str, Callable[[], object]] = {
    "rule-ner@1": RuleNer,
    "stub-ner@1": StubNer,
}
_OIE_FACTORIES: dict[str, Callable[[], object]] = {
    "pattern-oie@1": PatternOie,
    "stub-oie@1": StubOie,
    "none": NullOie,
}
_SENTIMENT_FACTORIES: dict[str, Callable[[], object]] = {
    "wordlist-sentiment@1": WordlistSentiment,
    "stub-sentiment@1": StubSentiment,
}


def register_ner(model_id: str, factory: Callable[[], object]) -> None:
    _NER_FACTORIES[model_id] = factory


def register_oie(model_id: str, factory: Callable[[], object]) -> None:
    _OIE_FACTORIES[model_id] = factory


def register_sentiment(model_id: str, factory: Callable[[], object]) -> None:
    _SENTIMENT_FACTORIES[model_id] = factory


def resolve_ner(model_id: str):
    if model_id.startswith("hf-ner:"):
        return _load_hf_ner(model_id.split(":", 1)[1])
    if model_id in _NER_FACTORIES:
        return _NER_FACTORIES[model_id]()
    raise AdapterError(f"unknown NER model id {model_id!r}")


def resolve_oie(model_id: str):
    if model_id in _OIE_FACTORIES:
        return _OIE_FACTORIES[model_id]()
    raise AdapterError(f"unknown OIE model id {model_id!r}")


def resolve_sentiment(model_id: str):
    if model_id.startswith("hf-sentiment:"):
        return _load_hf_sentiment(model_id.split(":", 1)[1])
    if model_id in _SENTIMENT_FACTORIES:
        return _SENTIMENT_FACTORIES[model_id]()
    raise AdapterError(f"unknown sentiment model id {model_id!r}")

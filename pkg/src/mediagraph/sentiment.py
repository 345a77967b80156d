"""Lexicon-based polarity/subjectivity scoring.

Each lexicon entry maps a lowercase word to (polarity, subjectivity,
intensity). Scoring is a flat pass over the token list: matched words
contribute their values, a negator within the three preceding tokens
flips and halves polarity, and an intensifier immediately before a word
scales its polarity. No parsing, no parts of speech.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import InputError

NEGATION_FACTOR = -0.5
NEGATION_WINDOW = 3


@dataclass(frozen=True)
class LexiconEntry:
    polarity: float
    subjectivity: float
    intensity: float = 1.0


@dataclass(frozen=True)
class SentimentLexicon:
    entries: dict[str, LexiconEntry] = field(default_factory=dict)
    negators: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = self.negators & self.entries.keys()
        if overlap:
            raise InputError(f"words declared both negator and entry: {sorted(overlap)}")
        for word, e in self.entries.items():
            if not -1.0 <= e.polarity <= 1.0:
                raise InputError(f"lexicon entry {word!r}: polarity {e.polarity} outside [-1, 1]")
            if not 0.0 <= e.subjectivity <= 1.0:
                raise InputError(
                    f"lexicon entry {word!r}: subjectivity {e.subjectivity} outside [0, 1]"
                )
            if e.intensity <= 0.0:
                raise InputError(f"lexicon entry {word!r}: intensity must be > 0")


def load_lexicon(path: str | Path | None = None) -> SentimentLexicon:
    """Load a TSV lexicon; `None` loads the bundled default.

    Format: `word<TAB>polarity<TAB>subjectivity<TAB>intensity` (intensity
    optional, default 1.0); `#` starts a comment; `!word` declares a negator.
    """
    if path is None:
        raw = resources.files("mediagraph.data").joinpath("lexicon.tsv").read_text("utf-8")
        name = "<bundled lexicon>"
    else:
        name = Path(path)
        raw = Path(path).read_text("utf-8")
    entries: dict[str, LexiconEntry] = {}
    negators: set[str] = set()
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!"):
            word = line[1:].strip().lower()
            if word:
                negators.add(word)
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise InputError("expected word<TAB>pol<TAB>subj[<TAB>intensity]", path=name, line=lineno)
        word = fields[0].strip().lower()
        try:
            polarity = float(fields[1])
            subjectivity = float(fields[2])
            intensity = float(fields[3]) if len(fields) == 4 else 1.0
        except ValueError as exc:
            raise InputError(f"non-numeric value: {exc}", path=name, line=lineno) from exc
        if word in entries:
            raise InputError(f"duplicate lexicon word {word!r}", path=name, line=lineno)
        entries[word] = LexiconEntry(polarity, subjectivity, intensity)
    try:
        return SentimentLexicon(entries=entries, negators=frozenset(negators))
    except InputError as exc:
        raise InputError(f"{name}: {exc}") from exc


def score_sentence(tokens: list[str], lexicon: SentimentLexicon) -> tuple[float, float]:
    """Score one tokenized sentence; returns (polarity, subjectivity).

    Sentences with no lexicon matches score exactly (0.0, 0.0) rather than
    being skipped, so edges supported only by neutral text stay neutral.
    """
    pols: list[float] = []
    subs: list[float] = []
    for i, tok in enumerate(tokens):
        entry = lexicon.entries.get(tok)
        if entry is None:
            continue
        p = entry.polarity
        if any(t in lexicon.negators for t in tokens[max(0, i - NEGATION_WINDOW) : i]):
            p = NEGATION_FACTOR * p
        if i > 0:
            prev = lexicon.entries.get(tokens[i - 1])
            if prev is not None and prev.intensity != 1.0:
                p = max(-1.0, min(1.0, p * prev.intensity))
        pols.append(p + 0.0)  # squash -0.0
        subs.append(entry.subjectivity)
    if not pols:
        return 0.0, 0.0
    return math.fsum(pols) / len(pols) + 0.0, math.fsum(subs) / len(subs) + 0.0

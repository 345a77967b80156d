"""Shared tokenization and surface-form normalization.

Every module that compares entity strings (annotation, canonicalization,
graph building) must agree on one normal form, so it lives here.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

# Word tokens keep internal apostrophes/hyphens/periods ("U.S", "re-elected",
# "Trump's") but never leading/trailing punctuation.
_WORD_RE = re.compile(r"[A-Za-z0-9]+(?:[.'’\-][A-Za-z0-9]+)*")

# Lowercase tokens for sentiment scoring: words with internal apostrophes
# ("don't" stays one token).
_SCORE_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*")

_POSSESSIVE_RE = re.compile(r"(?:'s|’s)$")
_PUNCT_RE = re.compile(r"[^\w\s]|_")
_WS_RE = re.compile(r"\s+")


def word_tokens(text: str) -> list[tuple[str, int, int]]:
    """Tokenize into (token, start, end) triples with character offsets."""
    return [(m.group(), m.start(), m.end()) for m in _WORD_RE.finditer(text)]


def score_tokens(text: str) -> list[str]:
    """Lowercase whitespace+punctuation tokenization used for sentiment."""
    return _SCORE_TOKEN_RE.findall(text.replace("’", "'").lower())


def normalize_surface(surface: str) -> str:
    """Collapse a mention surface to its comparison form.

    Lowercases, drops possessive 's, strips punctuation, and collapses
    whitespace, so "Trump's", "TRUMP" and "trump." all map to "trump".
    """
    parts = []
    for tok in surface.replace("’", "'").lower().split():
        tok = _POSSESSIVE_RE.sub("", tok)
        tok = _PUNCT_RE.sub("", tok)
        if tok:
            parts.append(tok)
    return " ".join(parts)


def contains_token_seq(needle: list[str], haystack: list[str]) -> bool:
    """True if `needle` occurs as a contiguous run inside `haystack`."""
    n, h = len(needle), len(haystack)
    if n == 0 or n > h:
        return False
    return any(haystack[i : i + n] == needle for i in range(h - n + 1))


def _load_wordset(name: str) -> frozenset[str]:
    raw = resources.files("mediagraph.data").joinpath(name).read_text("utf-8")
    words = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    """Bundled lowercase stopword list (articles, pronouns, temporals)."""
    return _load_wordset("stopwords.txt")


@lru_cache(maxsize=None)
def abbreviations() -> frozenset[str]:
    """Bundled sentence-splitter abbreviation list, lowercased, with dots."""
    return _load_wordset("abbreviations.txt")

"""Entity canonicalization: merge long surface forms into frequent parents.

Noisy recognizers emit many variants of one name ("trump", "donald trump",
"president donald trump"). A shorter, at-least-as-frequent surface whose
tokens sit contiguously inside a longer one absorbs it; chains resolve
transitively ("president donald trump" -> "donald trump" -> "trump"). Rare
surfaces, single characters and pure-stopword strings are dropped outright.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from . import InputError, InternalError
from .text import stopwords

DEFAULT_MIN_PARENT_FREQ = 10
DEFAULT_MIN_CHILD_FREQ = 2


@dataclass(frozen=True)
class AliasTable:
    """Idempotent surface -> canonical mapping plus absorbed mention mass.

    `canonical` maps every surviving normalized surface to its canonical
    entity (canonical targets map to themselves). `frequencies` gives, per
    canonical entity, the total mentions absorbed into it. `dropped` records
    surfaces removed by thresholds with their lost mass.
    """

    canonical: dict[str, str] = field(default_factory=dict)
    frequencies: dict[str, int] = field(default_factory=dict)
    dropped: dict[str, int] = field(default_factory=dict)

    def resolve(self, surface: str) -> str | None:
        return self.canonical.get(surface)

    def canonical_entities(self) -> set[str]:
        return set(self.frequencies)


def canonicalize(surface: str, table: AliasTable) -> str | None:
    """Table lookup; None for surfaces dropped by thresholds or never seen."""
    return table.canonical.get(surface)


def load_blocklist(path: str | Path) -> frozenset[str]:
    """One normalized surface per line; '#' comments allowed."""
    surfaces = set()
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            surfaces.add(line)
    return frozenset(surfaces)


def _is_token_parent(parent: list[str], child: list[str]) -> bool:
    """Strict contiguous token-boundary containment (proper, not equal)."""
    lp, lc = len(parent), len(child)
    if lp == 0 or lp >= lc:
        return False
    return any(child[i : i + lp] == parent for i in range(lc - lp + 1))


def build_alias_table(
    mentions: Mapping[str, int] | Iterable[str],
    min_parent_freq: int = DEFAULT_MIN_PARENT_FREQ,
    min_child_freq: int = DEFAULT_MIN_CHILD_FREQ,
    blocklist: frozenset[str] = frozenset(),
) -> AliasTable:
    """Build the alias table from a multiset of normalized surfaces.

    Steps: drop surfaces under `min_child_freq` (plus single characters,
    pure-stopword strings and blocklisted ones); for each survivor pick the
    best parent (highest frequency, then fewest tokens, then lexicographic)
    among shorter contiguous token subsequences with frequency >=
    `min_parent_freq` and >= the child's own; resolve chains to fixpoint.
    """
    if min_parent_freq < 1 or min_child_freq < 1:
        raise InputError("alias thresholds must be >= 1")
    counts = Counter(mentions) if not isinstance(mentions, Mapping) else Counter(dict(mentions))
    stops = stopwords()

    survivors: dict[str, int] = {}
    dropped: dict[str, int] = {}
    for surface, freq in counts.items():
        if freq < 1:
            raise InputError(f"mention frequency for {surface!r} must be >= 1")
        toks = surface.split()
        if (
            freq < min_child_freq
            or len(surface) <= 1
            or not toks
            or all(t in stops for t in toks)
            or surface in blocklist
        ):
            dropped[surface] = freq
        else:
            survivors[surface] = freq

    tokens = {s: s.split() for s in survivors}
    parent_pool = [
        s for s, f in survivors.items() if f >= min_parent_freq
    ]

    direct: dict[str, str] = {}
    for child, child_freq in survivors.items():
        child_toks = tokens[child]
        candidates = [
            p
            for p in parent_pool
            if survivors[p] >= child_freq and _is_token_parent(tokens[p], child_toks)
        ]
        if candidates:
            candidates.sort(key=lambda p: (-survivors[p], len(tokens[p]), p))
            direct[child] = candidates[0]

    canonical: dict[str, str] = {}
    for surface in survivors:
        target = surface
        hops = 0
        while target in direct:
            target = direct[target]
            hops += 1
            if hops > len(survivors):
                raise InternalError(f"alias chain starting at {surface!r} does not terminate")
        canonical[surface] = target

    frequencies: dict[str, int] = {}
    for surface, freq in survivors.items():
        frequencies[canonical[surface]] = frequencies.get(canonical[surface], 0) + freq

    table = AliasTable(canonical=canonical, frequencies=frequencies, dropped=dropped)
    _check_invariants(table, sum(counts.values()))
    return table


def _check_invariants(table: AliasTable, total_mass: int) -> None:
    for surface, target in table.canonical.items():
        if table.canonical.get(target) != target:
            raise InternalError(f"canonical target {target!r} of {surface!r} is not a fixpoint")
    kept = sum(table.frequencies.values())
    lost = sum(table.dropped.values())
    if kept + lost != total_mass:
        raise InternalError(
            f"mention mass not conserved: kept {kept} + dropped {lost} != {total_mass}"
        )

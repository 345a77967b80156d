"""Corpus-to-knowledge-graph toolkit.

Builds per-source entity graphs from news-style corpora (vertices are
canonicalized entities, edges carry co-mention frequency plus mean
polarity/subjectivity) and computes comparative analytics between two
sources: structural summaries, sentiment distributions, and contrast
edges/vertices.
"""

__version__ = "0.1.0"


class MediagraphError(Exception):
    """Base class for all toolkit errors."""


class InputError(MediagraphError):
    """Bad user input: malformed file, unknown id, out-of-range value.

    Maps to exit code 1 in the CLI. Carries optional path/line context so
    messages point at the offending record.
    """

    def __init__(self, message: str, *, path=None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class InternalError(MediagraphError):
    """A computed artifact violated one of its own invariants (exit code 2)."""

"""Annotation producer for the mediagraph toolkit.

Runs named-entity recognition, open-information-extraction and sentiment
engines over an article JSON-lines file and writes the annotation
interchange format consumed by `mediagraph annotate --mode import`. The
adapter never builds graphs or computes analytics; it only produces
annotations at the file boundary.
"""

__version__ = "0.1.0"


class AdapterError(Exception):
    """Startup or input error; the CLI maps it to a nonzero exit."""

"""Bounded denotational semantics of priorities in tock-CSP."""

__version__ = "0.1.0"

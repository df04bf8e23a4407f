"""Text classification toolkit for Azerbaijani news corpora."""

__version__ = "0.1.0"

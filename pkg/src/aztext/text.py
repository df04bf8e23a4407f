"""Azerbaijani-aware normalization, tokenization and sentence counting."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

_LETTER_RUN = re.compile(r"[^\W\d_]+")
_ALNUM_RUN = re.compile(r"[^\W_]+")
_TERMINATOR_RUN = re.compile(r"[.!?…]+")

SENTENCE_MODES = ("dot", "terminator")
MIN_STEM_LEN = 3


def read_word_list(path) -> list[str]:
    """Read a UTF-8 one-entry-per-line file, skipping blanks and ``#`` comments."""
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    return [line for line in lines if line and not line.startswith("#")]


def _shipped(name: str) -> Path:
    return Path(str(resources.files("aztext") / "data" / name))


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    return frozenset(normalize(w) for w in read_word_list(_shipped("stopwords_az.txt")))


@lru_cache(maxsize=None)
def default_suffixes() -> tuple[str, ...]:
    return tuple(read_word_list(_shipped("suffixes_az.txt")))


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: frozenset[str] = field(default_factory=frozenset)
    stemming: bool = False
    keep_digits: bool = False
    min_token_len: int = 1
    suffixes: tuple[str, ...] | None = None  # None: shipped suffix table

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        if self.suffixes is not None:
            object.__setattr__(self, "suffixes", tuple(self.suffixes))

    def to_dict(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords),
            "stemming": self.stemming,
            "keep_digits": self.keep_digits,
            "min_token_len": self.min_token_len,
            "suffixes": list(self.suffixes) if self.suffixes is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        suffixes = d.get("suffixes")
        return cls(
            stopwords=frozenset(d.get("stopwords", ())),
            stemming=bool(d.get("stemming", False)),
            keep_digits=bool(d.get("keep_digits", False)),
            min_token_len=int(d.get("min_token_len", 1)),
            suffixes=tuple(suffixes) if suffixes is not None else None,
        )


def normalize(text: str) -> str:
    """Lowercase with Azerbaijani dotted/dotless i rules.

    ``İ`` folds to ``i`` and ``I`` to ``ı``; everything else follows the
    default Unicode lowercase mapping.
    """
    return text.replace("İ", "i").replace("I", "ı").lower()


def tokenize(text: str, config: PipelineConfig = PipelineConfig()) -> list[str]:
    pattern = _ALNUM_RUN if config.keep_digits else _LETTER_RUN
    return [t for t in pattern.findall(text) if len(t) >= config.min_token_len]


def count_sentences(text: str, mode: str = "dot") -> int:
    """Number of sentences in ``text``.

    ``"dot"`` counts every period, so decimals like ``3.14`` add one.
    ``"terminator"`` counts each run of ``. ! ? …`` once.
    """
    if mode == "dot":
        return text.count(".")
    if mode == "terminator":
        return len(_TERMINATOR_RUN.findall(text))
    raise ValueError(f"unknown sentence mode {mode!r}")


def sentence_counter(mode: str = "dot"):
    if mode not in SENTENCE_MODES:
        raise ValueError(f"unknown sentence mode {mode!r}")
    return lambda text: count_sentences(text, mode)


def remove_stopwords(tokens: Iterable[str], stopwords) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def stem(token: str, suffixes: Iterable[str] | None = None, enabled: bool = True) -> str:
    """Strip known suffixes, longest first, until none applies.

    A suffix is only removed if at least ``MIN_STEM_LEN`` characters remain.
    Repeating to a fixed point makes the result idempotent.
    """
    if not enabled:
        return token
    table = _sorted_suffixes(tuple(default_suffixes() if suffixes is None else suffixes))
    changed = True
    while changed:
        changed = False
        for suffix in table:
            if token.endswith(suffix) and len(token) - len(suffix) >= MIN_STEM_LEN:
                token = token[: -len(suffix)]
                changed = True
                break
    return token


@lru_cache(maxsize=64)
def _sorted_suffixes(suffixes: tuple[str, ...]) -> tuple[str, ...]:
    # longest first, ties alphabetical so the order is deterministic
    return tuple(sorted(set(s for s in suffixes if s), key=lambda s: (-len(s), s)))


def process(text: str, config: PipelineConfig = PipelineConfig()) -> list[str]:
    """Run the full chain: normalize, tokenize, drop stop words, stem."""
    tokens = remove_stopwords(tokenize(normalize(text), config), config.stopwords)
    if config.stemming:
        tokens = [stem(t, config.suffixes) for t in tokens]
    return tokens

"""Corpus loading and cleaning: CSV ingest, dedup, threshold filtering, regex scrub."""

from __future__ import annotations

import csv
import re
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    EmptyCorpus,
    InvalidPattern,
    MalformedRow,
    MissingFile,
    SchemaError,
    UnknownCategory,
)
from .text import count_sentences

SCHEMA = ("id", "source", "published_at", "category", "title", "body")

SentenceCounter = Callable[[str], int]


@dataclass(frozen=True)
class Document:
    id: str
    source: str
    published_at: str
    category: str
    title: str
    body: str


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __init__(self, documents: Iterable[Document] = ()):
        object.__setattr__(self, "documents", tuple(documents))

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(d.category for d in self.documents)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, i):
        return self.documents[i]

    @property
    def bodies(self) -> list[str]:
        return [d.body for d in self.documents]


@dataclass(frozen=True)
class CleanThresholds:
    min_chars: int = 30
    max_chars: int = 10000
    min_sentences: int = 3
    max_sentences: int = 100

    def __post_init__(self):
        if not 0 <= self.min_chars <= self.max_chars:
            raise ValueError(f"need 0 <= min_chars <= max_chars, got {self.min_chars}, {self.max_chars}")
        if not 0 <= self.min_sentences <= self.max_sentences:
            raise ValueError(
                f"need 0 <= min_sentences <= max_sentences, got {self.min_sentences}, {self.max_sentences}"
            )


@dataclass
class CleanReport:
    input_count: int = 0
    dropped_duplicates: int = 0
    dropped_too_short_chars: int = 0
    dropped_too_long_chars: int = 0
    dropped_too_few_sentences: int = 0
    dropped_too_many_sentences: int = 0
    output_count: int = 0

    @property
    def total_dropped(self) -> int:
        return (
            self.dropped_duplicates
            + self.dropped_too_short_chars
            + self.dropped_too_long_chars
            + self.dropped_too_few_sentences
            + self.dropped_too_many_sentences
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DistributionStats:
    count: int
    mean: float
    std: float
    min: float
    p25: float
    p50: float
    p75: float
    max: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StatsReport:
    sentences: DistributionStats
    characters: DistributionStats
    total_sentences: int
    total_characters: int

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences.to_dict(),
            "characters": self.characters.to_dict(),
            "total_sentences": self.total_sentences,
            "total_characters": self.total_characters,
        }


@dataclass(frozen=True)
class Histogram:
    """Per-sentence-count document tally; the last bucket is ``>= max_bucket``."""

    max_bucket: int
    counts: tuple[int, ...] = field(default=())

    def __getitem__(self, k: int) -> int:
        return self.counts[min(k, self.max_bucket)]

    @property
    def overflow(self) -> int:
        return self.counts[-1]

    def total(self) -> int:
        return sum(self.counts)

    def to_dict(self) -> dict:
        out = {str(k): c for k, c in enumerate(self.counts[:-1])}
        out[f">={self.max_bucket}"] = self.counts[-1]
        return out


# -- loading / writing ------------------------------------------------------

def load_csv(path, schema: Sequence[str] = SCHEMA) -> Corpus:
    """Read an RFC-4180 CSV whose header names every column of ``schema``."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"no such file: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, strict=True)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header {','.join(schema)}") from None
        except csv.Error as exc:
            raise SchemaError(f"{path}: unreadable header: {exc}") from None
        if header and header[0].startswith("﻿"):
            header[0] = header[0][1:]
        missing = [c for c in schema if c not in header]
        if missing or len(header) != len(schema):
            raise SchemaError(
                f"{path}: header {header!r} does not match schema {list(schema)!r}"
                + (f" (missing {missing})" if missing else "")
            )
        pos = {name: header.index(name) for name in SCHEMA}
        docs = []
        try:
            for row in reader:
                if not row:
                    continue
                if len(row) != len(header):
                    raise MalformedRow(reader.line_num, f"expected {len(header)} fields, got {len(row)}")
                docs.append(Document(**{name: row[i] for name, i in pos.items()}))
        except csv.Error as exc:
            raise MalformedRow(reader.line_num, str(exc)) from None
    return Corpus(docs)


def write_csv(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCHEMA)
        for d in corpus:
            writer.writerow([getattr(d, name) for name in SCHEMA])


# -- cleaning ---------------------------------------------------------------

def deduplicate(corpus: Corpus) -> tuple[Corpus, int]:
    """Drop documents whose body exactly repeats an earlier one."""
    seen = set()
    kept = []
    for doc in corpus:
        key = doc.body.encode("utf-8")
        if key in seen:
            continue
        seen.add(key)
        kept.append(doc)
    return Corpus(kept), len(corpus) - len(kept)


def char_count(text: str) -> int:
    # str length is the number of code points, whitespace included
    return len(text)


def _drop_reason(body: str, t: CleanThresholds, sentence_counter: SentenceCounter) -> str | None:
    n = char_count(body)
    if n < t.min_chars:
        return "dropped_too_short_chars"
    if n > t.max_chars:
        return "dropped_too_long_chars"
    s = sentence_counter(body)
    if s < t.min_sentences:
        return "dropped_too_few_sentences"
    if s > t.max_sentences:
        return "dropped_too_many_sentences"
    return None


def clean_phase1(
    corpus: Corpus,
    thresholds: CleanThresholds = CleanThresholds(),
    sentence_counter: SentenceCounter = count_sentences,
) -> tuple[Corpus, CleanReport]:
    report = CleanReport(input_count=len(corpus))
    kept = []
    for doc in corpus:
        reason = _drop_reason(doc.body, thresholds, sentence_counter)
        if reason is None:
            kept.append(doc)
        else:
            setattr(report, reason, getattr(report, reason) + 1)
    report.output_count = len(kept)
    return Corpus(kept), report


@dataclass(frozen=True)
class ScrubRule:
    pattern: re.Pattern
    replacement: str = " "


def compile_rules(rules: Iterable[tuple[str, str] | str]) -> list[ScrubRule]:
    compiled = []
    for i, rule in enumerate(rules):
        pattern, replacement = (rule, " ") if isinstance(rule, str) else rule
        try:
            compiled.append(ScrubRule(re.compile(pattern), replacement))
        except re.error as exc:
            raise InvalidPattern(i, pattern, str(exc)) from None
    return compiled


def read_rules(path) -> list[ScrubRule]:
    """Parse a rule file: ``PATTERN<TAB>REPLACEMENT`` per line, ``#`` comments.

    A line without a tab uses a single space as its replacement.
    """
    rules = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            pattern, tab, replacement = line.partition("\t")
            rules.append((pattern, replacement if tab else " "))
    return compile_rules(rules)


def default_rules() -> list[ScrubRule]:
    return read_rules(Path(str(resources.files("aztext") / "data" / "scrub_rules.tsv")))


def scrub_text(text: str, rules: Sequence[ScrubRule]) -> str:
    changed = False
    for rule in rules:
        text, n = rule.pattern.subn(rule.replacement, text)
        changed = changed or n > 0
    # untouched bodies are returned as-is, whitespace and all
    return " ".join(text.split()) if changed else text


def scrub_noise(corpus: Corpus, rules: Sequence[ScrubRule] | None = None) -> Corpus:
    if rules is None:
        rules = default_rules()
    rules = [r if isinstance(r, ScrubRule) else compile_rules([r])[0] for r in rules]
    return Corpus(replace(d, body=scrub_text(d.body, rules)) for d in corpus)


def read_mapping(path) -> dict[str, str]:
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            old, tab, new = line.partition("\t")
            if not tab or not old.strip() or not new.strip():
                raise SchemaError(f"{path}:{lineno}: expected 'old<TAB>new'")
            mapping[old.strip()] = new.strip()
    return mapping


def merge_categories(corpus: Corpus, mapping: dict[str, str], policy: str = "passthrough") -> Corpus:
    """Relabel documents through ``mapping``.

    Under ``strict`` a label that is neither a key nor a target of the
    mapping raises UnknownCategory; targets count as already merged.
    """
    if policy not in ("passthrough", "strict"):
        raise ValueError(f"unknown merge policy {policy!r}")
    if any(not k or not v for k, v in mapping.items()):
        raise ValueError("mapping labels must be non-empty")
    targets = set(mapping.values())
    out = []
    for doc in corpus:
        if doc.category in mapping:
            doc = replace(doc, category=mapping[doc.category])
        elif policy == "strict" and doc.category not in targets:
            raise UnknownCategory(doc.category)
        out.append(doc)
    return Corpus(out)


def clean_pipeline(
    corpus: Corpus,
    thresholds: CleanThresholds = CleanThresholds(),
    rules: Sequence[ScrubRule] | None = None,
    mapping: dict[str, str] | None = None,
    policy: str = "passthrough",
    sentence_counter: SentenceCounter = count_sentences,
) -> tuple[Corpus, CleanReport]:
    """Dedup, threshold filter, scrub, merge; then re-check what scrubbing changed.

    Scrubbing can shorten bodies below the thresholds or make two bodies
    identical, so dedup and the threshold filter run once more afterwards.
    Both passes add to the same tallies, which makes a second run a no-op.
    """
    report = CleanReport(input_count=len(corpus))
    corpus, dropped = deduplicate(corpus)
    report.dropped_duplicates += dropped
    corpus, r1 = clean_phase1(corpus, thresholds, sentence_counter)
    corpus = scrub_noise(corpus, rules)
    corpus, dropped = deduplicate(corpus)
    report.dropped_duplicates += dropped
    corpus, r2 = clean_phase1(corpus, thresholds, sentence_counter)
    for r in (r1, r2):
        report.dropped_too_short_chars += r.dropped_too_short_chars
        report.dropped_too_long_chars += r.dropped_too_long_chars
        report.dropped_too_few_sentences += r.dropped_too_few_sentences
        report.dropped_too_many_sentences += r.dropped_too_many_sentences
    if mapping:
        corpus = merge_categories(corpus, mapping, policy)
    report.output_count = len(corpus)
    return corpus, report


# -- statistics -------------------------------------------------------------

def describe(values: Sequence[float]) -> DistributionStats:
    a = np.asarray(values, dtype=np.float64)
    if a.size == 0:
        raise EmptyCorpus("cannot describe an empty distribution")
    p25, p50, p75 = np.percentile(a, [25, 50, 75])
    return DistributionStats(
        count=int(a.size),
        mean=float(a.mean()),
        std=float(a.std(ddof=1)) if a.size > 1 else 0.0,
        min=float(a.min()),
        p25=float(p25),
        p50=float(p50),
        p75=float(p75),
        max=float(a.max()),
    )


def corpus_stats(corpus: Corpus, sentence_counter: SentenceCounter = count_sentences) -> StatsReport:
    if len(corpus) == 0:
        raise EmptyCorpus("corpus has no documents")
    sentences = [sentence_counter(d.body) for d in corpus]
    chars = [char_count(d.body) for d in corpus]
    return StatsReport(
        sentences=describe(sentences),
        characters=describe(chars),
        total_sentences=sum(sentences),
        total_characters=sum(chars),
    )


def sentence_histogram(
    corpus: Corpus, sentence_counter: SentenceCounter = count_sentences, max_bucket: int = 30
) -> Histogram:
    if max_bucket < 1:
        raise ValueError("max_bucket must be >= 1")
    counts = [0] * (max_bucket + 1)
    for doc in corpus:
        counts[min(sentence_counter(doc.body), max_bucket)] += 1
    return Histogram(max_bucket, tuple(counts))

"""Seeded synthetic news corpora used by the test-suite and for smoke runs.

Words are pseudo-Azerbaijani syllable strings, so they survive the
letters-only tokenizer and never collide with the stop-word list.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, Document

_CONSONANTS = list("bcçdfgğhxjkqlmnprsştvyz")
_VOWELS = list("aıoueəiöü")
CATEGORIES = ("idman", "iqtisadiyyat", "siyasət", "mədəniyyət", "texnologiya", "səhiyyə")


def make_words(n: int, rng: np.random.Generator, taken: set[str] | None = None) -> list[str]:
    taken = set() if taken is None else taken
    words = []
    while len(words) < n:
        syllables = rng.integers(2, 5)
        w = "".join(rng.choice(_CONSONANTS) + rng.choice(_VOWELS) for _ in range(syllables))
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def _render(tokens: list[str], rng: np.random.Generator) -> str:
    """Join tokens into dot-terminated sentences of 6 to 12 words."""
    sentences = []
    i = 0
    while i < len(tokens):
        k = int(rng.integers(6, 13))
        chunk = tokens[i : i + k]
        sentences.append(chunk[0].capitalize() + (" " + " ".join(chunk[1:]) if len(chunk) > 1 else "") + ".")
        i += k
    return " ".join(sentences)


def _doc(i: int, category: str, body: str, source: str = "synthetic") -> Document:
    return Document(
        id=f"doc{i:05d}",
        source=source,
        published_at=f"2019-02-{1 + i % 25:02d}",
        category=category,
        title=body.split(".")[0][:40],
        body=body,
    )


def separable_corpus(n_docs: int = 600, n_classes: int = 6, seed: int = 0) -> Corpus:
    """Each class draws from its own 30 keywords plus a shared filler pool."""
    rng = np.random.default_rng(seed)
    taken: set[str] = set()
    filler = make_words(20, rng, taken)
    keywords = [make_words(30, rng, taken) for _ in range(n_classes)]
    docs = []
    for i in range(n_docs):
        c = i % n_classes
        n = int(rng.integers(20, 41))
        own = rng.choice(keywords[c], size=n)
        fill = rng.choice(filler, size=n // 2)
        tokens = list(rng.permutation(np.concatenate([own, fill])))
        docs.append(_doc(i, CATEGORIES[c % len(CATEGORIES)] if n_classes <= 6 else f"c{c}", _render(tokens, rng)))
    return Corpus(docs)


def benchmark_corpus(n_docs: int = 3000, seed: int = 2019) -> Corpus:
    """Six overlapping topics with news-site boilerplate and bursty filler.

    * each class has 40 Zipf-weighted topic words; 30% of a document's
      topic tokens come from the next class instead
    * background words shared by every class, one or two of them repeated
      40 to 120 times in a burst
    * a 12-word boilerplate footer from one of 12 sources; half the time
      the source is one affiliated with the document's class
    * uniform noise from a 600-word pool
    """
    rng = np.random.default_rng(seed)
    taken: set[str] = set()
    n_classes = len(CATEGORIES)
    n_sources = 12
    background = make_words(40, rng, taken)
    noise = make_words(600, rng, taken)
    topics = [make_words(40, rng, taken) for _ in range(n_classes)]
    footers = [make_words(12, rng, taken) for _ in range(n_sources)]
    topic_p = 1.0 / np.arange(1, 41)
    topic_p /= topic_p.sum()
    docs = []
    for i in range(n_docs):
        c = int(rng.integers(n_classes))
        if rng.random() < 0.5:
            s = int(c + n_classes * rng.integers(n_sources // n_classes))
        else:
            s = int(rng.integers(n_sources))
        n_topic = int(rng.integers(3, 8))
        n_back = int(rng.integers(10, 40))
        n_noise = int(rng.integers(10, 30))
        src = np.where(rng.random(n_topic) < 0.3, (c + 1) % n_classes, c)
        topic_tokens = [topics[k][rng.choice(40, p=topic_p)] for k in src]
        back_tokens = list(rng.choice(background, size=n_back))
        for _ in range(int(rng.integers(1, 3))):
            back_tokens += [background[int(rng.integers(len(background)))]] * int(rng.integers(40, 120))
        noise_tokens = list(rng.choice(noise, size=n_noise))
        tokens = list(rng.permutation(np.array(topic_tokens + back_tokens + noise_tokens, dtype=object)))
        body = _render(tokens, rng) + " " + " ".join(footers[s]) + "."
        docs.append(_doc(i, CATEGORIES[c], body, source=f"site{s:02d}"))
    return Corpus(docs)

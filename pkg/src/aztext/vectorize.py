"""Vocabulary building and binary / count / TF-IDF sparse vectors."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import EmptyCorpus, EmptyDocument

VECTORIZERS = ("binary", "count", "tfidf")


class SparseVector:
    """Sorted (index, value) pairs with no stored zeros."""

    __slots__ = ("indices", "values")

    def __init__(self, indices=(), values=()):
        self.indices = np.asarray(indices, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        if self.indices.shape != self.values.shape or self.indices.ndim != 1:
            raise ValueError("indices and values must be 1-d and the same length")

    @classmethod
    def from_mapping(cls, mapping: dict[int, float]) -> "SparseVector":
        items = sorted((i, v) for i, v in mapping.items() if v != 0)
        return cls([i for i, _ in items], [v for _, v in items])

    @classmethod
    def from_dense(cls, dense) -> "SparseVector":
        dense = np.asarray(dense, dtype=np.float64)
        idx = np.flatnonzero(dense)
        return cls(idx, dense[idx])

    def to_dense(self, size: int) -> np.ndarray:
        out = np.zeros(size)
        out[self.indices] = self.values
        return out

    def to_dict(self) -> dict[int, float]:
        return dict(zip(self.indices.tolist(), self.values.tolist()))

    def scaled(self, k: float) -> "SparseVector":
        if k == 0:
            return SparseVector()
        return SparseVector(self.indices, self.values * k)

    def __len__(self):
        return int(self.indices.size)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return np.array_equal(self.indices, other.indices) and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"SparseVector({self.to_dict()!r})"


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    df: np.ndarray
    n_docs: int

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    @property
    def index(self) -> dict[str, int]:
        return self._index

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self._index

    def __getitem__(self, term) -> int:
        return self._index[term]


@dataclass(frozen=True)
class IdfTable:
    idf: np.ndarray

    def __getitem__(self, i) -> float:
        return float(self.idf[i])


def build_vocabulary(token_docs: Sequence[Sequence[str]], min_df: int = 1) -> Vocabulary:
    """Terms with document frequency >= ``min_df``, indexed by first occurrence."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if len(token_docs) == 0:
        raise EmptyCorpus("cannot build a vocabulary from zero documents")
    df: Counter = Counter()
    order: dict[str, None] = {}
    for tokens in token_docs:
        for t in tokens:
            order.setdefault(t)
        df.update(set(tokens))
    terms = tuple(t for t in order if df[t] >= min_df)
    return Vocabulary(terms, np.array([df[t] for t in terms], dtype=np.int64), len(token_docs))


def _counts(tokens: Iterable[str], vocab: Vocabulary) -> dict[int, int]:
    idx = vocab.index
    counts: dict[int, int] = {}
    for t in tokens:
        i = idx.get(t)
        if i is not None:
            counts[i] = counts.get(i, 0) + 1
    return counts


def vectorize_binary(tokens, vocab: Vocabulary) -> SparseVector:
    return SparseVector.from_mapping({i: 1.0 for i in _counts(tokens, vocab)})


def vectorize_count(tokens, vocab: Vocabulary) -> SparseVector:
    return SparseVector.from_mapping({i: float(c) for i, c in _counts(tokens, vocab).items()})


def fit_idf(token_docs: Sequence[Sequence[str]], vocab: Vocabulary) -> IdfTable:
    """idf(t) = ln(N / df(t)), with df and N taken from ``token_docs``."""
    df = np.zeros(len(vocab), dtype=np.int64)
    idx = vocab.index
    for tokens in token_docs:
        for t in set(tokens):
            i = idx.get(t)
            if i is not None:
                df[i] += 1
    n = len(token_docs)
    if np.any(df == 0):
        missing = vocab.terms[int(np.flatnonzero(df == 0)[0])]
        raise ValueError(f"term {missing!r} never occurs in the documents given to fit_idf")
    return IdfTable(np.array([math.log(n / d) for d in df.tolist()], dtype=np.float64))


def vectorize_tfidf(tokens, vocab: Vocabulary, idf: IdfTable) -> SparseVector:
    counts = _counts(tokens, vocab)
    total = sum(counts.values())
    if total == 0:
        raise EmptyDocument("document has no in-vocabulary tokens")
    return SparseVector.from_mapping({i: (c / total) * idf.idf[i] for i, c in counts.items()})


def vectorize(tokens, vocab: Vocabulary, kind: str, idf: IdfTable | None = None) -> SparseVector:
    """Dispatch on ``kind``; an all-OOV document becomes the empty vector."""
    if kind == "binary":
        return vectorize_binary(tokens, vocab)
    if kind == "count":
        return vectorize_count(tokens, vocab)
    if kind == "tfidf":
        if idf is None:
            raise ValueError("tfidf vectorizer needs an idf table")
        try:
            return vectorize_tfidf(tokens, vocab, idf)
        except EmptyDocument:
            return SparseVector()
    raise ValueError(f"unknown vectorizer {kind!r}")


def to_csr(vectors: Sequence[SparseVector], n_features: int) -> sp.csr_matrix:
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    np.cumsum([len(v) for v in vectors], out=indptr[1:])
    if vectors:
        indices = np.concatenate([v.indices for v in vectors])
        data = np.concatenate([v.values for v in vectors])
    else:
        indices, data = np.zeros(0, np.int64), np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), n_features))


def dump_vectors(vectors: Sequence[SparseVector]) -> str:
    """One ``(doc, index) value`` line per stored entry, like a scipy sparse print."""
    lines = []
    for d, v in enumerate(vectors):
        for i, x in zip(v.indices.tolist(), v.values.tolist()):
            shown = int(x) if float(x).is_integer() else x
            lines.append(f"({d}, {i}) {shown}")
    return "\n".join(lines)

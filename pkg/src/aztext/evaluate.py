"""Train/test splitting, confusion matrices and classification metrics."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .errors import EmptyCorpus, EmptyMatrix, LengthMismatch
from .text import process


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _test_size(n: int, fraction: float) -> int:
    if n < 2:
        return 0
    return min(max(_round_half_up(n * fraction), 1), n - 1)


def split(
    corpus: Corpus, test_fraction: float = 0.1, seed: int = 0, stratified: bool = True
) -> tuple[Corpus, Corpus]:
    """Seeded shuffle, then hold out ``test_fraction`` (per class when stratified).

    Both halves keep the original corpus order.
    """
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if len(corpus) == 0:
        raise EmptyCorpus("cannot split an empty corpus")
    rng = np.random.default_rng(seed)
    if stratified:
        groups = defaultdict(list)
        for i, doc in enumerate(corpus):
            groups[doc.category].append(i)
        test = []
        for label in sorted(groups):
            members = np.asarray(groups[label])
            shuffled = members[rng.permutation(len(members))]
            test.extend(shuffled[: _test_size(len(members), test_fraction)].tolist())
    else:
        order = rng.permutation(len(corpus))
        test = order[: _test_size(len(corpus), test_fraction)].tolist()
    held = set(test)
    train_docs = [d for i, d in enumerate(corpus) if i not in held]
    test_docs = [d for i, d in enumerate(corpus) if i in held]
    return Corpus(train_docs), Corpus(test_docs)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes."""

    counts: np.ndarray
    class_names: tuple[str, ...]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def format(self) -> str:
        width = max(len(str(int(v))) for v in self.counts.ravel()) if self.counts.size else 1
        rows = [" ".join(f"{int(v):>{width}d}" for v in row) for row in self.counts]
        return "[" + "\n ".join(f"[{r}]" for r in rows) + "]"


def confusion_matrix(y_true: Sequence[int], y_pred: Sequence[int], class_names: Sequence[str]) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    C = len(class_names)
    m = np.zeros((C, C), dtype=np.int64)
    if len(y_true):
        np.add.at(m, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return ConfusionMatrix(m, tuple(class_names))


def _ratio(num, den):
    return np.divide(num, den, out=np.zeros(len(num)), where=den > 0)


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float
    matrix: ConfusionMatrix

    def to_dict(self) -> dict:
        names = self.matrix.class_names
        return {
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "per_class": {
                n: {"precision": float(p), "recall": float(r), "f1": float(f), "support": int(s)}
                for n, p, r, f, s in zip(
                    names, self.precision, self.recall, self.f1, self.matrix.counts.sum(axis=1)
                )
            },
            "class_names": list(names),
            "confusion_matrix": self.matrix.counts.tolist(),
        }


def metrics_from_matrix(m: ConfusionMatrix) -> EvalReport:
    counts = m.counts.astype(np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptyMatrix("confusion matrix has no entries")
    diag = np.diag(counts)
    precision = _ratio(diag, counts.sum(axis=0))
    recall = _ratio(diag, counts.sum(axis=1))
    f1 = _ratio(2 * precision * recall, precision + recall)
    return EvalReport(
        accuracy=float(diag.sum() / total),
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        matrix=m,
    )


def evaluate_model(model, texts: Sequence[str], labels: Sequence[str]) -> EvalReport:
    """Predict every text with ``model`` and score against ``labels``.

    Texts that normalize to nothing fall back to the classifier's
    empty-input prediction.
    """
    lookup = {c: i for i, c in enumerate(model.class_names)}
    y_pred = []
    for t in texts:
        x = model.vectorize_tokens(process(t, model.pipeline))
        y_pred.append(model.predict_vector(x)[0])
    y_true = [lookup[l] for l in labels]
    return metrics_from_matrix(confusion_matrix(y_true, y_pred, model.class_names))

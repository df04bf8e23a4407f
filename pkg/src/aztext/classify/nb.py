"""Multinomial Naive Bayes with additive smoothing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vectorize import SparseVector
from .dataset import LabeledDataset


@dataclass(frozen=True)
class NbModel:
    log_priors: np.ndarray  # (C,)
    log_likelihoods: np.ndarray  # (C, V)
    alpha: float


def train_nb(data: LabeledDataset, alpha: float = 1.0) -> NbModel:
    """Fit class priors and smoothed per-class term distributions.

    Feature values are used as (possibly fractional) term counts, so the
    same code serves count, binary and TF-IDF inputs.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    data.require_trainable()
    C, V = data.n_classes, data.n_features
    X = data.matrix()
    onehot = np.zeros((len(data.y), C))
    onehot[np.arange(len(data.y)), data.y] = 1.0
    class_docs = onehot.sum(axis=0)
    term_counts = np.asarray((X.T @ onehot).T)  # (C, V)
    with np.errstate(divide="ignore"):
        log_priors = np.log(class_docs / class_docs.sum())
    smoothed = term_counts + alpha
    log_likelihoods = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    return NbModel(log_priors, log_likelihoods, float(alpha))


def predict_scores_nb(model: NbModel, x: SparseVector) -> np.ndarray:
    """Unnormalized log-posterior per class."""
    if len(x) == 0:
        return model.log_priors.copy()
    return model.log_priors + model.log_likelihoods[:, x.indices] @ x.values


def predict_nb(model: NbModel, x: SparseVector) -> tuple[int, np.ndarray]:
    scores = predict_scores_nb(model, x)
    return int(np.argmax(scores)), scores

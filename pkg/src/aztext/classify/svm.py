"""One-vs-rest linear SVM trained with Pegasos-style stochastic subgradient steps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..vectorize import SparseVector
from .dataset import LabeledDataset


@dataclass(frozen=True)
class SvmModel:
    weights: np.ndarray  # (C, V)
    biases: np.ndarray  # (C,)
    lam: float
    epochs: int
    seed: int


def hinge_objective(w: np.ndarray, b: float, X, y_pm: np.ndarray, lam: float) -> float:
    """lam/2 * (|w|^2 + b^2) + mean hinge loss; the bias is regularized too."""
    margins = y_pm * (X @ w + b)
    return 0.5 * lam * (float(w @ w) + b * b) + float(np.maximum(0.0, 1.0 - margins).mean())


def train_binary(X, y_pm: np.ndarray, lam: float, epochs: int, seed: int, on_epoch=None):
    """Train one separator; returns ``(w, b)``.

    Each epoch visits the rows in a fresh seeded permutation with step
    1/(lam*t). The bias rides along as a constant feature, and after every
    step the iterate is projected onto the ball of radius 1/sqrt(lam).
    The weight vector is kept as ``scale * v`` so shrinking costs O(1).
    """
    n, V = X.shape
    rng = np.random.default_rng(seed)
    indptr, indices, data = X.indptr, X.indices, X.data
    v = np.zeros(V)
    vb = 0.0
    scale = 1.0
    sqnorm = 0.0
    radius_sq = 1.0 / lam
    t = 0
    for epoch in range(epochs):
        for r in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            lo, hi = indptr[r], indptr[r + 1]
            idx, vals = indices[lo:hi], data[lo:hi]
            y = y_pm[r]
            margin = y * scale * (float(v[idx] @ vals) + vb)
            shrink = 1.0 - eta * lam
            if shrink <= 0.0:
                v[:] = 0.0
                vb = 0.0
                scale = 1.0
                sqnorm = 0.0
            else:
                scale *= shrink
                sqnorm *= shrink * shrink
            if margin < 1.0:
                step = eta * y / scale
                old = v[idx]
                v[idx] = old + step * vals
                old_b = vb
                vb = old_b + step
                # |w|^2 changes only on the touched coordinates
                sqnorm += scale * scale * (
                    float(v[idx] @ v[idx] - old @ old) + vb * vb - old_b * old_b
                )
            if sqnorm > radius_sq:
                factor = math.sqrt(radius_sq / sqnorm)
                scale *= factor
                sqnorm = radius_sq
            if scale < 1e-100:
                v *= scale
                vb *= scale
                scale = 1.0
        # fold the scale back in to stop rounding drift
        v *= scale
        vb *= scale
        scale = 1.0
        sqnorm = float(v @ v) + vb * vb
        if on_epoch is not None:
            on_epoch(epoch, v.copy(), vb)
    return v, vb


def train_svm_ovr(
    data: LabeledDataset, lam: float = 1e-5, epochs: int = 50, seed: int = 0
) -> SvmModel:
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    data.require_trainable()
    X = data.matrix()
    C = data.n_classes
    W = np.zeros((C, data.n_features))
    b = np.zeros(C)
    for c in range(C):
        y_pm = np.where(data.y == c, 1.0, -1.0)
        W[c], b[c] = train_binary(X, y_pm, lam, epochs, seed + c)
    return SvmModel(W, b, float(lam), int(epochs), int(seed))


def decision_values(model: SvmModel, x: SparseVector) -> np.ndarray:
    if len(x) == 0:
        return model.biases.copy()
    return model.weights[:, x.indices] @ x.values + model.biases


def predict_svm(model: SvmModel, x: SparseVector) -> tuple[int, np.ndarray]:
    d = decision_values(model, x)
    return int(np.argmax(d)), d

"""Self-contained trained models: pipeline config + vocabulary + classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import EmptyInput
from ..text import PipelineConfig, normalize, process
from ..vectorize import (
    IdfTable,
    SparseVector,
    Vocabulary,
    build_vocabulary,
    fit_idf,
    vectorize,
)
from .dataset import LabeledDataset
from .mlp import MlpModel, predict_mlp, train_mlp
from .nb import NbModel, predict_nb, train_nb
from .svm import SvmModel, predict_svm, train_svm_ovr

FORMAT_VERSION = 1
MODEL_KINDS = ("nb", "svm", "mlp")
DEFAULT_VECTORIZER = {"nb": "count", "svm": "tfidf", "mlp": "tfidf"}


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    payload: NbModel | SvmModel | MlpModel
    vocabulary: Vocabulary
    vectorizer: str
    pipeline: PipelineConfig
    class_names: tuple[str, ...]
    idf: IdfTable | None = None
    format_version: int = FORMAT_VERSION
    idf_log_base: str = field(default="e")

    def vectorize_tokens(self, tokens: Sequence[str]) -> SparseVector:
        return vectorize(tokens, self.vocabulary, self.vectorizer, self.idf)

    def predict_vector(self, x: SparseVector) -> tuple[int, np.ndarray]:
        if self.kind == "nb":
            return predict_nb(self.payload, x)
        if self.kind == "svm":
            return predict_svm(self.payload, x)
        if self.kind == "mlp":
            return predict_mlp(self.payload, x)
        raise ValueError(f"unknown model kind {self.kind!r}")


def predict_text(model: TrainedModel, raw_text: str) -> tuple[str, dict[str, float]]:
    """Classify raw text; scores are log-posteriors, decision values or probabilities."""
    if not normalize(raw_text).strip():
        raise EmptyInput("text is empty after normalization")
    x = model.vectorize_tokens(process(raw_text, model.pipeline))
    best, scores = model.predict_vector(x)
    return model.class_names[best], dict(zip(model.class_names, scores.tolist()))


@dataclass
class FeatureSpace:
    """Vocabulary (+ idf) fitted on training texts, reusable for held-out texts."""

    pipeline: PipelineConfig
    vectorizer: str
    vocabulary: Vocabulary
    idf: IdfTable | None

    @classmethod
    def fit(cls, texts: Sequence[str], pipeline: PipelineConfig, vectorizer: str, min_df: int = 1):
        token_docs = [process(t, pipeline) for t in texts]
        vocab = build_vocabulary(token_docs, min_df)
        idf = fit_idf(token_docs, vocab) if vectorizer == "tfidf" else None
        return cls(pipeline, vectorizer, vocab, idf)

    def transform(self, texts: Sequence[str]) -> list[SparseVector]:
        return [vectorize(process(t, self.pipeline), self.vocabulary, self.vectorizer, self.idf) for t in texts]


def fit_model(
    texts: Sequence[str],
    labels: Sequence[str],
    kind: str,
    vectorizer: str | None = None,
    pipeline: PipelineConfig = PipelineConfig(),
    min_df: int = 1,
    class_names: Sequence[str] | None = None,
    alpha: float = 1.0,
    lam: float = 1e-5,
    epochs: int = 50,
    hidden=(100,),
    solver: str = "lbfgs",
    max_iters: int = 200,
    tol: float = 1e-6,
    seed: int = 0,
) -> TrainedModel:
    """Fit features on ``texts`` and train a classifier of ``kind``."""
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    vectorizer = vectorizer or DEFAULT_VECTORIZER[kind]
    class_names = tuple(class_names) if class_names is not None else tuple(sorted(set(labels)))
    lookup = {c: i for i, c in enumerate(class_names)}
    features = FeatureSpace.fit(texts, pipeline, vectorizer, min_df)
    data = LabeledDataset(
        features.transform(texts), [lookup[l] for l in labels], class_names, len(features.vocabulary)
    )
    if kind == "nb":
        payload = train_nb(data, alpha)
    elif kind == "svm":
        payload = train_svm_ovr(data, lam, epochs, seed)
    else:
        payload = train_mlp(data, hidden, solver, seed, max_iters, tol)
    return TrainedModel(
        kind=kind,
        payload=payload,
        vocabulary=features.vocabulary,
        vectorizer=vectorizer,
        pipeline=pipeline,
        class_names=class_names,
        idf=features.idf,
    )

"""Naive Bayes, one-vs-rest linear SVM and MLP classifiers plus model files."""

from .dataset import LabeledDataset
from .mlp import MlpModel, predict_mlp, predict_proba, train_mlp
from .model import (
    DEFAULT_VECTORIZER,
    FORMAT_VERSION,
    MODEL_KINDS,
    FeatureSpace,
    TrainedModel,
    fit_model,
    predict_text,
)
from .modelfile import from_bytes, load_model, save_model, to_bytes
from .nb import NbModel, predict_nb, predict_scores_nb, train_nb
from .svm import SvmModel, decision_values, predict_svm, train_svm_ovr

__all__ = [
    "DEFAULT_VECTORIZER",
    "FORMAT_VERSION",
    "MODEL_KINDS",
    "FeatureSpace",
    "LabeledDataset",
    "MlpModel",
    "NbModel",
    "SvmModel",
    "TrainedModel",
    "decision_values",
    "fit_model",
    "from_bytes",
    "load_model",
    "predict_mlp",
    "predict_nb",
    "predict_proba",
    "predict_scores_nb",
    "predict_svm",
    "predict_text",
    "save_model",
    "to_bytes",
    "train_mlp",
    "train_nb",
    "train_svm_ovr",
]

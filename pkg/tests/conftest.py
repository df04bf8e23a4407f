import pytest

from aztext.classify import fit_model
from aztext.evaluate import split
from aztext.synthetic import separable_corpus
from aztext.text import PipelineConfig, default_stopwords


@pytest.fixture(scope="session")
def separable():
    return separable_corpus()


@pytest.fixture(scope="session")
def separable_split(separable):
    return split(separable, 0.1, seed=7)


@pytest.fixture(scope="session")
def trained(separable_split):
    """One model per kind, trained on the 90% split of the separable fixture."""
    train, _ = separable_split
    texts = [d.body for d in train]
    labels = [d.category for d in train]
    pipeline = PipelineConfig(stopwords=default_stopwords())
    return {
        kind: fit_model(texts, labels, kind, pipeline=pipeline, seed=7, hidden=(32,))
        for kind in ("nb", "svm", "mlp")
    }

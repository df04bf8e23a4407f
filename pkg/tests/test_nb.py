import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aztext.classify import LabeledDataset, predict_nb, predict_scores_nb, train_nb
from aztext.errors import DegenerateDataset
from aztext.vectorize import SparseVector, build_vocabulary, vectorize_count

from helpers import bayes_oracle, random_nb_instance

D1 = ["lion", "it", "it", "lion", "forest", "it", "man"]
D2 = ["cat", "it", "live", "it", "house", "it"]


def _dataset(docs, labels, n_classes, n_terms):
    return LabeledDataset([SparseVector.from_mapping(d) for d in docs], labels, [f"c{i}" for i in range(n_classes)], n_terms)


def test_wild_vs_domestic_example():
    vocab = build_vocabulary([D1, D2])
    X = [vectorize_count(D1, vocab), vectorize_count(D2, vocab)]
    model = train_nb(LabeledDataset(X, [0, 1], ["wild", "domestic"], len(vocab)), alpha=1.0)
    x = vectorize_count(["lion", "forest"], vocab)
    best, scores = predict_nb(model, x)
    expected = bayes_oracle([v.to_dict() for v in X], [0, 1], 2, len(vocab), 1.0, x.to_dict())
    np.testing.assert_allclose(scores, expected, rtol=0, atol=1e-12)
    assert best == 0
    # hand arithmetic: P(lion|wild) = 3/14, P(lion|domestic) = 1/13
    assert math.exp(model.log_likelihoods[0, vocab["lion"]]) == pytest.approx(3 / 14)
    assert math.exp(model.log_likelihoods[1, vocab["lion"]]) == pytest.approx(1 / 13)


def test_smoothing_keeps_everything_finite():
    vocab = build_vocabulary([D1, D2])
    X = [vectorize_count(D1, vocab), vectorize_count(D2, vocab)]
    model = train_nb(LabeledDataset(X, [0, 1], ["wild", "domestic"], len(vocab)), alpha=1.0)
    assert np.all(np.isfinite(model.log_likelihoods))


def test_balanced_priors():
    data = _dataset([{0: 1.0}, {1: 1.0}, {0: 2.0}, {1: 1.0}], [0, 1, 0, 1], 2, 2)
    np.testing.assert_array_equal(train_nb(data).log_priors, [math.log(0.5)] * 2)


def test_empty_vector_gives_priors():
    data = _dataset([{0: 1.0}, {0: 1.0}, {1: 1.0}], [0, 0, 1], 2, 2)
    model = train_nb(data)
    best, scores = predict_nb(model, SparseVector())
    np.testing.assert_array_equal(scores, model.log_priors)
    assert best == 0


def test_constant_likelihood_term_does_not_change_argmax():
    # term 2 gets the same count in every class, so its likelihood is class-independent
    data = _dataset([{0: 3.0, 2: 1.0}, {1: 3.0, 2: 1.0}], [0, 1], 2, 3)
    model = train_nb(data)
    lik = model.log_likelihoods[:, 2]
    assert lik[0] == pytest.approx(lik[1])
    for x in ({0: 1.0}, {1: 2.0}, {0: 1.0, 1: 1.0}):
        base = predict_nb(model, SparseVector.from_mapping(x))[0]
        with_term = predict_nb(model, SparseVector.from_mapping({**x, 2: 5.0}))[0]
        assert base == with_term


def test_degenerate_and_bad_alpha():
    with pytest.raises(DegenerateDataset):
        train_nb(_dataset([{0: 1.0}, {1: 1.0}], [0, 0], 2, 2))
    with pytest.raises(ValueError):
        train_nb(_dataset([{0: 1.0}, {1: 1.0}], [0, 1], 2, 2), alpha=0)


def test_tie_break_lowest_index():
    data = _dataset([{0: 1.0}, {1: 1.0}], [0, 1], 2, 2)
    assert predict_nb(train_nb(data), SparseVector())[0] == 0


def test_random_instances_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(200):
        docs, labels, C, V, alpha, x = random_nb_instance(rng)
        model = train_nb(_dataset(docs, labels, C, V), alpha)
        scores = predict_scores_nb(model, SparseVector.from_mapping(x))
        expected = bayes_oracle(docs, labels, C, V, alpha, x)
        np.testing.assert_allclose(scores, expected, rtol=0, atol=1e-12)
        assert int(np.argmax(scores)) == int(np.argmax(expected))


@given(st.integers(0, 10_000), st.floats(0.01, 5.0))
def test_likelihoods_normalized(seed, alpha):
    rng = np.random.default_rng(seed)
    docs, labels, C, V, _, _ = random_nb_instance(rng)
    model = train_nb(_dataset(docs, labels, C, V), alpha)
    np.testing.assert_allclose(np.exp(model.log_likelihoods).sum(axis=1), 1.0, atol=1e-9)
    assert abs(np.exp(model.log_priors).sum() - 1.0) < 1e-9


@given(st.integers(0, 10_000), st.floats(-50, 50))
def test_argmax_invariant_under_constant_shift(seed, k):
    rng = np.random.default_rng(seed)
    docs, labels, C, V, alpha, x = random_nb_instance(rng)
    scores = predict_scores_nb(train_nb(_dataset(docs, labels, C, V), alpha), SparseVector.from_mapping(x))
    assert int(np.argmax(scores + k)) == int(np.argmax(scores))

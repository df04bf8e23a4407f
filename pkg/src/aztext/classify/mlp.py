"""Multi-layer perceptron with tanh hidden layers and a softmax output."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.optimize import minimize

from ..errors import NonFiniteLoss
from ..vectorize import SparseVector
from .dataset import LabeledDataset

SOLVERS = ("lbfgs", "sgd")


@dataclass(frozen=True)
class MlpModel:
    sizes: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    activation: str = "tanh"
    seed: int = 0

    @property
    def n_classes(self) -> int:
        return self.sizes[-1]


def init_params(sizes, seed: int) -> tuple[list[np.ndarray], list[np.ndarray]]:
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        r = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-r, r, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-r, r, size=fan_out))
    return weights, biases


def _pack(weights, biases) -> np.ndarray:
    return np.concatenate([a.ravel() for pair in zip(weights, biases) for a in pair])


def _unpack(theta: np.ndarray, sizes):
    weights, biases = [], []
    pos = 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(theta[pos : pos + fan_in * fan_out].reshape(fan_in, fan_out))
        pos += fan_in * fan_out
        biases.append(theta[pos : pos + fan_out])
        pos += fan_out
    return weights, biases


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _forward(weights, biases, X):
    acts = [X]
    h = X
    for k, (W, b) in enumerate(zip(weights, biases)):
        z = h @ W + b
        z = np.asarray(z)
        h = _softmax(z) if k == len(weights) - 1 else np.tanh(z)
        acts.append(h)
    return acts


def loss_and_grad(theta, sizes, X, Y, l2=0.0):
    """Mean cross-entropy (+ l2/2n * |W|^2) and its gradient w.r.t. ``theta``.

    ``Y`` is the one-hot target matrix.
    """
    weights, biases = _unpack(theta, sizes)
    n = X.shape[0]
    acts = _forward(weights, biases, X)
    P = acts[-1]
    loss = -float(np.sum(Y * np.log(np.clip(P, 1e-300, None)))) / n
    loss += 0.5 * l2 / n * sum(float(np.sum(W * W)) for W in weights)
    grads_w = [None] * len(weights)
    grads_b = [None] * len(weights)
    delta = (P - Y) / n
    for k in range(len(weights) - 1, -1, -1):
        a = acts[k]
        gw = a.T @ delta
        grads_w[k] = np.asarray(gw) + l2 / n * weights[k]
        grads_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ weights[k].T) * (1.0 - acts[k] ** 2)
    return loss, _pack(grads_w, grads_b)


def train_mlp(
    data: LabeledDataset,
    hidden=(100,),
    solver: str = "lbfgs",
    seed: int = 0,
    max_iters: int = 200,
    tol: float = 1e-6,
    l2: float = 1e-4,
    learning_rate: float = 0.1,
    batch_size: int = 32,
) -> MlpModel:
    """Fit by full-batch L-BFGS (default) or minibatch SGD."""
    hidden = tuple(int(h) for h in hidden)
    if not hidden or min(hidden) < 1:
        raise ValueError("hidden must list at least one positive layer size")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}, expected one of {SOLVERS}")
    data.require_trainable()
    sizes = (data.n_features, *hidden, data.n_classes)
    X = data.matrix()
    Y = np.zeros((len(data.y), data.n_classes))
    Y[np.arange(len(data.y)), data.y] = 1.0
    theta = _pack(*init_params(sizes, seed))

    def fun(th):
        with np.errstate(over="ignore", invalid="ignore"):
            loss, grad = loss_and_grad(th, sizes, X, Y, l2)
        if not math.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise NonFiniteLoss(f"loss became {loss}")
        return loss, grad

    if solver == "lbfgs":
        res = minimize(
            fun, theta, jac=True, method="L-BFGS-B",
            options={"maxiter": max_iters, "ftol": tol, "gtol": 1e-10},
        )
        theta = res.x
    else:
        theta = _sgd(fun, theta, X, Y, sizes, l2, seed, max_iters, tol, learning_rate, batch_size)
    weights, biases = _unpack(theta, sizes)
    return MlpModel(sizes, tuple(w.copy() for w in weights), tuple(b.copy() for b in biases), "tanh", seed)


def _sgd(fun, theta, X, Y, sizes, l2, seed, epochs, tol, lr, batch_size):
    rng = np.random.default_rng(seed + 1)
    n = X.shape[0]
    prev = fun(theta)[0]
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            rows = order[start : start + batch_size]
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grad = loss_and_grad(theta, sizes, X[rows], Y[rows], l2 * len(rows) / n)
            if not math.isfinite(loss) or not np.all(np.isfinite(grad)):
                raise NonFiniteLoss(f"minibatch loss became {loss}")
            theta = theta - lr * grad
        cur = fun(theta)[0]
        if prev - cur < tol:
            break
        prev = cur
    return theta


def predict_proba(model: MlpModel, x: SparseVector) -> np.ndarray:
    X = sp.csr_matrix((x.values, x.indices, [0, len(x)]), shape=(1, model.sizes[0]))
    return _forward(model.weights, model.biases, X)[-1][0]


def predict_mlp(model: MlpModel, x: SparseVector) -> tuple[int, np.ndarray]:
    p = predict_proba(model, x)
    return int(np.argmax(p)), p

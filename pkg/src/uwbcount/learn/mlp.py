"""Fully connected softmax classifier trained with Adam.

Three ReLU hidden layers by default; inputs are standardized per feature
using training-set statistics.  Gradients are plain backprop in float64 so
they can be checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


def _relu(x):
    return np.maximum(x, 0.0)


@dataclass
class NeuralNet:
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)
    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    classes: np.ndarray | None = None

    @classmethod
    def init(
        cls, n_features: int, classes: np.ndarray, hidden=(100, 200, 100), seed: int = 0
    ) -> "NeuralNet":
        sizes = [n_features, *hidden, len(classes)]
        weights, biases = [], []
        for li in range(len(sizes) - 1):
            rng = np.random.default_rng([seed, li])
            scale = np.sqrt(2.0 / sizes[li])
            weights.append(scale * rng.standard_normal((sizes[li], sizes[li + 1])))
            biases.append(np.zeros(sizes[li + 1]))
        return cls(
            weights=weights,
            biases=biases,
            mean=np.zeros(n_features),
            std=np.ones(n_features),
            classes=np.asarray(classes, dtype=np.int64),
        )

    def _forward(self, x_std: np.ndarray):
        acts = [x_std]
        h = x_std
        for li in range(len(self.weights) - 1):
            h = _relu(h @ self.weights[li] + self.biases[li])
            acts.append(h)
        logits = h @ self.weights[-1] + self.biases[-1]
        return acts, logits

    @staticmethod
    def _softmax(logits: np.ndarray) -> np.ndarray:
        z = logits - logits.max(axis=1, keepdims=True)
        e = np.exp(z)
        return e / e.sum(axis=1, keepdims=True)

    def loss_and_gradients(self, x_std: np.ndarray, y_enc: np.ndarray):
        """Mean cross-entropy and its gradients w.r.t. every parameter."""
        n = x_std.shape[0]
        acts, logits = self._forward(x_std)
        p = self._softmax(logits)
        loss = float(-np.mean(np.log(p[np.arange(n), y_enc] + 1e-300)))
        delta = p
        delta[np.arange(n), y_enc] -= 1.0
        delta /= n
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.biases)
        for li in range(len(self.weights) - 1, -1, -1):
            grads_w[li] = acts[li].T @ delta
            grads_b[li] = delta.sum(axis=0)
            if li > 0:
                delta = (delta @ self.weights[li].T) * (acts[li] > 0)
        return loss, grads_w, grads_b

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        epochs: int = 200,
        batch_size: int = 32,
        learning_rate: float = 1e-3,
        seed: int = 0,
    ) -> "NeuralNet":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if not np.all(np.isfinite(X)):
            raise DomainError("features contain NaN or infinity")
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.std = np.where(std > 0, std, 1.0)
        xs = (X - self.mean) / self.std
        y_enc = np.searchsorted(self.classes, y)

        beta1, beta2, eps = 0.9, 0.999, 1e-8
        params = self.weights + self.biases
        m = [np.zeros_like(p) for p in params]
        v = [np.zeros_like(p) for p in params]
        step = 0
        shuffle_rng = np.random.default_rng([seed, 0xB])
        n = xs.shape[0]
        for _ in range(epochs):
            order = shuffle_rng.permutation(n)
            for start in range(0, n, batch_size):
                batch = order[start : start + batch_size]
                _, gw, gb = self.loss_and_gradients(xs[batch], y_enc[batch])
                grads = gw + gb
                step += 1
                for pi, (par, g) in enumerate(zip(params, grads)):
                    m[pi] = beta1 * m[pi] + (1 - beta1) * g
                    v[pi] = beta2 * v[pi] + (1 - beta2) * g * g
                    m_hat = m[pi] / (1 - beta1**step)
                    v_hat = v[pi] / (1 - beta2**step)
                    par -= learning_rate * m_hat / (np.sqrt(v_hat) + eps)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        xs = (X - self.mean) / self.std
        _, logits = self._forward(xs)
        return self.classes[np.argmax(logits, axis=1)]

"""Multiclass AdaBoost with real-valued (probability) stage votes, SAMME.R."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .tree import DecisionTree

_EPS = np.finfo(np.float64).eps


@dataclass
class AdaBoostSammeR:
    stages: list[DecisionTree] = field(default_factory=list)
    classes: np.ndarray | None = None

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_stages: int = 50,
        base_depth: int = 3,
        min_leaf: int = 1,
    ) -> "AdaBoostSammeR":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if n_stages < 1:
            raise DomainError("n_stages must be positive")
        n = X.shape[0]
        classes = np.unique(y)
        k = len(classes)
        y_enc = np.searchsorted(classes, y)
        w = np.full(n, 1.0 / n)
        stages: list[DecisionTree] = []
        for _ in range(n_stages):
            tree = DecisionTree.fit(
                X, y, sample_weight=w, max_depth=base_depth,
                min_leaf=min_leaf, classes=classes,
            )
            stages.append(tree)
            if k == 1:
                break
            proba = np.clip(tree.predict_proba(X), _EPS, None)
            log_p = np.log(proba)
            incorrect = tree.predict(X) != y
            error = float(np.dot(w, incorrect))
            if error <= 0:
                break
            # Symmetric class coding: +1 on the true class, -1/(K-1) elsewhere.
            coded = log_p[np.arange(n), y_enc] - (
                log_p.sum(axis=1) - log_p[np.arange(n), y_enc]
            ) / (k - 1)
            w = w * np.exp(-((k - 1.0) / k) * coded)
            total = w.sum()
            if total <= 0:
                break
            w /= total
        return cls(stages=stages, classes=classes)

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """Sum of per-stage symmetric log-probability votes."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        k = len(self.classes)
        total = np.zeros((X.shape[0], k))
        for tree in self.stages:
            log_p = np.log(np.clip(tree.predict_proba(X), _EPS, None))
            total += (k - 1.0) * (log_p - log_p.mean(axis=1, keepdims=True))
        return total

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes[np.argmax(self.decision_function(X), axis=1)]

"""Bootstrap-bagged random forest over the CART trees."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .tree import DecisionTree


def _vote(predictions: np.ndarray, classes: np.ndarray) -> np.ndarray:
    """Majority vote per row; ties go to the smaller label."""
    n = predictions.shape[1]
    enc = np.searchsorted(classes, predictions)
    counts = np.zeros((n, len(classes)), dtype=np.int64)
    rows = np.broadcast_to(np.arange(n), enc.shape)
    np.add.at(counts, (rows.ravel(), enc.ravel()), 1)
    return classes[np.argmax(counts, axis=1)]


@dataclass
class RandomForest:
    trees: list[DecisionTree] = field(default_factory=list)
    classes: np.ndarray | None = None

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        n_trees: int = 200,
        feature_subset_size: int | None = None,
        max_depth: int | None = None,
        min_leaf: int = 1,
        seed: int = 0,
    ) -> "RandomForest":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if n_trees < 1:
            raise DomainError("n_trees must be positive")
        n, p = X.shape
        classes = np.unique(y)
        mtry = feature_subset_size or int(round(np.sqrt(p)))
        mtry = min(max(1, mtry), p)
        trees = []
        for t in range(n_trees):
            # Counter-scheme seeding keeps results independent of scheduling.
            rng = np.random.default_rng([seed, t])
            boot = rng.integers(0, n, size=n)
            trees.append(
                DecisionTree.fit(
                    X[boot],
                    y[boot],
                    max_depth=max_depth,
                    min_leaf=min_leaf,
                    feature_subset_size=mtry,
                    subset_seed=int(rng.integers(0, 2**32)),
                    classes=classes,
                )
            )
        return cls(trees=trees, classes=classes)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.stack([tree.predict(X) for tree in self.trees])
        return _vote(votes, self.classes)

"""CART decision tree with Gini impurity, sample weights and feature subsets.

The growing loop is JIT-compiled; trees are stored as flat arrays so models
serialize cheaply and prediction stays allocation-free.  Split selection is
fully deterministic: candidate features are scanned in ascending index
order, thresholds are midpoints between consecutive distinct values, and
only a strictly better weighted impurity replaces the incumbent, which
breaks ties toward the lowest feature index and lowest threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..errors import DomainError

NO_LIMIT = np.iinfo(np.int64).max // 2


@njit(cache=True)
def _grow(X, y, w, n_classes, max_depth, min_leaf, mtry, subset_seed):
    """Grow one tree; mtry < n_features draws a random subset per split."""
    n, p = X.shape
    use_subsets = mtry < p
    if use_subsets:
        np.random.seed(subset_seed)
    perm = np.arange(p)

    max_nodes = 2 * n + 1
    feature = np.full(max_nodes, -1, np.int64)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int64)
    right = np.full(max_nodes, -1, np.int64)
    label = np.zeros(max_nodes, np.int64)
    probs = np.zeros((max_nodes, n_classes), np.float64)

    idx = np.arange(n)
    tmp = np.empty(n, np.int64)
    stack_node = np.empty(max_nodes, np.int64)
    stack_lo = np.empty(max_nodes, np.int64)
    stack_hi = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node[0], stack_lo[0], stack_hi[0], stack_depth[0] = 0, 0, n, 0
    top = 1
    n_nodes = 1

    vals = np.empty(n, np.float64)
    labs = np.empty(n, np.int64)
    ws = np.empty(n, np.float64)
    cw = np.empty(n_classes, np.float64)
    cwl = np.empty(n_classes, np.float64)
    cand = np.empty(p, np.int64)

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo, hi, depth = stack_lo[top], stack_hi[top], stack_depth[top]
        n_node = hi - lo

        for c in range(n_classes):
            cw[c] = 0.0
        pure = True
        first_label = y[idx[lo]]
        for i in range(n_node):
            row = idx[lo + i]
            labs[i] = y[row]
            ws[i] = w[row]
            cw[labs[i]] += ws[i]
            if labs[i] != first_label:
                pure = False
        w_total = 0.0
        for c in range(n_classes):
            w_total += cw[c]
        best_c = 0
        for c in range(1, n_classes):
            if cw[c] > cw[best_c]:
                best_c = c
        label[node] = best_c
        if w_total > 0:
            for c in range(n_classes):
                probs[node, c] = cw[c] / w_total

        if pure or depth >= max_depth or n_node < 2 * min_leaf or w_total <= 0:
            continue

        gini_parent = 1.0
        for c in range(n_classes):
            gini_parent -= (cw[c] / w_total) ** 2

        if use_subsets:
            for i in range(mtry):
                j = i + np.random.randint(0, p - i)
                perm[i], perm[j] = perm[j], perm[i]
            cand[:mtry] = np.sort(perm[:mtry])
            n_cand = mtry
        else:
            for i in range(p):
                cand[i] = i
            n_cand = p

        best_cost = gini_parent
        best_f = np.int64(-1)
        best_thr = 0.0
        for fi in range(n_cand):
            f = cand[fi]
            for i in range(n_node):
                vals[i] = X[idx[lo + i], f]
            order = np.argsort(vals[:n_node])
            for c in range(n_classes):
                cwl[c] = 0.0
            w_left = 0.0
            for t in range(n_node - 1):
                o = order[t]
                cwl[labs[o]] += ws[o]
                w_left += ws[o]
                if t + 1 < min_leaf or n_node - t - 1 < min_leaf:
                    continue
                v_here = vals[o]
                v_next = vals[order[t + 1]]
                if v_next <= v_here:
                    continue
                w_right = w_total - w_left
                if w_left <= 0 or w_right <= 0:
                    continue
                gl = 1.0
                gr = 1.0
                for c in range(n_classes):
                    gl -= (cwl[c] / w_left) ** 2
                    gr -= ((cw[c] - cwl[c]) / w_right) ** 2
                cost = (w_left * gl + w_right * gr) / w_total
                if cost < best_cost:
                    best_cost = cost
                    best_f = f
                    best_thr = 0.5 * (v_here + v_next)

        if best_f < 0:
            continue

        n_left = 0
        for i in range(lo, hi):
            if X[idx[i], best_f] < best_thr:
                tmp[n_left] = idx[i]
                n_left += 1
        n_right = 0
        for i in range(lo, hi):
            if not X[idx[i], best_f] < best_thr:
                tmp[n_left + n_right] = idx[i]
                n_right += 1
        if n_left == 0 or n_right == 0 or n_nodes + 2 > max_nodes:
            continue
        idx[lo:hi] = tmp[:n_node]

        feature[node] = best_f
        threshold[node] = best_thr
        left_id = n_nodes
        right_id = n_nodes + 1
        left[node] = left_id
        right[node] = right_id
        n_nodes += 2

        stack_node[top], stack_lo[top], stack_hi[top], stack_depth[top] = (
            right_id, lo + n_left, hi, depth + 1,
        )
        top += 1
        stack_node[top], stack_lo[top], stack_hi[top], stack_depth[top] = (
            left_id, lo, lo + n_left, depth + 1,
        )
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        label[:n_nodes].copy(),
        probs[:n_nodes].copy(),
    )


@njit(cache=True)
def _traverse(feature, threshold, left, right, X):
    out = np.empty(X.shape[0], np.int64)
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] < threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


@dataclass
class DecisionTree:
    """Flat-array CART model over a sorted class alphabet."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray
    probs: np.ndarray
    classes: np.ndarray

    @classmethod
    def fit(
        cls,
        X: np.ndarray,
        y: np.ndarray,
        sample_weight: np.ndarray | None = None,
        max_depth: int | None = None,
        min_leaf: int = 1,
        feature_subset_size: int | None = None,
        subset_seed: int = 0,
        classes: np.ndarray | None = None,
    ) -> "DecisionTree":
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] == 0:
            raise DomainError("bad training data shapes")
        if not np.all(np.isfinite(X)):
            raise DomainError("features contain NaN or infinity")
        if sample_weight is None:
            sample_weight = np.ones(X.shape[0])
        sample_weight = np.asarray(sample_weight, dtype=np.float64)
        if classes is None:
            classes = np.unique(y)
        y_enc = np.searchsorted(classes, y)
        depth_cap = NO_LIMIT if max_depth is None else int(max_depth)
        mtry = X.shape[1] if feature_subset_size is None else int(feature_subset_size)
        mtry = min(max(1, mtry), X.shape[1])
        arrays = _grow(
            X, y_enc, sample_weight, len(classes), depth_cap, int(min_leaf),
            mtry, subset_seed & 0xFFFFFFFF,
        )
        return cls(*arrays, classes=np.asarray(classes, dtype=np.int64))

    def _leaves(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
        return _traverse(self.feature, self.threshold, self.left, self.right, X)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes[self.label[self._leaves(X)]]

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Class-probability rows over this tree's class alphabet."""
        return self.probs[self._leaves(X)]

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

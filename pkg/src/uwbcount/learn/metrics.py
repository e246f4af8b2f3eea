"""Confusion matrix and macro-averaged classification metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass
class Metrics:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    confusion: np.ndarray  # rows: truth, cols: prediction
    classes: np.ndarray

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.macro_precision,
            "recall": self.macro_recall,
            "f1": self.macro_f1,
        }


def confusion_matrix(y_true, y_pred, classes=None) -> tuple[np.ndarray, np.ndarray]:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if classes is None:
        # Classes absent from both truth and prediction do not participate.
        classes = np.unique(np.concatenate([y_true, y_pred]))
    classes = np.asarray(classes, dtype=np.int64)
    k = len(classes)
    ti = np.searchsorted(classes, y_true)
    pi = np.searchsorted(classes, y_pred)
    cm = np.zeros((k, k), dtype=np.int64)
    np.add.at(cm, (ti, pi), 1)
    return cm, classes


def metrics_from_confusion(cm: np.ndarray, classes: np.ndarray) -> Metrics:
    total = cm.sum()
    if total == 0:
        raise DomainError("empty confusion matrix")
    diag = np.diag(cm).astype(np.float64)
    pred_tot = cm.sum(axis=0).astype(np.float64)
    true_tot = cm.sum(axis=1).astype(np.float64)
    # Never-predicted classes score zero precision; never-seen score zero recall.
    precision = np.divide(diag, pred_tot, out=np.zeros_like(diag), where=pred_tot > 0)
    recall = np.divide(diag, true_tot, out=np.zeros_like(diag), where=true_tot > 0)
    denom = precision + recall
    f1 = np.divide(2 * precision * recall, denom, out=np.zeros_like(diag), where=denom > 0)
    return Metrics(
        accuracy=float(diag.sum() / total),
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        confusion=cm,
        classes=classes,
    )


def evaluate_predictions(y_true, y_pred) -> Metrics:
    cm, classes = confusion_matrix(y_true, y_pred)
    return metrics_from_confusion(cm, classes)

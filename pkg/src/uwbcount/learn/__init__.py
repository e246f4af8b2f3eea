"""Classifiers and the repeated-split evaluation protocol."""

from .boost import AdaBoostSammeR
from .forest import RandomForest
from .metrics import Metrics, confusion_matrix, evaluate_predictions, metrics_from_confusion
from .mlp import NeuralNet
from .protocol import (
    ClassifierConfig,
    ClassifierKind,
    FEATURE_LAYOUT_VERSION,
    LabeledDataset,
    ProtocolSummary,
    TrainedModel,
    evaluate,
    load_model,
    predict,
    run_protocol,
    save_model,
    stratified_split,
    train,
)
from .tree import DecisionTree

__all__ = [
    "AdaBoostSammeR",
    "ClassifierConfig",
    "ClassifierKind",
    "DecisionTree",
    "FEATURE_LAYOUT_VERSION",
    "LabeledDataset",
    "Metrics",
    "NeuralNet",
    "ProtocolSummary",
    "RandomForest",
    "TrainedModel",
    "confusion_matrix",
    "evaluate",
    "evaluate_predictions",
    "load_model",
    "metrics_from_confusion",
    "predict",
    "run_protocol",
    "save_model",
    "stratified_split",
    "train",
]

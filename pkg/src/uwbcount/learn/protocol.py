"""Supervised containers, training dispatch, and the repeated-split protocol."""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DomainError, FormatError
from .boost import AdaBoostSammeR
from .forest import RandomForest
from .metrics import Metrics, evaluate_predictions
from .mlp import NeuralNet
from .tree import DecisionTree

FEATURE_LAYOUT_VERSION = 1
MODEL_MAGIC = b"UWBM"
MODEL_FORMAT_VERSION = 1


class ClassifierKind(Enum):
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"
    ADA_BOOST = "ada_boost"
    NEURAL_NET = "neural_net"


@dataclass
class LabeledDataset:
    features: np.ndarray
    labels: np.ndarray
    scenario: str | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise DomainError("features/labels shape mismatch")
        if len(self.labels) and not np.all(np.isfinite(self.features)):
            raise DomainError("dataset features contain NaN or infinity")
        cap = 15 if self.scenario == "queue" else 20
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() > cap):
            raise DomainError(f"labels outside [0, {cap}] for scenario {self.scenario}")

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, indices: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(self.features[indices], self.labels[indices], self.scenario)


@dataclass(frozen=True)
class ClassifierConfig:
    kind: ClassifierKind = ClassifierKind.RANDOM_FOREST
    trees: int = 200
    estimators: int = 50
    hidden: tuple[int, ...] = (100, 200, 100)
    activation: str = "relu"
    optimizer: str = "adam"
    max_depth: int | None = None
    boost_depth: int = 3
    min_leaf: int = 1
    feature_subset_size: int | None = None
    learning_rate: float = 1e-3
    epochs: int = 200
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.trees < 1 or self.estimators < 1 or self.epochs < 1:
            raise DomainError("counts must be positive")
        if self.learning_rate <= 0:
            raise DomainError("learning_rate must be positive")
        if self.activation != "relu" or self.optimizer != "adam":
            raise DomainError("only relu activation and adam optimizer are supported")


@dataclass
class TrainedModel:
    kind: ClassifierKind
    model: object
    seed: int
    layout_version: int = FEATURE_LAYOUT_VERSION

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.model.predict(np.atleast_2d(np.asarray(X, dtype=np.float64)))


def train(cfg: ClassifierConfig, data: LabeledDataset) -> TrainedModel:
    """Fit one classifier; single-class data yields a constant model."""
    X, y = data.features, data.labels
    if len(data) == 0:
        raise DomainError("empty training set")
    if not np.all(np.isfinite(X)):
        raise DomainError("features contain NaN or infinity")
    if cfg.kind is ClassifierKind.DECISION_TREE:
        model = DecisionTree.fit(X, y, max_depth=cfg.max_depth, min_leaf=cfg.min_leaf)
    elif cfg.kind is ClassifierKind.RANDOM_FOREST:
        model = RandomForest.fit(
            X, y,
            n_trees=cfg.trees,
            feature_subset_size=cfg.feature_subset_size,
            max_depth=cfg.max_depth,
            min_leaf=cfg.min_leaf,
            seed=cfg.seed,
        )
    elif cfg.kind is ClassifierKind.ADA_BOOST:
        model = AdaBoostSammeR.fit(
            X, y, n_stages=cfg.estimators, base_depth=cfg.boost_depth,
            min_leaf=cfg.min_leaf,
        )
    elif cfg.kind is ClassifierKind.NEURAL_NET:
        classes = np.unique(y)
        net = NeuralNet.init(X.shape[1], classes, hidden=cfg.hidden, seed=cfg.seed)
        if len(classes) > 1:
            net.fit(
                X, y,
                epochs=cfg.epochs,
                batch_size=cfg.batch_size,
                learning_rate=cfg.learning_rate,
                seed=cfg.seed,
            )
        else:
            net.mean = X.mean(axis=0)
            std = X.std(axis=0)
            net.std = np.where(std > 0, std, 1.0)
        model = net
    else:  # pragma: no cover
        raise DomainError(f"unknown classifier kind {cfg.kind}")
    return TrainedModel(kind=cfg.kind, model=model, seed=cfg.seed)


def predict(model: TrainedModel, x, layout_version: int = FEATURE_LAYOUT_VERSION):
    """Label for one feature vector; deterministic, ties to the smaller label."""
    if model.layout_version != layout_version:
        raise DomainError(
            f"feature layout {layout_version} does not match model "
            f"layout {model.layout_version}"
        )
    values = getattr(x, "values", x)
    return int(model.predict(np.atleast_2d(values))[0])


def evaluate(model: TrainedModel, test: LabeledDataset) -> Metrics:
    if len(test) == 0:
        raise DomainError("empty test set")
    return evaluate_predictions(test.labels, model.predict(test.features))


def stratified_split(
    labels: np.ndarray, split: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Per-class random split keeping every class in both folds when possible."""
    train_idx, test_idx = [], []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        members = members[rng.permutation(len(members))]
        k = int(round(len(members) * split))
        if len(members) >= 2:
            k = min(max(k, 1), len(members) - 1)
        train_idx.append(members[:k])
        test_idx.append(members[k:])
    return np.sort(np.concatenate(train_idx)), np.sort(np.concatenate(test_idx))


@dataclass
class ProtocolSummary:
    """Mean and standard deviation of each metric across repeats."""

    mean: dict[str, float]
    std: dict[str, float]
    repeats: list[Metrics] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            name: {"mean": self.mean[name], "std": self.std[name]}
            for name in self.mean
        }


def run_protocol(
    data: LabeledDataset,
    cfg: ClassifierConfig,
    split: float = 0.8,
    repeats: int = 20,
    seed: int = 0,
) -> ProtocolSummary:
    """Repeated stratified 80/20 evaluation with derived per-repeat seeds."""
    if not 0 < split < 1:
        raise DomainError("split must lie in (0, 1)")
    if repeats < 1:
        raise DomainError("repeats must be >= 1")
    if len(np.unique(data.labels)) < 2:
        raise DomainError("protocol needs at least 2 classes")
    results = []
    for r in range(repeats):
        rng = np.random.default_rng([seed, r, 0x5])
        tr, te = stratified_split(data.labels, split, rng)
        model_seed = int(np.random.default_rng([seed, r, 0x7]).integers(0, 2**31))
        repeat_cfg = ClassifierConfig(
            **{**cfg.__dict__, "seed": model_seed}
        )
        model = train(repeat_cfg, data.subset(tr))
        results.append(evaluate(model, data.subset(te)))
    names = ["accuracy", "precision", "recall", "f1"]
    table = {name: np.array([m.as_dict()[name] for m in results]) for name in names}
    return ProtocolSummary(
        mean={k: float(v.mean()) for k, v in table.items()},
        std={k: float(v.std()) for k, v in table.items()},
        repeats=results,
    )


def _model_arrays(model: TrainedModel) -> dict[str, np.ndarray]:
    kind, m = model.kind, model.model
    if kind is ClassifierKind.DECISION_TREE:
        return _tree_arrays("t0", m)
    if kind is ClassifierKind.RANDOM_FOREST:
        out = {"n_units": np.array([len(m.trees)]), "classes": m.classes}
        for i, tree in enumerate(m.trees):
            out.update(_tree_arrays(f"t{i}", tree))
        return out
    if kind is ClassifierKind.ADA_BOOST:
        out = {"n_units": np.array([len(m.stages)]), "classes": m.classes}
        for i, tree in enumerate(m.stages):
            out.update(_tree_arrays(f"t{i}", tree))
        return out
    if kind is ClassifierKind.NEURAL_NET:
        out = {
            "n_units": np.array([len(m.weights)]),
            "classes": m.classes,
            "mean": m.mean,
            "std": m.std,
        }
        for i, (w, b) in enumerate(zip(m.weights, m.biases)):
            out[f"w{i}"] = w
            out[f"b{i}"] = b
        return out
    raise DomainError(f"unknown model kind {kind}")  # pragma: no cover


def _tree_arrays(prefix: str, tree: DecisionTree) -> dict[str, np.ndarray]:
    return {
        f"{prefix}_feature": tree.feature,
        f"{prefix}_threshold": tree.threshold,
        f"{prefix}_left": tree.left,
        f"{prefix}_right": tree.right,
        f"{prefix}_label": tree.label,
        f"{prefix}_probs": tree.probs,
        f"{prefix}_classes": tree.classes,
    }


def _tree_from(arrays, prefix: str) -> DecisionTree:
    return DecisionTree(
        feature=arrays[f"{prefix}_feature"],
        threshold=arrays[f"{prefix}_threshold"],
        left=arrays[f"{prefix}_left"],
        right=arrays[f"{prefix}_right"],
        label=arrays[f"{prefix}_label"],
        probs=arrays[f"{prefix}_probs"],
        classes=arrays[f"{prefix}_classes"],
    )


_KIND_CODES = {
    ClassifierKind.DECISION_TREE: 1,
    ClassifierKind.RANDOM_FOREST: 2,
    ClassifierKind.ADA_BOOST: 3,
    ClassifierKind.NEURAL_NET: 4,
}


def save_model(model: TrainedModel, path: str) -> None:
    """Versioned binary blob: magic, format version, kind tag, array payload."""
    payload = io.BytesIO()
    np.savez(payload, **_model_arrays(model))
    header = MODEL_MAGIC + struct.pack(
        "<HBBi", MODEL_FORMAT_VERSION, _KIND_CODES[model.kind],
        model.layout_version, model.seed,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.getvalue())


def load_model(path: str) -> TrainedModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MODEL_MAGIC:
        raise FormatError(f"{path}: bad model magic")
    version, kind_code, layout_version, seed = struct.unpack("<HBBi", blob[4:12])
    if version != MODEL_FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported model version {version}")
    kinds = {v: k for k, v in _KIND_CODES.items()}
    if kind_code not in kinds:
        raise FormatError(f"{path}: unknown model kind {kind_code}")
    kind = kinds[kind_code]
    arrays = dict(np.load(io.BytesIO(blob[12:])))
    if kind is ClassifierKind.DECISION_TREE:
        model = _tree_from(arrays, "t0")
    elif kind is ClassifierKind.RANDOM_FOREST:
        model = RandomForest(
            trees=[_tree_from(arrays, f"t{i}") for i in range(int(arrays["n_units"][0]))],
            classes=arrays["classes"],
        )
    elif kind is ClassifierKind.ADA_BOOST:
        model = AdaBoostSammeR(
            stages=[_tree_from(arrays, f"t{i}") for i in range(int(arrays["n_units"][0]))],
            classes=arrays["classes"],
        )
    else:
        n_layers = int(arrays["n_units"][0])
        model = NeuralNet(
            weights=[arrays[f"w{i}"] for i in range(n_layers)],
            biases=[arrays[f"b{i}"] for i in range(n_layers)],
            mean=arrays["mean"],
            std=arrays["std"],
            classes=arrays["classes"],
        )
    return TrainedModel(kind=kind, model=model, seed=seed, layout_version=layout_version)

"""Model spec, the trained-model envelope and label handling shared by all learners."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import scipy.sparse as sp

from ..lingua import FUTURE, PAST

CLASSES = (PAST, FUTURE)
MODEL_FORMAT = 1

ZEROR = "ZeroR"
DECISION_TREE = "DecisionTree"
RANDOM_FOREST = "RandomForest"
LINEAR_SVC = "LinearSVC"
KINDS = (ZEROR, DECISION_TREE, RANDOM_FOREST, LINEAR_SVC)
# training cost order, cheapest first; used to break grid-search ties
COST_RANK = {k: i for i, k in enumerate(KINDS)}

HYPERPARAMETERS = {
    ZEROR: {},
    DECISION_TREE: {"max_depth": None, "min_samples_split": 2, "min_samples_leaf": 1, "max_features": None},
    RANDOM_FOREST: {"n_estimators": 51, "max_depth": None, "min_samples_split": 2, "min_samples_leaf": 1,
                    "max_features": "sqrt", "bootstrap": True},
    LINEAR_SVC: {"C": 1.0, "tol": 1e-4, "max_epochs": 1000, "bias": 1.0},
}

DEFAULT_GRIDS = {
    ZEROR: {},
    DECISION_TREE: {"max_depth": [None, 5, 10, 20], "min_samples_leaf": [1, 2, 5]},
    RANDOM_FOREST: {"n_estimators": [11, 51, 101], "max_depth": [None, 10]},
    LINEAR_SVC: {"C": [0.01, 0.1, 1.0, 10.0]},
}

DEFAULT_SEED = 20200


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        allowed = HYPERPARAMETERS[self.kind]
        bad = sorted(set(self.hyperparameters) - set(allowed))
        if bad:
            raise ValueError(f"invalid hyperparameter(s) for {self.kind}: {', '.join(bad)}")

    def params(self) -> dict:
        return {**HYPERPARAMETERS[self.kind], **self.hyperparameters}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "hyperparameters": dict(self.hyperparameters), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls(d["kind"], dict(d.get("hyperparameters", {})), int(d.get("seed", DEFAULT_SEED)))


def encode_labels(y: Sequence) -> np.ndarray:
    """Past -> 0, Future -> 1."""
    out = np.empty(len(y), dtype=np.int64)
    for i, lab in enumerate(y):
        if lab == FUTURE:
            out[i] = 1
        elif lab == PAST:
            out[i] = 0
        else:
            raise ValueError(f"unknown label {lab!r}")
    return out


def decode_labels(codes) -> list[str]:
    return [FUTURE if c else PAST for c in np.asarray(codes)]


def as_matrix(X):
    if sp.issparse(X):
        return X.tocsr().astype(np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    return X


def dense_rows(X, chunk: int = 512):
    """Yield (start, dense block) over rows of a dense or sparse matrix."""
    for s in range(0, X.shape[0], chunk):
        block = X[s:s + chunk]
        yield s, block.toarray() if sp.issparse(block) else np.asarray(block)


@dataclass
class TrainedModel:
    spec: ModelSpec
    parameters: dict
    feature_header: list[str]
    classes: tuple[str, ...] = CLASSES
    n_features: int = 0

    def _check(self, X):
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} columns, got {X.shape[1]}")

    def decision_function(self, X) -> np.ndarray:
        """Signed score, positive for Future."""
        from . import _learner

        X = as_matrix(X)
        self._check(X)
        return _learner(self.spec.kind).decision(self.parameters, X)

    def predict(self, X) -> list[str]:
        # a zero score is a tie and goes to Future
        return decode_labels(self.decision_function(X) >= 0)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "classes": list(self.classes),
            "n_features": self.n_features,
            "feature_header": list(self.feature_header),
            "parameters": self.parameters,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        return cls(ModelSpec.from_dict(d["spec"]), d["parameters"], list(d["feature_header"]),
                   tuple(d.get("classes", CLASSES)), int(d["n_features"]))


def save_model_file(path: str | Path, model: TrainedModel, features: dict | None = None) -> None:
    """Write the JSON envelope: spec, header, vectorizers, selection mask, parameters."""
    doc: dict[str, Any] = {"format": MODEL_FORMAT, "model": model.to_dict()}
    if features is not None:
        doc["features"] = features
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_model_file(path: str | Path) -> tuple[TrainedModel, dict | None]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model file format {doc.get('format')!r}")
    return TrainedModel.from_dict(doc["model"]), doc.get("features")


def validate_value(kind: str, name: str, value) -> None:
    """Reject hyperparameter values a learner cannot use."""
    def bad():
        raise ValueError(f"invalid value {value!r} for {kind}.{name}")

    if name in ("max_depth",):
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
            bad()
    elif name in ("min_samples_split", "min_samples_leaf", "n_estimators", "max_epochs"):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            bad()
    elif name == "max_features":
        if value is None or value == "sqrt":
            return
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            bad()
    elif name in ("C", "tol", "bias"):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            bad()
    elif name == "bootstrap":
        if not isinstance(value, bool):
            bad()

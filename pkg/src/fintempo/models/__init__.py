"""Classifiers written from scratch, and grid search over them."""
from __future__ import annotations

import numpy as np

from . import forest, svc, tree, zeror
from .base import (
    CLASSES, COST_RANK, DECISION_TREE, DEFAULT_GRIDS, DEFAULT_SEED, HYPERPARAMETERS, KINDS, LINEAR_SVC,
    RANDOM_FOREST, ZEROR, ModelSpec, TrainedModel, as_matrix, decode_labels, encode_labels,
    load_model_file, save_model_file,
)

_LEARNERS = {ZEROR: zeror, DECISION_TREE: tree, RANDOM_FOREST: forest, LINEAR_SVC: svc}


def _learner(kind: str):
    return _LEARNERS[kind]


def train(spec: ModelSpec, X, y, feature_header=None) -> TrainedModel:
    X = as_matrix(X)
    y01 = encode_labels(y)
    if X.shape[0] != len(y01):
        raise ValueError("X and y have different lengths")
    if len(y01) == 0:
        raise ValueError("cannot train on empty data")
    if spec.kind != ZEROR and len(y01) < 2:
        raise ValueError("need at least two training rows")
    params = _learner(spec.kind).fit(X, y01, spec.params(), spec.seed)
    header = list(feature_header) if feature_header is not None else [f"x{i}" for i in range(X.shape[1])]
    if len(header) != X.shape[1]:
        raise ValueError("feature header does not match the column count")
    return TrainedModel(spec, params, header, CLASSES, X.shape[1])


def predict(model: TrainedModel, X) -> tuple[list[str], np.ndarray]:
    scores = model.decision_function(X)
    return decode_labels(scores >= 0), scores


from .search import grid_points, grid_search, search_kinds  # noqa: E402

__all__ = [
    "CLASSES", "COST_RANK", "DECISION_TREE", "DEFAULT_GRIDS", "DEFAULT_SEED", "HYPERPARAMETERS", "KINDS",
    "LINEAR_SVC", "RANDOM_FOREST", "ZEROR", "ModelSpec", "TrainedModel", "train", "predict",
    "grid_points", "grid_search", "search_kinds", "save_model_file", "load_model_file",
]

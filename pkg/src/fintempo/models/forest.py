"""Bagged CART trees with per-split feature subsampling."""
from __future__ import annotations

import numpy as np

from . import tree as _tree


def fit(X, y01: np.ndarray, params: dict, seed: int) -> dict:
    n_trees = int(params.get("n_estimators", 51))
    if n_trees < 1:
        raise ValueError("n_estimators must be at least 1")
    if len(np.unique(y01)) < 2:
        raise ValueError("random forest needs both classes in the training data")
    bootstrap = bool(params.get("bootstrap", True))
    tree_params = {k: params.get(k) for k in ("max_depth", "min_samples_split", "min_samples_leaf", "max_features")}
    n = X.shape[0]
    trees = []
    for child in np.random.SeedSequence(seed).spawn(n_trees):
        rng = np.random.default_rng(child)
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        # a bootstrap sample may miss a class; the tree then is a single leaf
        g = _tree._Grower(X, y01, tree_params, rng)
        g.grow(np.sort(rows))
        trees.append(g.params())
    return {"trees": trees}


def votes(params: dict, X) -> np.ndarray:
    """Fraction of trees voting Future, per row."""
    total = np.zeros(X.shape[0])
    for t in params["trees"]:
        total += _tree.future_share(t, X) >= 0.5
    return total / len(params["trees"])


def decision(params: dict, X) -> np.ndarray:
    return votes(params, X) - 0.5

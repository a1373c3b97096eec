"""Exhaustive grid search with k-fold cross-validation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .base import COST_RANK, HYPERPARAMETERS, ModelSpec, as_matrix, validate_value


def grid_points(grid: Mapping[str, Sequence]) -> list[dict]:
    """Cartesian product in grid order (last name varies fastest)."""
    names = list(grid)
    for name in names:
        if isinstance(grid[name], (str, bytes)) or not hasattr(grid[name], "__iter__"):
            raise ValueError(f"grid entry {name!r} must be a list of values")
        if len(list(grid[name])) == 0:
            raise ValueError(f"grid entry {name!r} is empty")
    return [dict(zip(names, combo)) for combo in itertools.product(*(list(grid[n]) for n in names))]


@dataclass(frozen=True)
class GridRow:
    kind: str
    params: dict
    fold_accuracy: tuple[float, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracy))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params, "mean_accuracy": self.mean_accuracy,
                "fold_accuracy": list(self.fold_accuracy)}


def cv_accuracy(spec: ModelSpec, X, y, folds) -> tuple[float, ...]:
    from . import train

    y = np.asarray(y, dtype=object)
    acc = []
    for train_idx, test_idx in folds:
        model = train(spec, X[train_idx], list(y[train_idx]))
        pred = model.predict(X[test_idx])
        acc.append(float(np.mean(np.asarray(pred, dtype=object) == y[test_idx])))
    return tuple(acc)


def grid_search(kind: str, grid: Mapping[str, Sequence], folds, X, y, seed: int = 0,
                fixed: Mapping | None = None) -> tuple[ModelSpec, list[GridRow]]:
    """Best spec by mean fold accuracy; ties keep the earlier grid point."""
    folds = list(folds)
    if len(folds) < 2:
        raise ValueError("grid search needs at least 2 folds")
    points = grid_points(grid) if grid else [{}]
    for p in points:
        for name, value in p.items():
            if name not in HYPERPARAMETERS.get(kind, {}):
                raise ValueError(f"invalid hyperparameter {name!r} for {kind}")
            validate_value(kind, name, value)
    X = as_matrix(X)
    rows: list[GridRow] = []
    best: tuple[float, int] | None = None
    best_spec = None
    for i, p in enumerate(points):
        spec = ModelSpec(kind, {**(fixed or {}), **p}, seed)
        row = GridRow(kind, dict(p), cv_accuracy(spec, X, y, folds))
        rows.append(row)
        if best is None or row.mean_accuracy > best[0] + 1e-12:
            best, best_spec = (row.mean_accuracy, i), spec
    return best_spec, rows


def search_kinds(grids: Mapping[str, Mapping], folds, X, y, seed: int = 0) -> tuple[ModelSpec, list[GridRow]]:
    """Grid search over several model kinds; equal accuracy prefers the cheaper kind."""
    results = []
    table: list[GridRow] = []
    for kind, grid in grids.items():
        spec, rows = grid_search(kind, grid, folds, X, y, seed)
        table.extend(rows)
        acc = max(r.mean_accuracy for r in rows)
        results.append((-round(acc, 12), COST_RANK[kind], spec))
    results.sort(key=lambda t: (t[0], t[1]))
    return results[0][2], table

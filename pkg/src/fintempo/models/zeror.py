"""Majority-class baseline."""
from __future__ import annotations

import numpy as np


def fit(X, y01: np.ndarray, params: dict, seed: int) -> dict:
    pos = int(y01.sum())
    # equal counts go to Future
    return {"majority": 1 if pos * 2 >= len(y01) else 0}


def decision(params: dict, X) -> np.ndarray:
    return np.full(X.shape[0], 1.0 if params["majority"] else -1.0)

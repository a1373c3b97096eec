"""Binary CART decision tree grown on Gini impurity.

Split search works on the node's rows only and skips columns that are
all-zero there, which keeps wide sparse n-gram matrices cheap.  Ties
between splits go to the lower column index, then the lower threshold.
"""
from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .base import dense_rows

_CHUNK = 2048


def _gini(pos: float, n: float) -> float:
    if n == 0:
        return 0.0
    p = pos / n
    return 2.0 * p * (1.0 - p)


def resolve_max_features(value, n_features: int) -> int | None:
    if value is None:
        return None
    if value == "sqrt":
        return max(1, math.ceil(math.sqrt(n_features)))
    if isinstance(value, float) and 0 < value <= 1:
        return max(1, math.ceil(value * n_features))
    v = int(value)
    if v < 1:
        raise ValueError("max_features must be positive")
    return min(v, n_features)


class _Grower:
    def __init__(self, X, y01, params, rng):
        self.X = X.tocsr() if sp.issparse(X) else np.asarray(X)
        self.sparse = sp.issparse(X)
        self.y = y01.astype(np.float64)
        self.max_depth = params.get("max_depth")
        self.min_split = max(2, int(params.get("min_samples_split", 2)))
        self.min_leaf = max(1, int(params.get("min_samples_leaf", 1)))
        self.max_features = resolve_max_features(params.get("max_features"), X.shape[1])
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[list[int]] = []  # [n_past, n_future]
        self.impurity: list[float] = []

    def _new_node(self, rows) -> int:
        pos = int(self.y[rows].sum())
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append([len(rows) - pos, pos])
        self.impurity.append(_gini(pos, len(rows)))
        return len(self.feature) - 1

    def _candidates(self, rows) -> np.ndarray:
        f = self.X.shape[1]
        if self.max_features is None or self.max_features >= f:
            cand = np.arange(f)
        else:
            cand = np.sort(self.rng.choice(f, size=self.max_features, replace=False))
        if self.sparse:
            active = np.unique(self.X[rows].indices)
            cand = np.intersect1d(cand, active, assume_unique=True)
        return cand

    def _best_split(self, rows):
        n = len(rows)
        ys = self.y[rows]
        pos = ys.sum()
        parent = _gini(pos, n)
        cand = self._candidates(rows)
        sub = self.X[rows]
        best = (parent - 1e-12, -1, 0.0)  # (child impurity, feature, threshold)
        k = np.arange(1, n, dtype=np.float64)[:, None]
        okk = ((k >= self.min_leaf) & (n - k >= self.min_leaf))
        for s in range(0, len(cand), _CHUNK):
            cols = cand[s:s + _CHUNK]
            D = sub[:, cols]
            D = D.toarray() if sp.issparse(D) else np.asarray(D, dtype=np.float64)
            order = np.argsort(D, axis=0, kind="stable")
            V = np.take_along_axis(D, order, axis=0)
            left_pos = np.cumsum(ys[order], axis=0)[:-1]
            valid = (V[:-1] < V[1:]) & okk
            if not valid.any():
                continue
            right_pos = pos - left_pos
            lp = left_pos / k
            rp = right_pos / (n - k)
            child = (k * 2 * lp * (1 - lp) + (n - k) * 2 * rp * (1 - rp)) / n
            child = np.where(valid, child, np.inf)
            flat = child.T  # columns first so argmin prefers the lower feature index
            j = int(np.argmin(flat))
            c, r = divmod(j, n - 1)
            val = flat[c, r]
            if val < best[0]:
                thr = (V[r, c] + V[r + 1, c]) / 2.0
                best = (float(val), int(cols[c]), float(thr))
        return best

    def grow(self, rows: np.ndarray) -> None:
        root = self._new_node(rows)
        stack = [(root, rows, 0)]
        while stack:
            node, idx, depth = stack.pop()
            n = len(idx)
            if self.impurity[node] == 0.0 or n < self.min_split or n < 2 * self.min_leaf:
                continue
            if self.max_depth is not None and depth >= self.max_depth:
                continue
            _, feat, thr = self._best_split(idx)
            if feat < 0:
                continue
            col = self.X[idx, feat]
            col = col.toarray().ravel() if sp.issparse(col) else np.asarray(col).ravel()
            go_left = col <= thr
            li, ri = idx[go_left], idx[~go_left]
            self.feature[node], self.threshold[node] = feat, thr
            lnode = self._new_node(li)
            rnode = self._new_node(ri)
            self.left[node], self.right[node] = lnode, rnode
            # push right first so the left child is expanded first
            stack.append((rnode, ri, depth + 1))
            stack.append((lnode, li, depth + 1))

    def params(self) -> dict:
        return {
            "feature": self.feature, "threshold": self.threshold,
            "left": self.left, "right": self.right, "value": self.value,
        }


def fit_tree(X, y01: np.ndarray, params: dict, rng=None, rows=None) -> dict:
    if len(np.unique(y01)) < 2:
        raise ValueError("decision tree needs both classes in the training data")
    rng = rng if rng is not None else np.random.default_rng(0)
    g = _Grower(X, y01, params, rng)
    g.grow(np.arange(X.shape[0]) if rows is None else np.asarray(rows))
    return g.params()


def fit(X, y01: np.ndarray, params: dict, seed: int) -> dict:
    return fit_tree(X, y01, params, np.random.default_rng(seed))


def leaf_of(tree: dict, X) -> np.ndarray:
    feature = np.asarray(tree["feature"], dtype=np.int64)
    threshold = np.asarray(tree["threshold"], dtype=np.float64)
    left = np.asarray(tree["left"], dtype=np.int64)
    right = np.asarray(tree["right"], dtype=np.int64)
    out = np.zeros(X.shape[0], dtype=np.int64)
    for s, D in dense_rows(X):
        node = np.zeros(D.shape[0], dtype=np.int64)
        r = np.arange(D.shape[0])
        while True:
            f = feature[node]
            inner = f >= 0
            if not inner.any():
                break
            ri, ni = r[inner], node[inner]
            go_left = D[ri, f[inner]] <= threshold[ni]
            node[inner] = np.where(go_left, left[ni], right[ni])
        out[s:s + D.shape[0]] = node
    return out


def future_share(tree: dict, X) -> np.ndarray:
    value = np.asarray(tree["value"], dtype=np.float64)
    leaves = leaf_of(tree, X)
    v = value[leaves]
    return v[:, 1] / v.sum(axis=1)


def decision(params: dict, X) -> np.ndarray:
    return future_share(params, X) - 0.5

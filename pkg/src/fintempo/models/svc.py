"""Linear SVM: L2-regularised hinge loss solved by dual coordinate descent.

The bias is learned as the weight of a constant extra feature, so it is
regularised along with w.  The dual objective never increases between
epochs; its trace is kept for monitoring.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from numba import njit


@njit(cache=True)
def _solve(indptr, indices, data, y, sqnorm, C, bias, tol, perms, w, alpha, history):
    n = y.shape[0]
    d = w.shape[0] - 1
    epochs = perms.shape[0]
    for epoch in range(epochs):
        pg_max = -np.inf
        pg_min = np.inf
        for t in range(n):
            i = perms[epoch, t]
            yi = y[i]
            s = w[d] * bias
            for p in range(indptr[i], indptr[i + 1]):
                s += w[indices[p]] * data[p]
            g = yi * s - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = min(g, 0.0)
            elif a == C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg > pg_max:
                pg_max = pg
            if pg < pg_min:
                pg_min = pg
            if pg != 0.0 and sqnorm[i] > 0.0:
                na = min(max(a - g / sqnorm[i], 0.0), C)
                delta = (na - a) * yi
                alpha[i] = na
                for p in range(indptr[i], indptr[i + 1]):
                    w[indices[p]] += delta * data[p]
                w[d] += delta * bias
        obj = 0.0
        for j in range(d + 1):
            obj += w[j] * w[j]
        obj *= 0.5
        for i in range(n):
            obj -= alpha[i]
        history[epoch] = obj
        if pg_max - pg_min <= tol:
            return epoch + 1
    return epochs


def fit_arrays(X, y01: np.ndarray, C: float = 1.0, tol: float = 1e-4, max_epochs: int = 1000,
               bias: float = 1.0, seed: int = 0):
    """Returns (w, b, alpha, dual objective per epoch)."""
    if len(np.unique(y01)) < 2:
        raise ValueError("LinearSVC needs both classes in the training data")
    if C <= 0:
        raise ValueError("C must be positive")
    X = sp.csr_matrix(X, dtype=np.float64)
    X.sort_indices()
    n, d = X.shape
    y = np.where(y01 > 0, 1.0, -1.0)
    sqnorm = np.asarray(X.multiply(X).sum(axis=1)).ravel() + bias * bias
    rng = np.random.default_rng(seed)
    perms = np.empty((max_epochs, n), dtype=np.int64)
    for e in range(max_epochs):
        perms[e] = rng.permutation(n)
    w = np.zeros(d + 1)
    alpha = np.zeros(n)
    history = np.zeros(max_epochs)
    used = _solve(X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data, y, sqnorm,
                  float(C), float(bias), float(tol), perms, w, alpha, history)
    return w[:d], w[d] * bias, alpha, history[:used]


def primal_objective(w, b, X, y01, C: float, bias: float = 1.0) -> float:
    y = np.where(y01 > 0, 1.0, -1.0)
    m = y * (np.asarray(X @ w).ravel() + b)
    wb = b / bias if bias else 0.0
    return 0.5 * (float(w @ w) + wb * wb) + C * float(np.maximum(0.0, 1.0 - m).sum())


def fit(X, y01: np.ndarray, params: dict, seed: int) -> dict:
    w, b, alpha, history = fit_arrays(
        X, y01, C=float(params.get("C", 1.0)), tol=float(params.get("tol", 1e-4)),
        max_epochs=int(params.get("max_epochs", 1000)), bias=float(params.get("bias", 1.0)), seed=seed,
    )
    return {"w": w.tolist(), "b": float(b), "epochs": int(len(history)),
            "dual_objective": [float(v) for v in history[-1:]]}


def decision(params: dict, X) -> np.ndarray:
    w = np.asarray(params["w"], dtype=np.float64)
    return np.asarray(X @ w).ravel() + params["b"]

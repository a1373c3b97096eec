"""Chi-square percentile selection of n-grams and per-candidate selection of the extra features."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class SelectionMask:
    kept_columns: tuple[int, ...]
    scores: tuple[float, ...]
    percentile: float

    def to_dict(self) -> dict:
        return {"kept_columns": list(self.kept_columns), "percentile": self.percentile}


def chi2_scores(X, y) -> np.ndarray:
    """Chi-square statistic of each non-negative column against the class labels.

    Observed values are the per-class column sums; expected values spread
    the column total according to the class priors.
    """
    y = np.asarray(y)
    if sp.issparse(X):
        X = X.tocsr()
        if X.nnz and X.data.min() < 0:
            raise ValueError("chi2 requires non-negative features")
    else:
        X = np.asarray(X, dtype=np.float64)
        if X.size and X.min() < 0:
            raise ValueError("chi2 requires non-negative features")
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y have different row counts")
    classes = np.unique(y)
    Y = (y[:, None] == classes[None, :]).astype(np.float64)  # n x c
    observed = np.asarray(Y.T @ X if not sp.issparse(X) else (X.T @ Y).T, dtype=np.float64)
    totals = observed.sum(axis=0)
    prior = Y.mean(axis=0)
    expected = prior[:, None] * totals[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (observed - expected) ** 2 / np.where(expected > 0, expected, 1), 0.0)
    return terms.sum(axis=0)


def selection_size(n: int, percentile: float) -> int:
    # nearest integer, at least one column
    return max(1, min(n, int(np.floor(percentile * n + 0.5))))


def select_percentile(scores, percentile: float = 0.80) -> SelectionMask:
    """Keep the top share of columns by score; equal scores favour the lower index."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("no scores to select from")
    if not 0 < percentile <= 1:
        raise ValueError(f"percentile must be in (0, 1], got {percentile}")
    k = selection_size(scores.size, percentile)
    s = np.nan_to_num(scores, nan=-np.inf)
    order = np.lexsort((np.arange(s.size), -s))
    kept = np.sort(order[:k])
    return SelectionMask(tuple(int(i) for i in kept), tuple(float(v) for v in scores), percentile)


@dataclass(frozen=True)
class CandidateResult:
    name: str
    macro_precision: float
    precision_past: float
    precision_future: float
    retained: bool

    @property
    def gap(self) -> float:
        return abs(self.precision_past - self.precision_future)


@dataclass(frozen=True)
class CombinatorialResult:
    base: CandidateResult
    candidates: tuple[CandidateResult, ...]

    @property
    def retained(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.candidates if c.retained)


# scorer(cols) -> (macro precision, precision Past, precision Future) under k-fold
# CV with the base features plus cols; cols is None for the base alone
Scorer = Callable[[object], tuple[float, float, float]]


def combinatorial_select(candidates: Mapping[str, np.ndarray], scorer: Scorer,
                         symmetry_tolerance: float = 0.01, n_folds: int | None = None) -> CombinatorialResult:
    """Evaluate base plus each candidate on its own and keep the helpful, symmetric ones.

    A candidate is retained when its macro precision beats the base and
    the Past/Future precision gap grows by at most symmetry_tolerance.
    Each candidate is judged independently, so enumeration order does not
    matter.  Constant candidates cannot carry information and are dropped
    without training.
    """
    if n_folds is not None and n_folds < 2:
        raise ValueError("combinatorial selection needs at least 2 folds")
    base_score = scorer(None)
    base = CandidateResult("base", *base_score, retained=True)
    results = []
    for name in sorted(candidates, key=_candidate_order):
        cols = np.asarray(candidates[name], dtype=np.float64)
        if cols.ndim == 1:
            cols = cols[:, None]
        if np.all(cols == cols[:1]):
            results.append(CandidateResult(name, *base_score, retained=False))
            continue
        macro, p_past, p_fut = scorer(cols)
        gap = abs(p_past - p_fut)
        keep = macro > base.macro_precision + 1e-12 and gap <= base.gap + symmetry_tolerance + 1e-12
        results.append(CandidateResult(name, macro, p_past, p_fut, keep))
    return CombinatorialResult(base, tuple(results))


def _candidate_order(name: str):
    from .features import EXTRA_NAMES

    return (EXTRA_NAMES.index(name), name) if name in EXTRA_NAMES else (len(EXTRA_NAMES), name)


def write_selection_report(result: CombinatorialResult, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["candidate", "macro_precision", "precision_past", "precision_future", "retained"])
        for row in (result.base,) + result.candidates:
            w.writerow([row.name, f"{row.macro_precision:.6f}", f"{row.precision_past:.6f}",
                        f"{row.precision_future:.6f}", int(row.retained)])


def write_chi2_report(names: Sequence[str], mask: SelectionMask, path: str | Path) -> None:
    kept = set(mask.kept_columns)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["column", "name", "chi2", "kept"])
        for i, (name, s) in enumerate(zip(names, mask.scores)):
            w.writerow([i, name, f"{s:.9g}", int(i in kept)])

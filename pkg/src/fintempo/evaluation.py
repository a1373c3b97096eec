"""Metrics, the k-fold cross-validation driver and report rendering."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import LABELS, Corpus, FoldPlan
from .features import DocFeatures, EXTRA_NAMES, FeatureConfig, FeaturePipeline, NgramConfig
from .lingua import FUTURE, PAST
from .models import ZEROR, ModelSpec, train


@dataclass(frozen=True)
class Metrics:
    per_class: dict  # label -> {"precision": p, "recall": r}
    macro_precision: float
    macro_recall: float
    accuracy: float
    confusion: tuple  # rows gold (Past, Future), columns predicted

    @property
    def total(self) -> int:
        return int(sum(sum(r) for r in self.confusion))

    def to_dict(self) -> dict:
        return {
            "per_class": {k: dict(v) for k, v in self.per_class.items()},
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "accuracy": self.accuracy,
            "confusion": [list(r) for r in self.confusion],
            "labels": list(LABELS),
        }


def evaluate(pred: Sequence[str], gold: Sequence[str]) -> Metrics:
    """Confusion-matrix metrics; a class never predicted has precision 0."""
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions, {len(gold)} gold labels")
    if not gold:
        raise ValueError("nothing to evaluate")
    idx = {lab: i for i, lab in enumerate(LABELS)}
    cm = [[0, 0], [0, 0]]
    for p, g in zip(pred, gold):
        cm[idx[g]][idx[p]] += 1
    per = {}
    for lab, i in idx.items():
        predicted = cm[0][i] + cm[1][i]
        actual = sum(cm[i])
        per[lab] = {
            "precision": cm[i][i] / predicted if predicted else 0.0,
            "recall": cm[i][i] / actual if actual else 0.0,
        }
    macro_p = float(np.mean([per[lab]["precision"] for lab in LABELS]))
    macro_r = float(np.mean([per[lab]["recall"] for lab in LABELS]))
    acc = (cm[0][0] + cm[1][1]) / len(gold)
    return Metrics(per, macro_p, macro_r, acc, tuple(tuple(r) for r in cm))


@dataclass
class PipelineConfig:
    name: str
    model: ModelSpec
    features: FeatureConfig = field(default_factory=FeatureConfig)

    def to_dict(self) -> dict:
        return {"name": self.name, "model": self.model.to_dict(), "features": self.features.to_dict()}


@dataclass
class EvalReport:
    name: str
    metrics: Metrics
    predictions: dict  # id -> label
    n_folds: int
    config: dict
    train_seconds: list = field(default_factory=list)
    test_seconds: list = field(default_factory=list)
    n_features: list = field(default_factory=list)

    def to_dict(self) -> dict:
        """Deterministic part of the report; timings live in timings()."""
        return {
            "name": self.name,
            "n_folds": self.n_folds,
            "config": self.config,
            "metrics": self.metrics.to_dict(),
            "n_features": list(self.n_features),
            "predictions": dict(sorted(self.predictions.items())),
        }

    def timings(self) -> dict:
        return {"name": self.name, "train_seconds": self.train_seconds, "test_seconds": self.test_seconds}


def cross_validate(config: PipelineConfig, corpus: Corpus, folds: FoldPlan,
                   docs: Sequence[DocFeatures] | None = None, resources=None, jobs: int = 1) -> EvalReport:
    """Pooled held-out predictions over the folds.

    Vectorizers and n-gram selection are fitted on each training split
    only.  ``docs`` holds the label-free per-document analysis in corpus
    order; it is computed once when not given.  ZeroR needs no features.
    """
    ids = corpus.ids
    y = np.asarray(corpus.labels, dtype=object)
    needs_features = config.model.kind != ZEROR
    if needs_features and docs is None:
        from .pipeline import prepare

        docs = [f for _, f in prepare(corpus.items, resources, jobs)]
    pred = np.empty(len(ids), dtype=object)
    train_s, test_s, widths = [], [], []
    for train_idx, test_idx in folds.splits(ids):
        if not test_idx:
            continue
        t0 = time.perf_counter()
        y_tr = list(y[train_idx])
        if needs_features:
            pipe = FeaturePipeline(config.features)
            X_tr = pipe.fit_transform([docs[i] for i in train_idx], y_tr)
        else:
            pipe, X_tr = None, np.zeros((len(train_idx), 0))
        model = train(config.model, X_tr, y_tr)
        t1 = time.perf_counter()
        X_te = pipe.transform([docs[i] for i in test_idx]) if pipe else np.zeros((len(test_idx), 0))
        pred[test_idx] = model.predict(X_te)
        t2 = time.perf_counter()
        train_s.append(t1 - t0)
        test_s.append(t2 - t1)
        widths.append(int(X_tr.shape[1]))
    metrics = evaluate(list(pred), list(y))
    return EvalReport(config.name, metrics, dict(zip(ids, pred)), folds.k, config.to_dict(),
                      train_s, test_s, widths)


@dataclass
class FoldBlocks:
    """Per-fold base matrices, each fitted on its own training split."""

    splits: list  # (train_idx, test_idx)
    train: list
    test: list


def fold_blocks(docs: Sequence[DocFeatures], y: Sequence[str], folds: FoldPlan, ids: Sequence[str],
                features: FeatureConfig) -> FoldBlocks:
    splits = [(tr, te) for tr, te in folds.splits(ids) if te]
    y = np.asarray(y, dtype=object)
    tr_blocks, te_blocks = [], []
    for tr, te in splits:
        pipe = FeaturePipeline(features)
        tr_blocks.append(pipe.fit_transform([docs[i] for i in tr], list(y[tr])))
        te_blocks.append(pipe.transform([docs[i] for i in te]))
    return FoldBlocks(splits, tr_blocks, te_blocks)


def cv_precision_scorer(blocks: FoldBlocks, y: Sequence[str], spec: ModelSpec):
    """Scorer for combinatorial selection: pooled CV precision of base blocks plus extra columns."""
    y = np.asarray(y, dtype=object)

    def score(cols):
        pred = np.empty(len(y), dtype=object)
        for (tr, te), X_tr, X_te in zip(blocks.splits, blocks.train, blocks.test):
            if cols is not None:
                X_tr = sp.hstack([X_tr, sp.csr_matrix(cols[tr])], format="csr")
                X_te = sp.hstack([X_te, sp.csr_matrix(cols[te])], format="csr")
            model = train(spec, X_tr, list(y[tr]))
            pred[te] = model.predict(X_te)
        m = evaluate(list(pred), list(y))
        return m.macro_precision, m.per_class[PAST]["precision"], m.per_class[FUTURE]["precision"]

    return score


def select_extras(corpus: Corpus, docs: Sequence[DocFeatures], folds: FoldPlan, spec: ModelSpec,
                  features: FeatureConfig | None = None, symmetry_tolerance: float = 0.01):
    """One-vs-rest evaluation of the 27 numerical and temporal candidates on top of the n-grams."""
    from .select import combinatorial_select

    base_cfg = FeatureConfig.from_dict({**(features or FeatureConfig()).to_dict(), "extras": []})
    blocks = fold_blocks(docs, corpus.labels, folds, corpus.ids, base_cfg)
    enc = base_cfg.global_encoding
    candidates = {}
    for name in EXTRA_NAMES:
        candidates[name] = np.asarray([d.extras(enc)[name] for d in docs], dtype=np.float64)
    scorer = cv_precision_scorer(blocks, corpus.labels, spec)
    return combinatorial_select(candidates, scorer, symmetry_tolerance, folds.k)


def experiment_configs(model: ModelSpec, features: FeatureConfig | None = None,
                       selected: Sequence[str] | None = None) -> list[PipelineConfig]:
    """The three feature settings: n-grams only, n-grams plus all 27 extras, n-grams plus the retained ones."""
    base = features or FeatureConfig()
    d = base.to_dict()
    out = [
        PipelineConfig("ngrams", model, FeatureConfig.from_dict({**d, "extras": []})),
        PipelineConfig("ngrams+27", model, FeatureConfig.from_dict({**d, "extras": list(EXTRA_NAMES)})),
    ]
    if selected is not None:
        out.append(PipelineConfig(f"ngrams+{len(selected)}selected", model,
                                  FeatureConfig.from_dict({**d, "extras": list(selected)})))
    return out


# -- rendering ---------------------------------------------------------------------

def _pct(v: float) -> str:
    return f"{100 * v:6.2f}"


def render_text(reports: Sequence[EvalReport], timings: bool = True, title: str | None = None) -> str:
    lines = []
    if title:
        lines.append(title)
    head = f"{'Classifier':<24} {'Precision':>9} {'Recall':>7} {'Accuracy':>8}"
    if timings:
        head += f" {'Train (s)':>9} {'Test (s)':>8}"
    lines += [head, "-" * len(head)]
    for r in reports:
        m = r.metrics
        row = f"{r.name:<24} {_pct(m.macro_precision):>9} {_pct(m.macro_recall):>7} {_pct(m.accuracy):>8}"
        if timings:
            row += f" {sum(r.train_seconds):9.3f} {sum(r.test_seconds):8.3f}"
        lines.append(row)
    lines.append("")
    lines.append(f"{'Classifier':<24} {'Class':<7} {'Precision':>9} {'Recall':>7}")
    for r in reports:
        for lab in LABELS:
            pc = r.metrics.per_class[lab]
            lines.append(f"{r.name:<24} {lab:<7} {_pct(pc['precision']):>9} {_pct(pc['recall']):>7}")
    return "\n".join(lines) + "\n"


def render_json(reports: Sequence[EvalReport]) -> str:
    return json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2, sort_keys=True) + "\n"


def render_report(reports: Sequence[EvalReport] | EvalReport, timings: bool = True) -> tuple[str, str]:
    """(text table, JSON document) for one or more reports."""
    if isinstance(reports, EvalReport):
        reports = [reports]
    return render_text(reports, timings), render_json(reports)


def metrics_from_dict(d: dict) -> Metrics:
    return Metrics(d["per_class"], d["macro_precision"], d["macro_recall"], d["accuracy"],
                   tuple(tuple(r) for r in d["confusion"]))


def vectorizer_candidates(grid: dict) -> list[NgramConfig]:
    from .models.search import grid_points

    return [NgramConfig.from_dict(p) for p in grid_points(grid)]


def tune_vectorizer(corpus: Corpus, docs: Sequence[DocFeatures], folds: FoldPlan, family: str,
                    grid: dict, spec: ModelSpec, limit: int | None = None):
    """CV accuracy of one n-gram family under every grid point; best first by accuracy, then grid order."""
    points = vectorizer_candidates(grid)
    if limit is not None:
        points = points[:limit]
    ids, y = corpus.ids, np.asarray(corpus.labels, dtype=object)
    splits = [(tr, te) for tr, te in folds.splits(ids) if te]
    rows = []
    for cfg in points:
        fc = FeatureConfig(families=(family,), ngram={family: cfg}, percentile=None, extras=())
        pred = np.empty(len(ids), dtype=object)
        for tr, te in splits:
            pipe = FeaturePipeline(fc)
            X_tr = pipe.fit_transform([docs[i] for i in tr], list(y[tr]))
            if X_tr.shape[1] == 0:
                pred[te] = train(ModelSpec(ZEROR), np.zeros((len(tr), 0)), list(y[tr])).predict(np.zeros((len(te), 0)))
                continue
            model = train(spec, X_tr, list(y[tr]))
            pred[te] = model.predict(pipe.transform([docs[i] for i in te]))
        rows.append((cfg, evaluate(list(pred), list(y)).accuracy))
    best = max(range(len(rows)), key=lambda i: (rows[i][1], -i))
    return rows[best][0], rows

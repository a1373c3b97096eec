"""Feature extraction: n-gram count vectorizers, numerical counts and temporal features."""
from __future__ import annotations

import csv
import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field, asdict
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .lingua import (
    DEPENDENCY, FUTURE, PAST, PRESENT, PROXIMITY, SUBJECT, Analysis, TickerVerbLink,
)
from .normalize import TaggedDocument

CHAR_GRAMS = "CharGrams"
WORD_TOKENS = "WordTokens"
WORD_GRAMS = "WordGrams"
FAMILIES = (CHAR_GRAMS, WORD_TOKENS, WORD_GRAMS)
_FAMILY_PREFIX = {CHAR_GRAMS: "char", WORD_TOKENS: "wtok", WORD_GRAMS: "word"}

VECTORIZER_FORMAT = 1

ANALYSES = ("DEP_SUB", "DEP_SUB_OBJ", "PROX_SUB", "PROX_SUB_OBJ")
PARTITIONS = ("INITIAL", "MEDIUM", "FINAL")
_TENSE_PREFIX = {PRESENT: "PRS", PAST: "PST", FUTURE: "FUT"}

# Table order: per analysis the three tense counters then its GLOBAL, then partitions
TEMPORAL_NAMES: tuple[str, ...] = tuple(
    [n for a in ANALYSES for n in (f"PRS_{a}", f"PST_{a}", f"FUT_{a}", f"GLOBAL_{a}")]
    + [f"{p}_{part}" for part in PARTITIONS for p in ("PRS", "PST", "FUT")]
)
NUMERICAL_NAMES = ("NUM", "PERC")
EXTRA_NAMES = NUMERICAL_NAMES + TEMPORAL_NAMES
GLOBAL_NAMES = tuple(n for n in TEMPORAL_NAMES if n.startswith("GLOBAL_"))

GLOBAL_CODES = {None: 0, PAST: 1, PRESENT: 2, FUTURE: 3}
GLOBAL_LABELS = ("None", PAST, PRESENT, FUTURE)
# majority ties: Future beats Past beats Present
_GLOBAL_PRECEDENCE = (FUTURE, PAST, PRESENT)


# -- n-gram vectorizers -------------------------------------------------------

@dataclass(frozen=True)
class NgramConfig:
    n_min: int = 2
    n_max: int = 4
    max_df_ratio: float = 0.30
    min_df: float | int = 0
    max_features: int | None = 10000

    def __post_init__(self):
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ValueError(f"bad n-gram range ({self.n_min}, {self.n_max})")
        if not 0.0 < self.max_df_ratio <= 1.0:
            raise ValueError(f"max_df_ratio must be in (0, 1], got {self.max_df_ratio}")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError("max_features must be positive or None")

    @classmethod
    def from_dict(cls, d: dict) -> "NgramConfig":
        d = dict(d)
        if "ngram_range" in d:
            d["n_min"], d["n_max"] = d.pop("ngram_range")
        if "max_df" in d:
            d["max_df_ratio"] = d.pop("max_df")
        return cls(**d)


def extract_ngrams(text: str, family: str, n_min: int, n_max: int) -> list[str]:
    """Every n-gram occurrence of the family in text, sizes n_min..n_max."""
    out: list[str] = []
    if family == CHAR_GRAMS:
        for n in range(n_min, n_max + 1):
            out.extend(text[i:i + n] for i in range(len(text) - n + 1))
    elif family == WORD_TOKENS:
        for w in text.split():
            padded = f" {w} "
            for n in range(n_min, n_max + 1):
                out.extend(padded[i:i + n] for i in range(len(padded) - n + 1))
    elif family == WORD_GRAMS:
        words = text.split()
        for n in range(n_min, n_max + 1):
            out.extend(" ".join(words[i:i + n]) for i in range(len(words) - n + 1))
    else:
        raise ValueError(f"unknown n-gram family {family!r}")
    return out


@lru_cache(maxsize=32768)
def gram_counts(text: str, family: str, n_min: int, n_max: int) -> Counter:
    """Cached n-gram counts of one text; callers must not mutate the result."""
    return Counter(extract_ngrams(text, family, n_min, n_max))


@dataclass
class VectorizerModel:
    family: str
    vocabulary: dict[str, int]
    config: NgramConfig
    n_documents: int = 0

    def __len__(self):
        return len(self.vocabulary)

    def feature_names(self) -> list[str]:
        names = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        return [f"{_FAMILY_PREFIX[self.family]}:{g}" for g in names]

    def transform(self, texts: Sequence[str]) -> sp.csr_matrix:
        return transform_ngrams_batch(texts, self)

    def to_dict(self) -> dict:
        return {
            "format": VECTORIZER_FORMAT,
            "family": self.family,
            "config": asdict(self.config),
            "n_documents": self.n_documents,
            "vocabulary": sorted(self.vocabulary, key=self.vocabulary.__getitem__),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VectorizerModel":
        if d.get("format") != VECTORIZER_FORMAT:
            raise ValueError(f"unsupported vectorizer format {d.get('format')!r}")
        vocab = {g: i for i, g in enumerate(d["vocabulary"])}
        return cls(d["family"], vocab, NgramConfig(**d["config"]), d.get("n_documents", 0))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "VectorizerModel":
        return cls.from_dict(json.loads(s))


def fit_vectorizer(corpus_texts: Sequence[str], family: str, config: NgramConfig | None = None) -> VectorizerModel:
    config = config or NgramConfig()
    if not corpus_texts:
        raise ValueError("cannot fit a vectorizer on an empty corpus")
    if family not in FAMILIES:
        raise ValueError(f"unknown n-gram family {family!r}")
    n_docs = len(corpus_texts)
    df: Counter = Counter()
    total: Counter = Counter()
    for text in corpus_texts:
        grams = gram_counts(text, family, config.n_min, config.n_max)
        total.update(grams)
        df.update(grams.keys())

    max_df = config.max_df_ratio * n_docs
    if isinstance(config.min_df, float) and 0 < config.min_df < 1:
        min_df = config.min_df * n_docs
    else:
        min_df = config.min_df
    kept = [g for g, d in df.items() if d <= max_df + 1e-12 and d >= min_df]
    if config.max_features is not None and len(kept) > config.max_features:
        kept.sort(key=lambda g: (-total[g], g))
        kept = kept[: config.max_features]
    vocab = {g: i for i, g in enumerate(sorted(kept))}
    return VectorizerModel(family, vocab, config, n_docs)


def transform_ngrams(text: str, model: VectorizerModel) -> dict[int, int]:
    """Sparse counts {column: count} of the model's vocabulary in text."""
    cfg = model.config
    vocab = model.vocabulary
    counts: dict[int, int] = {}
    for g, c in gram_counts(text, model.family, cfg.n_min, cfg.n_max).items():
        col = vocab.get(g)
        if col is not None:
            counts[col] = c
    return counts


def transform_ngrams_batch(texts: Sequence[str], model: VectorizerModel) -> sp.csr_matrix:
    indptr = [0]
    indices: list[int] = []
    data: list[int] = []
    for text in texts:
        row = transform_ngrams(text, model)
        cols = sorted(row)
        indices.extend(cols)
        data.extend(row[c] for c in cols)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(len(texts), len(model.vocabulary)),
    )


# -- numerical and temporal counts --------------------------------------------

def numerical_features(doc: TaggedDocument) -> tuple[int, int]:
    """(NUM count, PERC count). Dates are counted in neither."""
    return doc.count("NUM"), doc.count("PERC")


def _global(counts: dict[str, int]) -> str | None:
    best = max(counts.values(), default=0)
    if best == 0:
        return None
    for tense in _GLOBAL_PRECEDENCE:
        if counts[tense] == best:
            return tense
    return None


def _tally(links: Iterable[TickerVerbLink], subject_only: bool, tags: Sequence[str]) -> dict[str, int]:
    # one vote per distinct verb group, however many tickers link to it
    seen = {}
    for link in links:
        if link.ticker_tag not in tags:
            continue
        if subject_only and link.role != SUBJECT:
            continue
        seen[link.verb.group_span] = link.verb.tense
    counts = {PRESENT: 0, PAST: 0, FUTURE: 0}
    for tense in seen.values():
        counts[tense] += 1
    return counts


def partition_bounds(n_sentences: int) -> tuple[int, int]:
    return math.ceil(n_sentences / 3), math.ceil(2 * n_sentences / 3)


@dataclass(frozen=True)
class TemporalFeatures:
    values: dict

    def __getitem__(self, name: str):
        return self.values[name]

    def as_list(self) -> list:
        return [self.values[n] for n in TEMPORAL_NAMES]

    def encoded(self) -> list[int]:
        return [GLOBAL_CODES[v] if n in GLOBAL_NAMES else v
                for n, v in zip(TEMPORAL_NAMES, self.as_list())]


def temporal_features(analysis: Analysis, ticker_tags: Sequence[str] = ("TICKER",)) -> TemporalFeatures:
    """The 25 temporal features of one analysed document.

    Counters count distinct verb groups linked to the main ticker (and
    its referential stand-ins).  GLOBAL is the majority tense of an
    analysis, or None without links.
    """
    values: dict = {}
    by_method = {DEPENDENCY: analysis.dep_links, PROXIMITY: analysis.prox_links}
    for name in ANALYSES:
        method = DEPENDENCY if name.startswith("DEP") else PROXIMITY
        counts = _tally(by_method[method], name.endswith("_SUB"), ticker_tags)
        for tense, prefix in _TENSE_PREFIX.items():
            values[f"{prefix}_{name}"] = counts[tense]
        values[f"GLOBAL_{name}"] = _global(counts)

    n = len(analysis.doc.sentence_bounds)
    b1, b2 = partition_bounds(n)
    for part in PARTITIONS:
        for prefix in _TENSE_PREFIX.values():
            values[f"{prefix}_{part}"] = 0
    for verb in analysis.verbs:
        s = verb.sentence_id
        part = PARTITIONS[0] if s < b1 else PARTITIONS[1] if s < b2 else PARTITIONS[2]
        values[f"{_TENSE_PREFIX[verb.tense]}_{part}"] += 1
    return TemporalFeatures(values)


# -- per-document record and assembly -----------------------------------------

@dataclass(frozen=True)
class DocFeatures:
    """Label-free per-document inputs to the feature pipeline."""

    text: str  # scrubbed
    num: int = 0
    perc: int = 0
    temporal: TemporalFeatures | None = None

    def extras(self, encoding: str = "ordinal") -> dict[str, list[float]]:
        out = {"NUM": [float(self.num)], "PERC": [float(self.perc)]}
        values = self.temporal.values if self.temporal else {}
        for name in TEMPORAL_NAMES:
            v = values.get(name, None if name in GLOBAL_NAMES else 0)
            if name in GLOBAL_NAMES:
                code = GLOBAL_CODES[v]
                out[name] = [float(code)] if encoding == "ordinal" else [float(code == k) for k in range(4)]
            else:
                out[name] = [float(v)]
        return out


def extra_columns(name: str, encoding: str = "ordinal") -> list[str]:
    if name in GLOBAL_NAMES and encoding == "onehot":
        return [f"{name}={lab}" for lab in GLOBAL_LABELS]
    return [name]


@dataclass(frozen=True)
class FeatureVector:
    ngram_counts: sp.csr_matrix
    num_count: int
    perc_count: int
    temporal: TemporalFeatures | None

    def dense(self, extras: Sequence[str] = EXTRA_NAMES, encoding: str = "ordinal") -> np.ndarray:
        doc = DocFeatures("", self.num_count, self.perc_count, self.temporal)
        ex = doc.extras(encoding)
        tail = [v for n in extras for v in ex[n]]
        return np.concatenate([self.ngram_counts.toarray().ravel(), np.asarray(tail, dtype=float)])


def assemble(doc: DocFeatures, models: Sequence[VectorizerModel], selection_mask: Sequence[int] | None) -> FeatureVector:
    """Selected n-gram counts of one document plus its numerical and temporal values."""
    blocks = [transform_ngrams_batch([doc.text], m) for m in models]
    ngrams = sp.hstack(blocks, format="csr") if blocks else sp.csr_matrix((1, 0))
    if selection_mask is not None:
        mask = np.asarray(selection_mask, dtype=np.int64)
        if mask.size and mask.max() >= ngrams.shape[1]:
            raise ValueError("selection mask does not match the fitted vectorizers")
        ngrams = ngrams[:, mask]
    return FeatureVector(ngrams.tocsr(), doc.num, doc.perc, doc.temporal)


@dataclass
class FeatureConfig:
    families: tuple[str, ...] = FAMILIES
    ngram: dict = field(default_factory=dict)  # family -> NgramConfig
    percentile: float | None = 0.80
    extras: tuple[str, ...] = EXTRA_NAMES
    global_encoding: str = "ordinal"

    def ngram_config(self, family: str) -> NgramConfig:
        cfg = self.ngram.get(family)
        if cfg is None:
            return NgramConfig()
        return cfg if isinstance(cfg, NgramConfig) else NgramConfig.from_dict(cfg)

    def __post_init__(self):
        self.families = tuple(self.families)
        self.extras = tuple(self.extras)
        for f in self.families:
            if f not in FAMILIES:
                raise ValueError(f"unknown n-gram family {f!r}")
        unknown = [e for e in self.extras if e not in EXTRA_NAMES]
        if unknown:
            raise ValueError(f"unknown extra features {unknown}")
        if self.global_encoding not in ("ordinal", "onehot"):
            raise ValueError("global_encoding must be 'ordinal' or 'onehot'")
        if self.percentile is not None and not 0 < self.percentile <= 1:
            raise ValueError("percentile must be in (0, 1]")

    def to_dict(self) -> dict:
        return {
            "families": list(self.families),
            "ngram": {f: asdict(self.ngram_config(f)) for f in self.families},
            "percentile": self.percentile,
            "extras": list(self.extras),
            "global_encoding": self.global_encoding,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureConfig":
        d = dict(d)
        d["ngram"] = {f: NgramConfig.from_dict(c) for f, c in d.get("ngram", {}).items()}
        return cls(**d)


class FeaturePipeline:
    """Vectorizers, chi-square n-gram selection and the numeric tail, fitted together.

    fit() sees only training documents; transform() is pure.
    """

    def __init__(self, config: FeatureConfig | None = None):
        self.config = config or FeatureConfig()
        self.vectorizers: list[VectorizerModel] = []
        self.kept: np.ndarray | None = None
        self.scores: np.ndarray | None = None

    def _ngram_block(self, docs: Sequence[DocFeatures]) -> sp.csr_matrix:
        texts = [d.text for d in docs]
        blocks = [m.transform(texts) for m in self.vectorizers]
        if not blocks:
            return sp.csr_matrix((len(docs), 0))
        return sp.hstack(blocks, format="csr")

    def fit(self, docs: Sequence[DocFeatures], y: Sequence) -> "FeaturePipeline":
        self._fit(docs, y)
        return self

    def fit_transform(self, docs: Sequence[DocFeatures], y: Sequence) -> sp.csr_matrix:
        return self._with_extras(self._fit(docs, y), docs)

    def _fit(self, docs, y) -> sp.csr_matrix:
        from .select import chi2_scores, select_percentile

        texts = [d.text for d in docs]
        self.vectorizers = [fit_vectorizer(texts, f, self.config.ngram_config(f)) for f in self.config.families]
        X = self._ngram_block(docs)
        if self.config.percentile is not None and X.shape[1]:
            self.scores = chi2_scores(X, y)
            self.kept = np.asarray(select_percentile(self.scores, self.config.percentile).kept_columns, dtype=np.int64)
        else:
            self.kept = np.arange(X.shape[1], dtype=np.int64)
        return X[:, self.kept].tocsr()

    def ngram_names(self) -> list[str]:
        names = [n for m in self.vectorizers for n in m.feature_names()]
        return [names[i] for i in self.kept] if self.kept is not None else names

    def header(self) -> list[str]:
        tail = [c for e in self.config.extras for c in extra_columns(e, self.config.global_encoding)]
        return self.ngram_names() + tail

    def extras_matrix(self, docs: Sequence[DocFeatures], names: Sequence[str] | None = None) -> np.ndarray:
        names = self.config.extras if names is None else names
        rows = []
        for d in docs:
            ex = d.extras(self.config.global_encoding)
            rows.append([v for n in names for v in ex[n]])
        width = sum(len(extra_columns(n, self.config.global_encoding)) for n in names)
        return np.asarray(rows, dtype=np.float64).reshape(len(docs), width)

    def transform_ngrams(self, docs: Sequence[DocFeatures]) -> sp.csr_matrix:
        if self.kept is None:
            raise RuntimeError("pipeline is not fitted")
        return self._ngram_block(docs)[:, self.kept].tocsr()

    def transform(self, docs: Sequence[DocFeatures]) -> sp.csr_matrix:
        return self._with_extras(self.transform_ngrams(docs), docs)

    def _with_extras(self, X, docs) -> sp.csr_matrix:
        if self.config.extras:
            X = sp.hstack([X, sp.csr_matrix(self.extras_matrix(docs))], format="csr")
        return X

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "vectorizers": [m.to_dict() for m in self.vectorizers],
            "selection": {
                "kept_columns": [] if self.kept is None else self.kept.tolist(),
                "percentile": self.config.percentile,
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeaturePipeline":
        pipe = cls(FeatureConfig.from_dict(d["config"]))
        pipe.vectorizers = [VectorizerModel.from_dict(v) for v in d["vectorizers"]]
        pipe.kept = np.asarray(d["selection"]["kept_columns"], dtype=np.int64)
        return pipe


def header_hash(header: Sequence[str]) -> str:
    return hashlib.sha256("\n".join(header).encode("utf-8")).hexdigest()


def write_header_csv(header: Sequence[str], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["column", "name"])
        for i, name in enumerate(header):
            w.writerow([i, name])


def write_feature_csv(ids: Sequence[str], X, header: Sequence[str], path: str | Path) -> None:
    X = X.tocsr() if sp.issparse(X) else sp.csr_matrix(X)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id"] + list(header))
        for i, doc_id in enumerate(ids):
            row = X.getrow(i).toarray().ravel()
            w.writerow([doc_id] + [_fmt(v) for v in row])


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))

"""End-to-end wiring: raw text and ticker in, analysis and features out."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .assets import REFERENTIAL_NOUNS, tag_assets, resolve_referential
from .features import DocFeatures, FeatureConfig, FeaturePipeline, numerical_features, temporal_features
from .lingua import Analysis, VerbLexicon, analyze_document, default_verb_lexicon
from .models import ModelSpec, TrainedModel, load_model_file, save_model_file, train
from .normalize import (
    LexiconSet, TaggedDocument, default_lexica, normalize_numerics, scrub_for_ngrams, tag_entities,
)


@dataclass(frozen=True)
class Resources:
    lexica: LexiconSet
    verbs: VerbLexicon
    referential_nouns: tuple[str, ...] = REFERENTIAL_NOUNS
    expand_adjacent: bool = False

    @classmethod
    def default(cls) -> "Resources":
        return _default_resources()

    def tag(self, text: str, ticker: str) -> TaggedDocument:
        """Numerics, then assets, then entities, then referential nouns."""
        doc = normalize_numerics(text)
        doc = tag_assets(doc, ticker, self.lexica)
        doc = tag_entities(doc, self.lexica, self.expand_adjacent)
        return resolve_referential(doc, self.referential_nouns)

    def analyze(self, text: str, ticker: str) -> Analysis:
        return analyze_document(self.tag(text, ticker), self.verbs)

    def features(self, text: str, ticker: str) -> tuple[Analysis, DocFeatures]:
        a = self.analyze(text, ticker)
        return a, doc_features(a)


@lru_cache(maxsize=1)
def _default_resources() -> Resources:
    return Resources(default_lexica(), default_verb_lexicon())


def doc_features(analysis: Analysis) -> DocFeatures:
    num, perc = numerical_features(analysis.doc)
    return DocFeatures(scrub_for_ngrams(analysis.doc), num, perc, temporal_features(analysis))


def _work(args):
    resources, text, ticker = args
    return resources.features(text, ticker)


def prepare(items: Sequence, resources: Resources | None = None, jobs: int = 1) -> list[tuple[Analysis, DocFeatures]]:
    """Analyse every item; order follows the input."""
    resources = resources or Resources.default()
    args = [(resources, it.content, it.ticker) for it in items]
    if jobs > 1 and len(args) > 50:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_work, args, chunksize=16))
    return [_work(a) for a in args]


@dataclass(frozen=True)
class Prediction:
    label: str
    margin: float
    temporal: dict = field(default_factory=dict)
    num: int = 0
    perc: int = 0

    def to_dict(self) -> dict:
        return {"label": self.label, "margin": self.margin, "num": self.num, "perc": self.perc,
                "temporal": dict(self.temporal)}


class TemporalityClassifier:
    """Fitted feature pipeline plus model, saved together in one JSON file."""

    def __init__(self, features: FeaturePipeline, model: TrainedModel, resources: Resources | None = None):
        self.features = features
        self.model = model
        self.resources = resources or Resources.default()

    @classmethod
    def fit(cls, corpus, feature_config: FeatureConfig, spec: ModelSpec, resources: Resources | None = None,
            prepared: Sequence[DocFeatures] | None = None, jobs: int = 1) -> "TemporalityClassifier":
        resources = resources or Resources.default()
        docs = list(prepared) if prepared is not None else [f for _, f in prepare(corpus.items, resources, jobs)]
        y = corpus.labels
        pipe = FeaturePipeline(feature_config).fit(docs, y)
        model = train(spec, pipe.transform(docs), y, pipe.header())
        return cls(pipe, model, resources)

    def predict(self, text: str, ticker: str) -> Prediction:
        _, doc = self.resources.features(text, ticker)
        X = self.features.transform([doc])
        margin = float(self.model.decision_function(X)[0])
        label = self.model.predict(X)[0]
        temporal = {} if doc.temporal is None else dict(doc.temporal.values)
        return Prediction(label, margin, temporal, doc.num, doc.perc)

    def save(self, path) -> None:
        save_model_file(path, self.model, self.features.to_dict())

    @classmethod
    def load(cls, path, resources: Resources | None = None) -> "TemporalityClassifier":
        model, feats = load_model_file(path)
        if feats is None:
            raise ValueError("model file has no feature section")
        return cls(FeaturePipeline.from_dict(feats), model, resources)

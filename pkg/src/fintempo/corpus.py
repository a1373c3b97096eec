"""Labelled news items: JSONL loading, distribution summary and stratified folds."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean, pstdev
from typing import Iterator, Sequence

from .lingua import FUTURE, PAST

LABELS = (PAST, FUTURE)
SCHEMA_VERSION = 1
FIELDS = ("id", "content", "ticker", "source", "temporality")


class CorpusError(ValueError):
    pass


def parse_label(value) -> str:
    if isinstance(value, str):
        v = value.strip().lower()
        for lab in LABELS:
            if v == lab.lower():
                return lab
    raise CorpusError(f"unknown label {value!r}")


@dataclass(frozen=True)
class NewsItem:
    id: str
    content: str
    ticker: str
    source: str
    temporality: str

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise CorpusError("id must be a non-empty string")
        if not isinstance(self.content, str) or not self.content.strip():
            raise CorpusError(f"item {self.id}: content is empty")
        if not isinstance(self.ticker, str) or not self.ticker.strip():
            raise CorpusError(f"item {self.id}: ticker is empty")
        if not isinstance(self.source, str):
            raise CorpusError(f"item {self.id}: source must be a string")
        object.__setattr__(self, "temporality", parse_label(self.temporality))

    def to_json(self) -> dict:
        return {"id": self.id, "content": self.content, "ticker": self.ticker,
                "source": self.source, "temporality": self.temporality.lower()}


@dataclass(frozen=True)
class Corpus:
    items: tuple[NewsItem, ...]
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        seen = set()
        for it in self.items:
            if it.id in seen:
                raise CorpusError(f"duplicate id {it.id!r}")
            seen.add(it.id)

    def __len__(self):
        return len(self.items)

    def __iter__(self) -> Iterator[NewsItem]:
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def ids(self) -> list[str]:
        return [it.id for it in self.items]

    @property
    def labels(self) -> list[str]:
        return [it.temporality for it in self.items]

    def subset(self, ids: Sequence[str]) -> "Corpus":
        by_id = {it.id: it for it in self.items}
        return Corpus(tuple(by_id[i] for i in ids), self.schema_version)


def load_corpus(path: str | Path) -> Corpus:
    items = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(row, dict):
                raise CorpusError(f"line {lineno}: expected a JSON object")
            missing = [f for f in FIELDS if f not in row]
            if missing:
                raise CorpusError(f"line {lineno}: missing field(s) {', '.join(missing)}")
            try:
                item = NewsItem(*(row[f] for f in FIELDS))
            except CorpusError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from None
            if item.id in seen:
                raise CorpusError(f"line {lineno}: duplicate id {item.id!r} (first on line {seen[item.id]})")
            seen[item.id] = lineno
            items.append(item)
    return Corpus(tuple(items))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for it in corpus:
            fh.write(json.dumps(it.to_json(), ensure_ascii=False) + "\n")


# -- distribution ---------------------------------------------------------------

@dataclass(frozen=True)
class LengthStats:
    count: int
    sentences_mean: float
    sentences_std: float
    words_mean: float
    words_std: float


@dataclass(frozen=True)
class DistributionSummary:
    per_label: dict
    total: LengthStats

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(self.per_label[lab].count for lab in LABELS)

    def to_dict(self) -> dict:
        out = {lab: vars(s) for lab, s in self.per_label.items()}
        out["Total"] = vars(self.total)
        return out


def count_sentences(text: str) -> int:
    from .normalize import default_lexica, normalize_text, sentence_spans

    return len(sentence_spans(normalize_text(text, default_lexica()).tokens))


def _stats(sent: list[int], words: list[int]) -> LengthStats:
    if not sent:
        return LengthStats(0, 0.0, 0.0, 0.0, 0.0)
    return LengthStats(len(sent), fmean(sent), pstdev(sent), fmean(words), pstdev(words))


def class_distribution(corpus: Corpus) -> DistributionSummary:
    if not len(corpus):
        raise CorpusError("empty corpus")
    sent = {lab: [] for lab in LABELS}
    words = {lab: [] for lab in LABELS}
    for it in corpus:
        sent[it.temporality].append(count_sentences(it.content))
        words[it.temporality].append(len(it.content.split()))
    per = {lab: _stats(sent[lab], words[lab]) for lab in LABELS}
    total = _stats(sum(sent.values(), []), sum(words.values(), []))
    return DistributionSummary(per, total)


# -- folds ------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: dict = field(default_factory=dict)

    def test_ids(self, fold: int, order: Sequence[str]) -> list[str]:
        return [i for i in order if self.assignments[i] == fold]

    def splits(self, order: Sequence[str]) -> list[tuple[list[int], list[int]]]:
        """(train, test) row indices into `order` for each fold."""
        out = []
        for f in range(self.k):
            test = [r for r, i in enumerate(order) if self.assignments[i] == f]
            train = [r for r, i in enumerate(order) if self.assignments[i] != f]
            out.append((train, test))
        return out

    def to_dict(self) -> dict:
        return {"k": self.k, "assignments": dict(sorted(self.assignments.items()))}


def stratified_folds(corpus: Corpus, k: int, seed: int) -> FoldPlan:
    """Shuffle each class with a seeded generator and deal its items round-robin.

    Each class starts dealing where the previous one stopped, so fold sizes
    stay within one item of each other as well.
    """
    if k < 2:
        raise CorpusError("k must be at least 2")
    rng = random.Random(seed)
    assignments: dict[str, int] = {}
    offset = 0
    for lab in LABELS:
        ids = [it.id for it in corpus if it.temporality == lab]
        if ids and len(ids) < k:
            raise CorpusError(f"class {lab} has {len(ids)} items, fewer than k={k}")
        rng.shuffle(ids)
        for pos, doc_id in enumerate(ids):
            assignments[doc_id] = (offset + pos) % k
        offset = (offset + len(ids)) % k
    return FoldPlan(k, assignments)

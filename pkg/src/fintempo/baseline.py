"""Rule-based reference classifier: finance-lexicon summary, tense tally and decision rules."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .lingua import FUTURE, PAST, PRESENT, Analysis, VerbMention
from .normalize import SEMANTIC_CATEGORIES, TaggedDocument, data_path, strip_accents

RELEVANCE_THRESHOLD = 0.75


class SemanticTree:
    """Nine finance categories, each a set of lowercase words."""

    def __init__(self, categories: Mapping[str, Iterable[str]]):
        if set(categories) != set(SEMANTIC_CATEGORIES):
            missing = sorted(set(SEMANTIC_CATEGORIES) - set(categories))
            extra = sorted(set(categories) - set(SEMANTIC_CATEGORIES))
            raise ValueError(f"semantic tree categories mismatch (missing {missing}, unexpected {extra})")
        self.categories = {c: frozenset(w.lower() for w in ws) for c, ws in categories.items()}
        self._words = frozenset().union(*self.categories.values())

    @classmethod
    def load(cls, path: str | Path | None = None) -> "SemanticTree":
        path = Path(path) if path is not None else data_path("semantic_tree.json")
        return cls(json.loads(path.read_text(encoding="utf-8")))

    def __contains__(self, word: str) -> bool:
        return strip_accents(word.lower()) in self._words

    def category_of(self, word: str) -> str | None:
        w = word.lower()
        for c in SEMANTIC_CATEGORIES:
            if w in self.categories[c]:
                return c
        return None


def title_of(content: str) -> str:
    """Headline: the first line when the content has several, else the first sentence."""
    from .normalize import normalize_numerics, sentence_spans

    content = content.strip()
    if "\n" in content:
        return content.split("\n", 1)[0].strip()
    doc = normalize_numerics(content)
    spans = sentence_spans(doc.tokens)
    if not spans:
        return content
    s, e = spans[0]
    return content[doc.tokens[s].start:doc.tokens[e - 1].end]


def _title_words(title: str) -> list[str]:
    from .normalize import tokenize

    return [t.text.lower() for t in tokenize(title) if t.is_word]


def _terms(doc: TaggedDocument, s: int, e: int) -> list[str]:
    out = []
    for tok in doc.tokens[s:e]:
        if tok.tag is not None:
            out.append(tok.tag)
        elif tok.is_word:
            out.append(strip_accents(tok.lower))
    return out


def sentence_tfidf(sentences: Sequence[Sequence[str]]) -> list[float]:
    """Mean tf-idf over the term occurrences of each sentence.

    tf is the raw count in the sentence, idf = ln((1 + N) / (1 + df)) + 1
    with sentences as documents.
    """
    n = len(sentences)
    df = Counter()
    for terms in sentences:
        df.update(set(terms))
    idf = {t: math.log((1 + n) / (1 + d)) + 1.0 for t, d in df.items()}
    scores = []
    for terms in sentences:
        if not terms:
            scores.append(0.0)
            continue
        tf = Counter(terms)
        scores.append(sum(tf[t] * idf[t] for t in terms) / len(terms))
    return scores


def extractive_summary(doc: TaggedDocument, title: str, tree: SemanticTree,
                       threshold: float = RELEVANCE_THRESHOLD) -> list[int]:
    """Indices of the sentences kept for tense counting.

    A finance title selects sentences with a lexicon word or the main
    ticker; otherwise sentences whose max-normalised tf-idf reaches the
    threshold.  An empty selection falls back to every sentence.
    """
    spans = doc.sentences()
    if not spans:
        return []
    if any(w in tree for w in _title_words(title)):
        keep = []
        for k, (s, e) in enumerate(spans):
            toks = doc.tokens[s:e]
            if any(t.tag == "TICKER" for t in toks) or any(t.is_word and t.lower in tree for t in toks):
                keep.append(k)
    else:
        scores = sentence_tfidf([_terms(doc, s, e) for s, e in spans])
        top = max(scores)
        keep = [k for k, v in enumerate(scores) if top > 0 and v / top >= threshold - 1e-12]
    return keep or list(range(len(spans)))


@dataclass(frozen=True)
class TenseTally:
    past: int = 0
    present: int = 0
    future: int = 0
    present_followed_by_number: bool = False

    def add(self, tense: str) -> "TenseTally":
        return TenseTally(
            self.past + (tense == PAST), self.present + (tense == PRESENT),
            self.future + (tense == FUTURE), self.present_followed_by_number,
        )


def _followed_by_number(doc: TaggedDocument, verb: VerbMention, verbs: Sequence[VerbMention], sent_end: int) -> bool:
    stop = sent_end
    for v in verbs:
        if verb.group_span[1] <= v.group_span[0] < stop:
            stop = v.group_span[0]
    return any(t.tag in ("NUM", "PERC") for t in doc.tokens[verb.group_span[1]:stop])


def _linked(links, s: int, e: int, lo: int | None = None, hi: int | None = None) -> list[VerbMention]:
    lo = s if lo is None else lo
    hi = e if hi is None else hi
    out = {}
    for link in links:
        if link.ticker_tag == "TICKER" and lo <= link.ticker_index < hi:
            out[link.verb.group_span] = link.verb
    return [out[k] for k in sorted(out)]


def _comma_parts(doc: TaggedDocument, s: int, e: int) -> list[tuple[int, int]]:
    parts, start = [], s
    for i in range(s, e):
        if doc.tokens[i].tag is None and doc.tokens[i].text == ",":
            parts.append((start, i))
            start = i + 1
    parts.append((start, e))
    return [p for p in parts if p[0] < p[1]]


def _fallback_verbs(doc: TaggedDocument, verbs: Sequence[VerbMention], s: int, e: int) -> list[VerbMention]:
    # per comma-separated part: the verb nearest a ticker there, else its first verb
    chosen = []
    for ps, pe in _comma_parts(doc, s, e):
        inside = [v for v in verbs if ps <= v.head_index < pe]
        if not inside:
            continue
        tickers = [i for i in range(ps, pe) if doc.tokens[i].tag == "TICKER"]
        if tickers:
            def dist(v):
                return min(min(abs(t - v.group_span[0]), abs(t - (v.group_span[1] - 1))) for t in tickers)
            chosen.append(min(inside, key=lambda v: (dist(v), v.group_span)))
        else:
            chosen.append(inside[0])
    return chosen


def count_tenses(analysis: Analysis, summary: Sequence[int]) -> TenseTally:
    doc = analysis.doc
    spans = doc.sentences()
    verbs = sorted(analysis.verbs, key=lambda v: v.group_span)
    tally = TenseTally()
    flag = False
    for k in summary:
        s, e = spans[k]
        picked = _linked(analysis.dep_links, s, e) or _linked(analysis.prox_links, s, e)
        if not picked:
            picked = _fallback_verbs(doc, [v for v in verbs if s <= v.head_index < e], s, e)
        for v in picked:
            tally = tally.add(v.tense)
            if v.tense == PRESENT and _followed_by_number(doc, v, verbs, e):
                flag = True
    return TenseTally(tally.past, tally.present, tally.future, flag)


def classify_rules(t: TenseTally) -> str:
    if t.future > 0 or t.past > 0:
        if t.future >= t.past:
            return FUTURE
        if t.past > 1 and t.present + t.future > t.past:
            return FUTURE
        if t.present >= 3 * t.past:
            return FUTURE
        return PAST
    return PAST if t.present_followed_by_number else FUTURE


@dataclass(frozen=True)
class BaselineDecision:
    id: str
    summary: tuple[int, ...]
    tally: TenseTally
    label: str


def classify_document(analysis: Analysis, title: str, tree: SemanticTree,
                      threshold: float = RELEVANCE_THRESHOLD) -> tuple[tuple[int, ...], TenseTally, str]:
    summary = tuple(extractive_summary(analysis.doc, title, tree, threshold))
    tally = count_tenses(analysis, summary)
    return summary, tally, classify_rules(tally)


def run_baseline(corpus, tree: SemanticTree | None = None, resources=None,
                 threshold: float = RELEVANCE_THRESHOLD, analyses=None):
    """Classify every corpus item by the rules; returns (decisions, metrics)."""
    from .evaluation import evaluate
    from .pipeline import Resources

    tree = tree or SemanticTree.load()
    resources = resources or Resources.default()
    decisions = []
    for k, item in enumerate(corpus):
        analysis = analyses[k] if analyses is not None else resources.analyze(item.content, item.ticker)
        summary, tally, label = classify_document(analysis, title_of(item.content), tree, threshold)
        decisions.append(BaselineDecision(item.id, summary, tally, label))
    metrics = evaluate([d.label for d in decisions], [it.temporality for it in corpus])
    return decisions, metrics

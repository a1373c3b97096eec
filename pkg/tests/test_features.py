from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fintempo.features import (
    CHAR_GRAMS, EXTRA_NAMES, FAMILIES, GLOBAL_NAMES, TEMPORAL_NAMES, WORD_GRAMS, WORD_TOKENS, DocFeatures,
    FeatureConfig, FeaturePipeline, NgramConfig, VectorizerModel, assemble, fit_vectorizer, header_hash,
    numerical_features, partition_bounds, temporal_features, transform_ngrams,
)
from fintempo.lingua import FUTURE, analyze_document
from fintempo.normalize import normalize_numerics
from fintempo.pipeline import doc_features

from conftest import BOEING_BEFORE, INTEL_TAGGED


def ngram_oracle(text, family, n_min, n_max):
    """Independent enumeration: every (start, length) window of every unit."""
    out = Counter()
    if family == CHAR_GRAMS:
        units = [text]
    elif family == WORD_TOKENS:
        units = [" " + w + " " for w in text.split()]
    else:
        words = text.split()
        for start in range(len(words)):
            for n in range(n_min, n_max + 1):
                if start + n <= len(words):
                    out[" ".join(words[start:start + n])] += 1
        return out
    for u in units:
        for start in range(len(u)):
            for n in range(n_min, n_max + 1):
                if start + n <= len(u):
                    out[u[start:start + n]] += 1
    return out


def test_single_doc_bigram():
    m = fit_vectorizer(["ab"], CHAR_GRAMS, NgramConfig(2, 2, 1.0))
    assert m.vocabulary == {"ab": 0}


def test_max_df_drops_common_word():
    texts = ["the cat sat"] * 4 + [f"dog{i} ran" for i in range(6)]
    m = fit_vectorizer(texts, WORD_GRAMS, NgramConfig(1, 2, 0.30))
    assert not any("the" in g.split() for g in m.vocabulary)
    assert "ran" not in m.vocabulary  # 6 of 10 documents
    assert "dog0" in m.vocabulary


def test_min_df_count_and_fraction():
    texts = ["a b", "a c", "a d", "b e"]
    assert set(fit_vectorizer(texts, WORD_GRAMS, NgramConfig(1, 1, 1.0, min_df=2)).vocabulary) == {"a", "b"}
    assert set(fit_vectorizer(texts, WORD_GRAMS, NgramConfig(1, 1, 1.0, min_df=0.5)).vocabulary) == {"a", "b"}


def test_max_features_ties_lexicographic():
    texts = ["z y x", "z y w"]
    m = fit_vectorizer(texts, WORD_GRAMS, NgramConfig(1, 1, 1.0, max_features=3))
    # z and y occur twice; among the singletons w wins over x
    assert set(m.vocabulary) == {"z", "y", "w"}
    assert list(m.vocabulary) == sorted(m.vocabulary)


def test_default_caps_hold(synthetic):
    texts = [" ".join(it.content.lower().split()) for it in synthetic][:200]
    for fam in FAMILIES:
        m = fit_vectorizer(texts, fam)
        assert len(m) <= 10000


def test_transform_examples():
    vocab = {"ab": 0, "ba": 1}
    m = VectorizerModel(CHAR_GRAMS, vocab, NgramConfig(2, 2, 1.0))
    assert transform_ngrams("abab", m) == {0: 2, 1: 1}
    assert transform_ngrams("ab", m) == {0: 1}
    assert transform_ngrams("", m) == {}
    assert m.transform(["", "ba"]).toarray().tolist() == [[0, 0], [0, 1]]


def test_word_tokens_stay_inside_words():
    m = fit_vectorizer(["ab cd"], WORD_TOKENS, NgramConfig(2, 3, 1.0))
    assert " ab" in m.vocabulary and "cd " in m.vocabulary
    assert not any("b c" in g for g in m.vocabulary)


def test_bad_configs():
    with pytest.raises(ValueError):
        NgramConfig(3, 2)
    with pytest.raises(ValueError):
        fit_vectorizer([], CHAR_GRAMS)
    with pytest.raises(ValueError):
        fit_vectorizer(["a"], "Graphemes")


def test_vectorizer_json_round_trip():
    m = fit_vectorizer(["stock rose", "stock fell"], WORD_GRAMS, NgramConfig(1, 2, 1.0))
    back = VectorizerModel.from_json(m.to_json())
    assert back == m
    assert back.feature_names()[0].startswith("word:")


random_text = st.text(alphabet="abc ", max_size=14)


@settings(max_examples=100, deadline=None)
@given(random_text, st.sampled_from(FAMILIES), st.integers(1, 3), st.integers(0, 2))
def test_counts_match_enumeration(text, family, n_min, extra):
    n_max = n_min + extra
    m = fit_vectorizer([text or "a"], family, NgramConfig(n_min, n_max, 1.0, max_features=None))
    got = {g: c for g, c in ((g, transform_ngrams(text, m).get(i, 0)) for g, i in m.vocabulary.items()) if c}
    oracle = ngram_oracle(text, family, n_min, n_max)
    if text:
        assert got == dict(oracle)
    assert set(oracle) <= set(m.vocabulary) or not text


@settings(max_examples=100, deadline=None)
@given(random_text, random_text, st.integers(1, 3), st.integers(0, 2))
def test_concatenation_is_superadditive(t1, t2, n_min, extra):
    n_max = n_min + extra
    c1, c2, c12 = (ngram_oracle(t, CHAR_GRAMS, n_min, n_max) for t in (t1, t2, t1 + t2))
    m = fit_vectorizer([t1 + t2 or "a"], CHAR_GRAMS, NgramConfig(n_min, n_max, 1.0, max_features=None))
    row = transform_ngrams(t1 + t2, m)
    for g, i in m.vocabulary.items():
        assert row.get(i, 0) >= c1[g] + c2[g]
    slack = sum(n - 1 for n in range(n_min, n_max + 1))
    assert sum(c12.values()) - sum(c1.values()) - sum(c2.values()) <= slack


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text(alphabet="ab ", min_size=1, max_size=8), min_size=1, max_size=12),
       st.sampled_from([0.2, 0.3, 0.5, 1.0]))
def test_vocabulary_respects_max_df(texts, ratio):
    m = fit_vectorizer(texts, WORD_GRAMS if any(t.split() for t in texts) else CHAR_GRAMS,
                       NgramConfig(1, 2, ratio, max_features=None))
    for g in m.vocabulary:
        df = sum(1 for t in texts if ngram_oracle(t, m.family, 1, 2)[g] > 0)
        assert df <= ratio * len(texts) + 1e-9


def test_numerical_counts(resources):
    assert numerical_features(normalize_numerics("NUM NUM PERC")) == (2, 1)
    assert numerical_features(normalize_numerics("no numbers here")) == (0, 0)
    assert numerical_features(resources.tag(BOEING_BEFORE, "Boeing")) == (0, 1)
    assert numerical_features(normalize_numerics("on 2019-03-01 and in 2020")) == (0, 0)


def intel_features():
    return temporal_features(analyze_document(normalize_numerics(INTEL_TAGGED)))


def test_intel_temporal_values():
    tf = intel_features()
    assert tf["PRS_PROX_SUB_OBJ"] == 2
    assert tf["FUT_PROX_SUB_OBJ"] == 2
    assert tf["GLOBAL_PROX_SUB_OBJ"] == FUTURE
    assert tf["PRS_DEP_SUB"] >= 2


def test_no_ticker_document():
    tf = temporal_features(analyze_document(normalize_numerics("Prices rose. Demand will grow.")))
    for name in TEMPORAL_NAMES:
        if name in GLOBAL_NAMES:
            assert tf[name] is None
        elif "DEP" in name or "PROX" in name:
            assert tf[name] == 0
    assert tf["PST_INITIAL"] + tf["FUT_MEDIUM"] + tf["FUT_FINAL"] >= 2


def test_three_sentence_partitions():
    a = analyze_document(normalize_numerics("Prices rose. Sales fell. Costs climbed."))
    tf = temporal_features(a)
    assert (tf["PST_INITIAL"], tf["PST_MEDIUM"], tf["PST_FINAL"]) == (1, 1, 1)


def test_partition_bounds():
    assert partition_bounds(3) == (1, 2)
    assert partition_bounds(1) == (1, 1)
    assert partition_bounds(2) == (1, 2)
    assert partition_bounds(10) == (4, 7)


WORDS = ["TICKER", "OTHER", "the", "stock", "will", "rise", "rose", "is", "going", "to", "fall", "has",
         "fixed", "and", "but", ",", "did", "not", "report", "NUM", "analysts", "said", ".", "It"]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=40).map(" ".join))
def test_subset_inequalities_and_partition_sum(text):
    a = analyze_document(normalize_numerics(text))
    tf = temporal_features(a)
    for tense in ("PRS", "PST", "FUT"):
        for fam in ("DEP", "PROX"):
            assert 0 <= tf[f"{tense}_{fam}_SUB"] <= tf[f"{tense}_{fam}_SUB_OBJ"]
    parts = [tf[f"{t}_{p}"] for t in ("PRS", "PST", "FUT") for p in ("INITIAL", "MEDIUM", "FINAL")]
    assert sum(parts) == len(a.verbs)


def test_assemble_zero_document_and_header(resources):
    docs = [doc_features(resources.analyze(t, "Intel")) for t in
            ("Intel rose 5% today.", "Intel will grow next year.", "Intel fell sharply.", "Intel is rising.")]
    cfg = FeatureConfig(percentile=0.8)
    pipe = FeaturePipeline(cfg).fit(docs, ["Past", "Future", "Past", "Future"])
    zero = assemble(DocFeatures(""), pipe.vectorizers, pipe.kept)
    vec = zero.dense()
    assert vec.shape == (len(pipe.kept) + 27,)
    assert not vec.any()
    header = pipe.header()
    assert len(header) == len(pipe.kept) + len(EXTRA_NAMES)
    assert header[-27:] == list(EXTRA_NAMES)
    again = FeaturePipeline(cfg).fit(docs, ["Past", "Future", "Past", "Future"])
    assert header_hash(again.header()) == header_hash(header)
    X = pipe.transform(docs)
    assert X.shape == (4, len(header))
    dense = assemble(docs[0], pipe.vectorizers, pipe.kept).dense()
    assert np.allclose(dense, X[0].toarray().ravel())


def test_pipeline_round_trip(resources):
    docs = [doc_features(resources.analyze(t, "Intel")) for t in ("Intel rose.", "Intel will rise.")]
    pipe = FeaturePipeline().fit(docs, ["Past", "Future"])
    back = FeaturePipeline.from_dict(pipe.to_dict())
    assert (back.transform(docs) != pipe.transform(docs)).nnz == 0
    assert back.header() == pipe.header()


def test_onehot_global_encoding():
    doc = DocFeatures("", 1, 0, intel_features())
    ex = doc.extras("onehot")
    assert ex["GLOBAL_PROX_SUB_OBJ"] == [0.0, 0.0, 0.0, 1.0]
    assert doc.extras()["GLOBAL_PROX_SUB_OBJ"] == [3.0]

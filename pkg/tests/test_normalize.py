import re

from hypothesis import given, settings, strategies as st

from fintempo.normalize import (
    NUMBER_RE, TAGS, LexiconSet, default_lexica, normalize_numerics, normalize_text, scrub_for_ngrams,
    sentence_spans, tag_entities, tokenize,
)

from conftest import BOEING_BEFORE

WORDS = ["the", "stock", "rose", "Intel", "in", "March", "2019", "6.6%", "12", "percent", "three",
         "London", "Smith", "on", "October", "29", ",", ".", "Boeing", "3.5", "per", "cent", "2023-01-05"]


def test_year_becomes_date():
    assert normalize_numerics("sold out through 2023").render() == "sold out through DATE"


def test_boeing_second_sentence_uses_perc():
    out = normalize_numerics("On October 29, 2018, the stock dropped 6.6% and recovered in three days").render()
    assert out == "On DATE, DATE, the stock dropped PERC and recovered in three days"


def test_number_words_are_kept():
    assert "three" in normalize_numerics("recovered in three days").render()


def test_empty_text():
    doc = normalize_numerics("")
    assert len(doc) == 0
    assert doc.render() == ""


def test_percent_word_and_plain_number():
    assert normalize_numerics("up 12 percent to 340 units").render() == "up PERC to NUM units"
    assert normalize_numerics("fell 3.5 per cent").render() == "fell PERC"


def test_iso_date():
    assert normalize_numerics("on 2023-01-05 it closed").render() == "on DATE it closed"


def test_name_tagging_in_context():
    text = '"It will take many years.", Hans Mosesmann, a technology analyst at Rosenblatt Securities, told CNBC.'
    out = tag_entities(normalize_numerics(text), default_lexica()).render()
    assert "NAME Mosesmann, a technology analyst at NAME Securities" in out


def test_no_capitalized_tokens_unchanged():
    assert normalize_text("the company reported").render() == "the company reported"


def test_city_lexicon_lookup(tmp_path):
    cities = tmp_path / "cities.txt"
    cities.write_text("# test cities\nlondon\n", encoding="utf-8")
    lex = LexiconSet.load({"cities": cities})
    out = tag_entities(normalize_numerics("The firm is based in London"), lex).render()
    assert out == "The firm is based in LOC"


def test_sentence_initial_capital_is_not_a_name(tmp_path):
    surnames = tmp_path / "surnames.txt"
    surnames.write_text("smith\n", encoding="utf-8")
    lex = LexiconSet.load({"surnames": surnames})
    out = normalize_text("Smith said the stock rose. Later Smith left.", lex).render()
    assert out.startswith("Smith said")
    assert "Later NAME left" in out


def test_scrub_rules():
    assert scrub_for_ngrams(normalize_numerics("Make no mistake, TICKER is going to")) == \
        "make no mistake TICKER is going to"
    assert scrub_for_ngrams(normalize_numerics("don't")) == "dont"
    assert scrub_for_ngrams(normalize_numerics("@TICKER@")) == "TICKER"
    assert scrub_for_ngrams(normalize_numerics("Café (big) #1 deal!")) == "cafe big NUM deal"


def test_offsets_point_into_source():
    doc = normalize_numerics(BOEING_BEFORE)
    for tok in doc.tokens:
        if tok.tag is None:
            assert BOEING_BEFORE[tok.start:tok.end] == tok.text


def test_bundled_lexicon_sizes():
    lex = default_lexica()
    assert len(lex.surnames) >= 1000
    assert len(lex.cities) >= 500
    assert len(lex.abbreviations) >= 100


def test_sentence_spans_cover_tokens():
    toks = normalize_numerics(BOEING_BEFORE).tokens
    spans = sentence_spans(toks)
    assert spans[0][0] == 0 and spans[-1][1] == len(toks)
    assert all(a[1] == b[0] for a, b in zip(spans, spans[1:]))
    assert len(spans) == 2


texts = st.lists(st.sampled_from(WORDS), max_size=25).map(" ".join)


@settings(max_examples=200, deadline=None)
@given(texts)
def test_normalize_numerics_idempotent(text):
    once = normalize_numerics(text)
    assert normalize_numerics(once) == once
    assert normalize_numerics(once.render()).render() == once.render()


@settings(max_examples=150, deadline=None)
@given(texts)
def test_entities_idempotent(text):
    lex = default_lexica()
    once = normalize_text(text, lex)
    assert tag_entities(once, lex) == once


@settings(max_examples=150, deadline=None)
@given(texts)
def test_no_numeric_plain_tokens_remain(text):
    doc = normalize_text(text)
    for tok in doc.tokens:
        if tok.tag is None:
            assert not NUMBER_RE.fullmatch(tok.text)
            assert not re.fullmatch(r"(19|20)\d\d", tok.text)


@settings(max_examples=150, deadline=None)
@given(texts)
def test_token_count_never_grows(text):
    raw = tokenize(text)
    num = normalize_numerics(text)
    ent = tag_entities(num, default_lexica())
    assert len(ent) <= len(num) <= len(raw)
    assert all(t.tag is None or t.tag in TAGS for t in ent.tokens)

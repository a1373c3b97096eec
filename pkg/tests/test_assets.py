from hypothesis import given, settings, strategies as st

from fintempo.assets import REFERENTIAL_NOUNS, resolve_referential, tag_assets, ticker_mentions
from fintempo.normalize import default_lexica, normalize_numerics

from conftest import BOEING_AFTER, BOEING_BEFORE


def chain(text, ticker, resources):
    return resources.tag(text, ticker)


def test_other_and_ticker(resources):
    out = chain("Airbus and Boeing are sold out", "Boeing", resources).render()
    assert out == "OTHER and TICKER are sold out"


def test_intel_is_lagging(resources):
    assert chain("Intel is lagging", "Intel", resources).render() == "TICKER is lagging"


def test_no_assets_unchanged(resources):
    text = "the weather was calm and trading was thin"
    assert chain(text, "Boeing", resources).render() == text


def test_possessive_and_case_insensitive(resources):
    assert chain("Intel's chips are late", "Intel", resources).render() == "TICKER chips are late"
    assert chain("shares of INTEL fell", "Intel", resources).render() == "shares of TICKER fell"


def test_referential_from_previous_sentence(resources):
    text = "Boeing is sold out. On October 29, the stock dropped 6.6%."
    assert chain(text, "Boeing", resources).render().endswith("On DATE, the TICKER dropped PERC.")


def test_referential_without_antecedent():
    lex = default_lexica()
    doc = resolve_referential(tag_assets(normalize_numerics("the stock dropped"), "Boeing", lex))
    assert doc.render() == "the stock dropped"


def test_last_same_sentence_ticker_wins(resources):
    out = chain("Airbus rose while Boeing fell; the company recovered", "Boeing", resources).render()
    assert out == "OTHER rose while TICKER fell; the TICKER recovered"
    out = chain("Boeing rose while Airbus fell; the company recovered", "Boeing", resources).render()
    assert out == "TICKER rose while OTHER fell; the OTHER recovered"


def test_resolution_does_not_skip_a_sentence(resources):
    text = "Boeing is sold out. Demand was high. The stock dropped."
    assert chain(text, "Boeing", resources).render() == "TICKER is sold out. Demand was high. The stock dropped."


def test_boeing_tagging_example(resources):
    out = chain(BOEING_BEFORE, "Boeing", resources).render()
    # percentages follow the PERC rule; the reference output shows NUM there
    assert out == BOEING_AFTER.replace("dropped NUM", "dropped PERC")


def test_mentions_record_antecedent(resources):
    doc = chain(BOEING_BEFORE, "Boeing", resources)
    ments = ticker_mentions(doc)
    kinds = [(m.kind, m.origin) for m in ments]
    assert kinds == [("other", "literal"), ("main", "literal"), ("main", "referential")]
    assert ments[2].antecedent == ments[1].token_index


SENT = st.lists(st.sampled_from(["Boeing", "Airbus", "the", "stock", "company", "rose", "fell", "and",
                                 "share", "Intel", "while", "demand"]), min_size=1, max_size=8)
DOCS = st.lists(SENT, min_size=1, max_size=5).map(
    lambda ss: " ".join(" ".join(s).capitalize() + "." for s in ss))


@settings(max_examples=150, deadline=None)
@given(DOCS)
def test_referential_invariants(text):
    lex = default_lexica()
    tagged = tag_assets(normalize_numerics(text), "Boeing", lex)
    assert tag_assets(tagged, "Boeing", lex) == tagged
    doc = resolve_referential(tagged)
    assert resolve_referential(doc) == doc
    spans = doc.sentences()

    def sent_of(i):
        return next(k for k, (s, e) in enumerate(spans) if s <= i < e)

    for m in ticker_mentions(doc):
        if m.origin == "referential":
            ante = doc.tokens[m.antecedent]
            assert m.antecedent < m.token_index
            assert ante.origin == "literal"
            assert sent_of(m.token_index) - sent_of(m.antecedent) <= 1
            assert doc.tokens[m.token_index].tag == ante.tag
            assert tagged.tokens[m.token_index].text.lower() in REFERENTIAL_NOUNS

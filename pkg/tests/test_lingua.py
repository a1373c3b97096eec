from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fintempo.lingua import (
    DEPENDENCY, FUTURE, OBJECT, PAST, PRESENT, PROXIMITY, SUBJECT, TENSES, VerbLexicon, analyze_document,
    default_verb_lexicon, link_dependency, link_proximity, segment, tag_verbs,
)
from fintempo.normalize import default_lexica, normalize_numerics, normalize_text

from conftest import INTEL_TAGGED

GOLDEN = Path(__file__).parent / "data" / "golden_tenses.tsv"


def analyze(text):
    return analyze_document(normalize_numerics(text))


def groups(text):
    a = analyze(text)
    return [(v.words(a.doc), v.tense) for v in a.verbs]


def load_golden(path=GOLDEN):
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        sentence, labels = line.split("\t")
        pairs = [tuple(p.rsplit("=", 1)) for p in labels.split("; ")]
        rows.append((sentence, pairs))
    return rows


def golden_agreement(path=GOLDEN):
    lex = default_lexica()
    hit = total = 0
    for sentence, pairs in load_golden(path):
        a = analyze_document(normalize_text(sentence, lex))
        found = {v.words(a.doc).lower(): v.tense for v in a.verbs}
        for words, tense in pairs:
            total += 1
            hit += found.get(words.lower()) == tense
    return hit, total


def test_golden_file_shape():
    rows = load_golden()
    assert len(rows) == 20
    for _, pairs in rows:
        assert all(t in TENSES for _, t in pairs)


def test_golden_agreement():
    hit, total = golden_agreement()
    assert hit / total >= 0.95, f"{hit}/{total}"


def test_lexicon_size_and_forms():
    lex = default_verb_lexicon()
    assert len(lex) >= VerbLexicon.MIN_IRREGULAR
    assert "past" in lex.kinds("took")
    assert "part" in lex.kinds("taken")
    assert "s3" in lex.kinds("reports")


def test_lexicon_rejects_bad_rows(tmp_path):
    bad = tmp_path / "irr.tsv"
    bad.write_text("go\twent\n", encoding="utf-8")
    with pytest.raises(ValueError, match="expected base"):
        VerbLexicon.load(bad)


def test_segment_examples():
    doc = segment(normalize_numerics("TICKER is lagging on its competitors."))
    assert len(doc.sentence_bounds) == 1 and len(doc.clause_bounds) == 1
    doc = segment(normalize_numerics("If they could get the planes, OTHER and TICKER are sold out through DATE."))
    assert len(doc.sentence_bounds) == 1 and len(doc.clause_bounds) == 2
    assert segment(normalize_numerics("")).sentence_bounds == ()


def test_future_groups():
    assert ("will take", FUTURE) in groups("TICKER will take many, many, many years")
    assert groups("TICKER is going to have to fix it") == [("is going to have to fix", FUTURE)]
    assert groups("They won't sell.") == [("won't sell", FUTURE)]
    assert groups("The fund shall pay.") == [("shall pay", FUTURE)]


def test_past_groups():
    assert groups("the stock dropped PERC and recovered") == [("dropped", PAST), ("recovered", PAST)]
    assert groups("The firm did not expect growth.") == [("did not expect", PAST)]
    assert groups("Analysts saw weak demand.") == [("saw", PAST)]


def test_present_and_aspect():
    assert groups("He has fixed it.") == [("has fixed", PRESENT)]
    assert groups("He had fixed it.") == [("had fixed", PAST)]
    assert groups("TICKER is lagging.") == [("is lagging", PRESENT)]
    assert groups("The index rises daily.") == [("rises", PRESENT)]
    for modal in ("should", "can", "may", "must", "could", "would"):
        assert groups(f"TICKER {modal} grow.") == [(f"{modal} grow", PRESENT)]


def test_dependency_subject():
    a = analyze("TICKER is lagging on its competitors")
    [link] = a.dep_links
    assert (link.verb.words(a.doc), link.role, link.method) == ("is lagging", SUBJECT, DEPENDENCY)


def test_inversion_subject():
    a = analyze("And second, will TICKER be allowed to execute its plan in full?")
    [link] = a.dep_links
    assert link.role == SUBJECT
    assert link.verb.words(a.doc) == "will be allowed to execute"
    assert link.verb.tense == FUTURE


def test_no_verb_no_link():
    a = analyze("TICKER, the chipmaker.")
    assert a.dep_links == () and a.prox_links == ()


def test_proximity_prefers_near_preceding_verb():
    a = analyze("Cost-cutting should make TICKER a leaner company.")
    [link] = a.prox_links
    assert link.verb.words(a.doc) == "should make"
    assert link.method == PROXIMITY
    assert link.role == OBJECT


def test_intel_links():
    a = analyze(INTEL_TAGGED)
    prox = {(l.verb.words(a.doc), l.verb.tense) for l in a.prox_links if l.ticker_tag == "TICKER"}
    assert prox == {("is lagging", PRESENT), ("is going to have to fix", FUTURE),
                    ("will take", FUTURE), ("has", PRESENT)}
    dep_sub = {l.verb.words(a.doc) for l in a.dep_links if l.role == SUBJECT}
    assert {"is lagging", "has"} <= dep_sub


WORDS = ["TICKER", "OTHER", "the", "stock", "will", "rise", "rose", "is", "going", "to", "fall", "has",
         "fixed", "and", "but", ",", "did", "not", "report", "reports", "NUM", "analysts", "said", "."]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(WORDS), max_size=30).map(" ".join))
def test_tagging_deterministic_and_clause_local(text):
    a = analyze(text)
    b = analyze(text)
    assert a == b
    doc = a.doc

    def clause_of(i):
        return next(k for k, (s, e) in enumerate(doc.clause_bounds) if s <= i < e)

    for v in a.verbs:
        assert v.tense in TENSES
        assert v.group_span[0] <= v.head_index < v.group_span[1]
    for link in a.dep_links + a.prox_links:
        assert clause_of(link.ticker_index) == link.verb.clause_id
    # clause bounds nest inside sentence bounds
    for s, e in doc.clause_bounds:
        assert any(ss <= s and e <= se for ss, se in doc.sentence_bounds)
    assert link_dependency(doc, a.verbs) == list(a.dep_links)
    assert link_proximity(doc, tag_verbs(doc)) == list(a.prox_links)

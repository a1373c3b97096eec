"""Clause segmentation, verb-group tense tagging and ticker-verb linking.

A small rule-based stand-in for a full parser: it recovers what the
temporal features need, namely the tense of each verb group and whether
an asset mention acts as its subject or object.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .normalize import TaggedDocument, Token, data_path, read_word_list, sentence_spans

PAST, PRESENT, FUTURE = "Past", "Present", "Future"
TENSES = (PRESENT, PAST, FUTURE)
SUBJECT, OBJECT = "Subject", "Object"
DEPENDENCY, PROXIMITY = "Dependency", "Proximity"

BE = {"am": PRESENT, "is": PRESENT, "are": PRESENT, "was": PAST, "were": PAST,
      "be": None, "been": None, "being": None}
HAVE = {"have": PRESENT, "has": PRESENT, "had": PAST, "having": None}
DO = {"do": PRESENT, "does": PRESENT, "did": PAST}
FUTURE_MODALS = {"will", "shall"}
OTHER_MODALS = {"would", "should", "can", "could", "may", "might", "must", "ought", "cannot"}

CONTRACTIONS = {
    "won't": "will", "shan't": "shall", "can't": "can", "couldn't": "could",
    "wouldn't": "would", "shouldn't": "should", "mustn't": "must", "mightn't": "might",
    "isn't": "is", "aren't": "are", "wasn't": "was", "weren't": "were", "ain't": "is",
    "hasn't": "has", "haven't": "have", "hadn't": "had",
    "don't": "do", "doesn't": "does", "didn't": "did",
}
# pronoun-host clitics: "it'll", "they're", "we've", "he's", "I'd"
CLITIC_AUX = {"'ll": "will", "'re": "are", "'ve": "have", "'m": "am", "'d": "would"}
_S_HOSTS = {"it", "he", "she", "that", "there", "what", "who", "here", "where", "this"}

DETERMINERS = {
    "the", "a", "an", "this", "these", "those", "its", "their", "his", "her", "our", "my",
    "your", "some", "any", "no", "every", "each", "all", "many", "much", "more", "most",
    "few", "several", "such", "another", "other", "whose", "both", "either", "neither",
}
PREPOSITIONS = {
    "of", "in", "on", "at", "by", "for", "with", "from", "into", "onto", "about", "over",
    "under", "after", "before", "between", "through", "during", "against", "among",
    "without", "within", "across", "behind", "beyond", "since", "until", "upon", "toward",
    "towards", "per", "via", "like", "than", "as", "amid", "despite", "near", "off", "out",
    "up", "down", "around", "along", "above", "below",
}
SUBJECT_PRONOUNS = {"i", "you", "he", "she", "it", "we", "they", "who", "which", "that", "there"}
PLURAL_PRONOUNS = {"i", "you", "we", "they", "who", "which", "that"}
THIRD_SINGULAR = {"he", "she", "it", "who", "which", "that", "this"}
CONJUNCTIONS = {"and", "or", "but", "nor", "so", "yet", "if", "because", "while", "although",
                "though", "whether", "unless", "when", "where", "whereas", "once"}
CLAUSE_MARKERS = {"and", "but", "because", "while", "that", "which", "who", "whom", "whose",
                  "where", "when", "if", "although", "though", "since", "unless", "whereas",
                  "or", "so"}
_CLAUSE_PUNCT = {",", ";", ":"}

ADVERBS = {
    "not", "also", "still", "just", "already", "never", "ever", "likely", "probably",
    "possibly", "certainly", "really", "only", "even", "soon", "actually", "again", "always",
    "now", "then", "finally", "eventually", "further", "definitely", "clearly", "largely",
    "mostly", "partly", "quickly", "slowly", "sharply", "steadily", "significantly",
    "reportedly", "widely", "generally", "currently", "recently", "simply", "nearly",
    "almost", "hardly", "barely", "once", "yet", "perhaps", "often", "sometimes", "usually",
    "increasingly", "initially", "previously", "later", "well", "far", "long", "soon",
}
_NOT_ADVERB_LY = {"family", "supply", "apply", "rely", "fly", "july", "italy", "ally", "reply",
                  "multiply", "imply", "comply", "assembly", "anomaly", "monopoly", "rally",
                  "belly", "bully", "jelly", "holy", "early", "daily", "weekly", "monthly",
                  "quarterly", "yearly", "only"}

_REGULAR_ED_NONVERBS = {
    "need", "speed", "seed", "feed", "bed", "red", "shed", "indeed", "hundred", "proceed",
    "exceed", "succeed", "breed", "embed", "greed", "creed", "deed", "weed", "bleed",
    "sacred", "naked", "wicked", "kindred", "rugged", "ragged", "crooked",
}
_ADJECTIVAL_ED = {"based", "listed", "limited", "related", "advanced", "skilled", "detailed",
                  "interested", "united", "so-called", "unexpected", "expected", "unprecedented",
                  "diversified", "integrated", "sophisticated", "automated", "dedicated",
                  "experienced", "talented", "concerned", "unlisted", "biased", "mixed"}


@dataclass(frozen=True)
class VerbMention:
    head_index: int
    group_span: tuple[int, int]
    tense: str
    clause_id: int = -1
    sentence_id: int = -1
    subject_index: int | None = None  # inverted subject inside the span

    def words(self, doc: TaggedDocument) -> str:
        s, e = self.group_span
        return " ".join(t.surface() for k, t in enumerate(doc.tokens[s:e], s) if k != self.subject_index)


@dataclass(frozen=True)
class TickerVerbLink:
    ticker_index: int
    ticker_tag: str
    verb: VerbMention
    method: str
    role: str


# -- lexicon ------------------------------------------------------------------

def _third_person(base: str) -> set[str]:
    if re.search(r"(s|x|z|ch|sh|o)$", base):
        return {base + "es"}
    if re.search(r"[^aeiou]y$", base):
        return {base[:-1] + "ies"}
    return {base + "s"}


def _past_regular(base: str) -> set[str]:
    if base.endswith("e"):
        return {base + "d"}
    if re.search(r"[^aeiou]y$", base):
        return {base[:-1] + "ied"}
    forms = {base + "ed"}
    if re.search(r"[^aeiou][aeiou][bdgklmnprtv]$", base):
        forms.add(base + base[-1] + "ed")
    return forms


def _gerund(base: str) -> set[str]:
    if base.endswith("ie"):
        return {base[:-2] + "ying"}
    if base.endswith("e") and not base.endswith(("ee", "ye", "oe")):
        return {base[:-1] + "ing"}
    forms = {base + "ing"}
    if re.search(r"[^aeiou][aeiou][bdgklmnprtv]$", base):
        forms.add(base + base[-1] + "ing")
    return forms


class VerbLexicon:
    """Irregular paradigms plus regular bases, indexed by surface form.

    ``irregular`` maps base -> (past, participle).  Every surface form maps
    to a set of (base, form) pairs with form in base/s3/past/part/ing.
    """

    MIN_IRREGULAR = 150

    def __init__(self, irregular: Mapping[str, tuple[str, str]], regular: Iterable[str] = ()):
        self.irregular = {k.lower(): (p.lower(), pp.lower()) for k, (p, pp) in irregular.items()}
        self.regular = frozenset(w.lower() for w in regular) - set(self.irregular)
        forms: dict[str, set[tuple[str, str]]] = {}

        def add(word: str, base: str, kind: str) -> None:
            forms.setdefault(word, set()).add((base, kind))

        for base, (past, part) in self.irregular.items():
            add(base, base, "base")
            for f in _third_person(base):
                add(f, base, "s3")
            for p in past.split("/"):
                add(p, base, "past")
            for p in part.split("/"):
                add(p, base, "part")
            for g in _gerund(base):
                add(g, base, "ing")
        for base in self.regular:
            add(base, base, "base")
            for f in _third_person(base):
                add(f, base, "s3")
            for f in _past_regular(base):
                add(f, base, "past")
                add(f, base, "part")
            for g in _gerund(base):
                add(g, base, "ing")
        self._forms = {k: frozenset(v) for k, v in forms.items()}

    @classmethod
    def load(cls, irregular_path: str | Path | None = None, regular_path: str | Path | None = None) -> "VerbLexicon":
        irregular_path = Path(irregular_path) if irregular_path else data_path("irregular_verbs.tsv")
        regular_path = Path(regular_path) if regular_path else data_path("regular_verbs.txt")
        irregular = {}
        with open(irregular_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ValueError(f"{irregular_path}:{lineno}: expected base<TAB>past<TAB>participle")
                irregular[parts[0]] = (parts[1], parts[2])
        regular = read_word_list(regular_path) if regular_path.is_file() else []
        return cls(irregular, regular)

    def forms(self, word: str) -> frozenset[tuple[str, str]]:
        return self._forms.get(word.lower(), frozenset())

    def kinds(self, word: str) -> set[str]:
        return {k for _, k in self.forms(word)}

    def is_base(self, word: str) -> bool:
        return "base" in self.kinds(word)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._forms

    def __len__(self) -> int:
        return len(self.irregular)


@lru_cache(maxsize=1)
def default_verb_lexicon() -> VerbLexicon:
    return VerbLexicon.load()


# -- token classification -----------------------------------------------------

def _word(tok: Token) -> str:
    return tok.text.lower().replace("’", "'") if tok.tag is None else ""


def aux_of(tok: Token) -> str | None:
    """The auxiliary/modal a token stands for ("won't" -> "will"), if any."""
    w = _word(tok)
    if not w:
        return None
    if w in BE or w in HAVE or w in DO or w in FUTURE_MODALS or w in OTHER_MODALS:
        return w
    if w in CONTRACTIONS:
        return CONTRACTIONS[w]
    for clitic, aux in CLITIC_AUX.items():
        if w.endswith(clitic) and len(w) > len(clitic):
            return aux
    if w.endswith("'s") and w[:-2] in _S_HOSTS:
        return "is"
    return None


def _is_adverb(tok: Token) -> bool:
    w = _word(tok)
    if not w:
        return False
    if w in ADVERBS:
        return True
    return len(w) > 4 and w.endswith("ly") and w not in _NOT_ADVERB_LY


def _closed_class(w: str) -> bool:
    return (w in DETERMINERS or w in PREPOSITIONS or w in SUBJECT_PRONOUNS
            or w in CONJUNCTIONS or w in {"to", "not"} or w in BE or w in HAVE or w in DO
            or w in FUTURE_MODALS or w in OTHER_MODALS)


def _looks_ed(w: str) -> bool:
    return len(w) >= 4 and w.endswith("ed") and w not in _REGULAR_ED_NONVERBS


def _looks_ing(w: str) -> bool:
    return len(w) >= 5 and w.endswith("ing")


def _lower_plain(tok: Token) -> bool:
    return tok.tag is None and tok.text[:1].isalpha() and not tok.text[:1].isupper()


class _Tagger:
    def __init__(self, tokens: Sequence[Token], lexicon: VerbLexicon):
        self.toks = tokens
        self.lex = lexicon

    # expectations after an element: what the next verb element may be
    def _verb_after(self, j: int, expect: str) -> str | None:
        """Kind of verb element at j compatible with ``expect``, else None."""
        tok = self.toks[j]
        if tok.tag is not None:
            return None
        w = _word(tok)
        if not w or not w[0].isalpha():
            return None
        kinds = self.lex.kinds(w)
        if expect == "base":  # after modal, do, to
            if w in BE or w in HAVE:
                return "be" if w in BE else "have"
            if "base" in kinds:
                return "base"
            if _lower_plain(tok) and not _closed_class(w) and not _looks_ing(w) and not _is_adverb(tok) \
                    and not w.endswith("'s") and "past" not in kinds:
                return "base"
            return None
        if expect == "be":  # after a form of be
            if w == "going":
                return "going"
            if w in ("being", "been"):
                return "be"
            if "ing" in kinds or (_looks_ing(w) and _lower_plain(tok)):
                return "ing"
            if ("part" in kinds or (_looks_ed(w) and _lower_plain(tok))) and w not in _ADJECTIVAL_ED:
                return "part"
            return None
        if expect == "have":
            if w == "been":
                return "be"
            if "part" in kinds or (_looks_ed(w) and _lower_plain(tok)):
                return "part"
            return None
        return None

    def _skip_adverbs(self, j: int, end: int) -> int:
        while j < end and _is_adverb(self.toks[j]):
            j += 1
        return j

    def _infinitive_at(self, j: int, end: int) -> bool:
        if j + 1 >= end or _word(self.toks[j]) != "to":
            return False
        nxt = self.toks[j + 1]
        w = _word(nxt)
        if not w or not w[0].isalpha():
            return False
        if w in BE or w in HAVE or self.lex.is_base(w):
            return True
        return (_lower_plain(nxt) and not _closed_class(w) and not self.lex.kinds(w)
                and not w.endswith(("s", "ed", "ing", "ly")))

    def chain(self, i: int, end: int, expect: str | None, last: str) -> tuple[int, int, list[str], int | None]:
        """Extend a verb group from its first element at i.

        Returns (span end, head index, element kinds, inverted subject index).
        """
        j = i + 1
        head = i
        kinds = [last]
        subject = None
        while j < end:
            k = self._skip_adverbs(j, end)
            if k >= end:
                break
            # interrogative inversion: aux SUBJECT verb
            if subject is None and len(kinds) == 1 and expect and self._inversion_ok(i, k, end, expect):
                subject = k
                k = self._skip_adverbs(k + 1, end)
            kind = self._verb_after(k, expect) if expect else None
            if kind is None:
                # chained infinitive: "going to fix", "have to fix", "allowed to execute"
                if last in ("going", "have", "part", "base", "lexical", "ing") and self._infinitive_at(k, end):
                    head = k + 1
                    kinds.append("to")
                    w = _word(self.toks[k + 1])
                    last = "be" if w in BE else "have" if w in HAVE else "base"
                    kinds.append(last)
                    expect = self._expect_for(w, last)
                    j = k + 2
                    continue
                break
            head = k
            kinds.append(kind)
            last = kind
            w = _word(self.toks[k])
            expect = self._expect_for(w, kind)
            j = k + 1
        return j, head, kinds, subject

    def _expect_for(self, w: str, kind: str) -> str | None:
        if kind == "be" or w in BE:
            return "be"
        if kind == "have" or w in HAVE:
            return "have"
        if kind == "going":
            return None
        return None

    def _inversion_ok(self, aux_i: int, k: int, end: int, expect: str) -> bool:
        tok = self.toks[k]
        w = _word(tok)
        if not (tok.is_asset or tok.tag == "NAME" or w in SUBJECT_PRONOUNS - {"that", "which", "who"}):
            return False
        prev = self.toks[aux_i - 1] if aux_i > 0 else None
        if prev is not None:
            pw = _word(prev)
            if not (prev.text in {",", ";", ":", '"', "“", "(", "."} or pw in CONJUNCTIONS
                    or pw in {"why", "how", "what", "when", "where", "second", "first", "so"}):
                return False
        nxt = self._skip_adverbs(k + 1, end)
        return nxt < end and self._verb_after(nxt, expect) is not None

    def _sentence_initial(self, i: int, start: int) -> bool:
        k = start
        while k < i and self.toks[k].tag is None and self.toks[k].text in {'"', "“", "(", "'", "‘"}:
            k += 1
        return k == i

    def _prev(self, i: int, start: int) -> Token | None:
        k = i - 1
        while k >= start and _is_adverb(self.toks[k]):
            k -= 1
        return self.toks[k] if k >= start else None

    def _next_is_finite(self, i: int, end: int) -> bool:
        k = self._skip_adverbs(i + 1, end)
        if k >= end:
            return False
        tok = self.toks[k]
        w = _word(tok)
        if not w:
            return False
        if aux_of(tok) is not None:
            return True
        forms = self.lex.forms(w)
        # regular -s forms are usually plural nouns ("cuts prices")
        return any(k == "past" or (k == "s3" and b in self.lex.irregular) for b, k in forms)

    def lexical_tense(self, i: int, start: int, end: int) -> str | None:
        """Tense of a stand-alone lexical verb at i, or None if not a finite verb."""
        tok = self.toks[i]
        if tok.tag is not None:
            return None
        w = _word(tok)
        if not w or not w[0].isalpha():
            return None
        initial = self._sentence_initial(i, start)
        if tok.text[:1].isupper() and not initial:
            return None
        prev = self._prev(i, start)
        pw = _word(prev) if prev is not None else ""
        if prev is not None and prev.tag is None and (pw in DETERMINERS or pw in PREPOSITIONS or pw == "to"):
            return None
        kinds = self.lex.kinds(w)
        subj_like = prev is not None and (prev.is_asset or prev.tag == "NAME" or pw in SUBJECT_PRONOUNS)
        third = prev is not None and (prev.is_asset or prev.tag == "NAME" or pw in THIRD_SINGULAR)
        if "past" in kinds or (not kinds and _looks_ed(w) and w not in _ADJECTIVAL_ED):
            if "base" in kinds and "s3" not in kinds and w in self.lex.forms(w) and self._same_base_past(w):
                # cut/put/set: past only with a third-person singular subject
                if third:
                    return PAST
                if initial or (subj_like and pw in PLURAL_PRONOUNS) or (prev is not None and _plural_noun(prev)):
                    return PRESENT
                return None
            if initial and not kinds:
                return None
            if prev is None and not initial:
                return None
            return PAST
        strong_third = prev is not None and (prev.is_asset or prev.tag == "NAME" or pw in {"he", "she", "it"})
        if "s3" in kinds or (not kinds and w.endswith("s") and not w.endswith(("ss", "us", "is")) and strong_third):
            if initial or self._next_is_finite(i, end):
                return None
            if prev is None:
                return None
            if prev is not None and prev.tag in ("NUM", "PERC", "DATE"):
                return None
            if "s3" not in kinds and not subj_like:
                return None
            return PRESENT
        if "base" in kinds:
            if initial:
                return PRESENT
            if prev is None:
                return None
            if pw in {"that", "which", "who"}:
                # relative pronoun: "companies that expect", not "that issue"
                before = self._prev(i - 1, start) if i - 1 > start else None
                return PRESENT if before is not None and (_plural_noun(before) or before.is_asset) else None
            plural = prev.tag is None and _plural_noun(prev, allow_cap=self._sentence_initial(i - 1, start))
            if pw in PLURAL_PRONOUNS or plural or prev.is_asset and self._coordinated(i, start):
                return PRESENT
            return None
        return None

    def _same_base_past(self, w: str) -> bool:
        return any(kind == "past" and base == w for base, kind in self.lex.forms(w))

    def _coordinated(self, i: int, start: int) -> bool:
        k = i - 2
        return k >= start and _word(self.toks[k]) in {"and", "or"}


def _plural_noun(tok: Token, allow_cap: bool = False) -> bool:
    w = _word(tok)
    return bool(w) and len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is", "'s")) \
        and not _closed_class(w) and (allow_cap or tok.text[:1].islower())


def _groups_in_sentence(tokens: Sequence[Token], start: int, end: int, lexicon: VerbLexicon) -> list[VerbMention]:
    tg = _Tagger(tokens, lexicon)
    groups: list[VerbMention] = []
    i = start
    while i < end:
        tok = tokens[i]
        aux = aux_of(tok)
        if aux is not None and not (aux in BE and BE[aux] is None) and not (aux in HAVE and HAVE[aux] is None):
            if aux in FUTURE_MODALS or aux in OTHER_MODALS or aux in DO:
                expect, last = "base", "modal"
            elif aux in BE:
                expect, last = "be", "be"
            else:
                expect, last = "have", "have"
            j, head, kinds, subject = tg.chain(i, end, expect, last)
            if aux in FUTURE_MODALS:
                tense = FUTURE
            elif aux in OTHER_MODALS:
                tense = PRESENT
            elif aux in BE and len(kinds) > 2 and kinds[1] == "going" and kinds[2] == "to":
                tense = FUTURE
            elif aux in BE:
                tense = BE[aux]
            elif aux in HAVE:
                if aux == "has" or aux == "have":
                    tense = PRESENT
                else:
                    tense = PAST
            else:
                tense = DO[aux]
            groups.append(VerbMention(head, (i, j), tense, subject_index=subject))
            i = j
            continue
        tense = tg.lexical_tense(i, start, end)
        if tense == PRESENT and groups and groups[-1].group_span[1] == i:
            tense = None  # two finite present verbs are not adjacent
        if tense is not None:
            j, head, _, _ = tg.chain(i, end, None, "lexical")
            groups.append(VerbMention(head, (i, j), tense))
            i = j
            continue
        i += 1
    return groups


# -- segmentation ---------------------------------------------------------------

def _clauses_in_sentence(tokens: Sequence[Token], start: int, end: int,
                         groups: Sequence[VerbMention]) -> list[tuple[int, int]]:
    inside = set()
    for g in groups:
        inside.update(range(g.group_span[0] + 1, g.group_span[1]))
    cuts = []
    for i in range(start + 1, end):
        if i in inside:
            continue
        tok = tokens[i]
        prev = tokens[i - 1]
        if prev.tag is None and prev.text in _CLAUSE_PUNCT and (i - 1) not in inside:
            cuts.append(i)
        elif tok.tag is None and _word(tok) in CLAUSE_MARKERS:
            cuts.append(i)
    edges = [start, *sorted(set(cuts)), end]
    pieces = [(edges[k], edges[k + 1]) for k in range(len(edges) - 1) if edges[k] < edges[k + 1]]
    starts = [g.group_span[0] for g in groups]

    def has_verb(piece):
        return any(piece[0] <= s < piece[1] for s in starts)

    merged: list[tuple[int, int]] = []
    pending: tuple[int, int] | None = None
    for piece in pieces:
        if pending is not None:
            piece = (pending[0], piece[1])
            pending = None
        if has_verb(piece):
            merged.append(piece)
        else:
            pending = piece
    if pending is not None:
        if merged:
            merged[-1] = (merged[-1][0], pending[1])
        else:
            merged.append(pending)
    return merged


def segment(doc: TaggedDocument, lexicon: VerbLexicon | None = None) -> TaggedDocument:
    """Fill sentence and clause bounds.

    Sentences end at '.', '!' or '?' before a capital (or at the end).
    Within a sentence, commas, semicolons, colons and clause markers open a
    new clause only when both sides keep a verb group; verbless pieces are
    folded into their neighbour.
    """
    lexicon = lexicon or default_verb_lexicon()
    sents = sentence_spans(doc.tokens)
    clauses: list[tuple[int, int]] = []
    for s, e in sents:
        groups = _groups_in_sentence(doc.tokens, s, e, lexicon)
        clauses.extend(_clauses_in_sentence(doc.tokens, s, e, groups))
    return replace(doc, sentence_bounds=tuple(sents), clause_bounds=tuple(clauses))


def _locate(bounds: Sequence[tuple[int, int]], index: int) -> int:
    for k, (s, e) in enumerate(bounds):
        if s <= index < e:
            return k
    return -1


def tag_verbs(doc: TaggedDocument, lexicon: VerbLexicon | None = None) -> list[VerbMention]:
    """Detect verb groups and label each Past, Present or Future.

    will/shall + verb and be + going to are Future; simple pasts, did + verb
    and had + participle are Past; present forms, present perfect and the
    remaining modals are Present.
    """
    lexicon = lexicon or default_verb_lexicon()
    if not doc.sentence_bounds and doc.tokens:
        doc = segment(doc, lexicon)
    out = []
    for sid, (s, e) in enumerate(doc.sentence_bounds):
        for g in _groups_in_sentence(doc.tokens, s, e, lexicon):
            cid = _locate(doc.clause_bounds, g.group_span[0])
            out.append(replace(g, clause_id=cid, sentence_id=sid))
    return out


# -- linking ------------------------------------------------------------------------

def _assets_in(doc: TaggedDocument, s: int, e: int) -> list[int]:
    return [i for i in range(s, e) if doc.tokens[i].is_asset]


def _intervening_words(doc: TaggedDocument, a: int, b: int) -> int:
    return sum(1 for t in doc.tokens[a:b] if t.is_tag or t.text[:1].isalnum())


def _subject_gap_ok(doc: TaggedDocument, t: int, g_start: int) -> bool:
    gap = doc.tokens[t + 1:g_start]
    if all(_is_adverb(x) for x in gap):
        return True
    # coordinated subjects: "OTHER and TICKER are"
    if all(x.is_tag or _word(x) in ("and", "or") or x.text == "," or _is_adverb(x) for x in gap):
        return any(x.is_tag for x in gap)
    # modifier of the subject: "TICKER stock is", "TICKER chief executive said"
    if 1 <= len(gap) <= 3 and all(
        x.tag is None and x.text[:1].isalpha() and not _closed_class(_word(x)) and not x.text[:1].isupper()
        or x.tag is None and x.text in ("'s", "’s")
        for x in gap
    ):
        return True
    return False


def link_dependency(doc: TaggedDocument, verbs: Sequence[VerbMention]) -> list[TickerVerbLink]:
    """Shallow subject/object links between asset mentions and verb groups.

    Inside a clause, an asset right before a verb group (adverbs, a
    coordinated asset or a modified head noun may intervene) is its Subject;
    an asset between an auxiliary and its verb is an inverted Subject; an
    asset after a verb group is the Object of the nearest preceding group.
    """
    links = []
    for cid, (s, e) in enumerate(doc.clause_bounds):
        cverbs = sorted((v for v in verbs if v.clause_id == cid), key=lambda v: v.group_span)
        if not cverbs:
            continue
        for t in _assets_in(doc, s, e):
            tag = doc.tokens[t].tag
            inner = next((v for v in cverbs if v.group_span[0] < t < v.group_span[1]), None)
            if inner is not None:
                links.append(TickerVerbLink(t, tag, inner, DEPENDENCY, SUBJECT))
                continue
            after = next((v for v in cverbs if v.group_span[0] > t), None)
            prev_tok = doc.tokens[t - 1] if t > s else None
            after_prep = prev_tok is not None and prev_tok.tag is None and _word(prev_tok) in PREPOSITIONS
            if after is not None and not after_prep and _subject_gap_ok(doc, t, after.group_span[0]):
                links.append(TickerVerbLink(t, tag, after, DEPENDENCY, SUBJECT))
                continue
            before = [v for v in cverbs if v.group_span[1] <= t]
            if before:
                links.append(TickerVerbLink(t, tag, before[-1], DEPENDENCY, OBJECT))
    return links


def link_proximity(doc: TaggedDocument, verbs: Sequence[VerbMention]) -> list[TickerVerbLink]:
    """Link each asset to the nearer of its neighbouring verb groups in the clause.

    Distance is the number of intermediate word tokens; on a tie the
    preceding group wins.  A following group makes the asset its Subject, a
    preceding one its Object.
    """
    links = []
    for cid, (s, e) in enumerate(doc.clause_bounds):
        cverbs = sorted((v for v in verbs if v.clause_id == cid), key=lambda v: v.group_span)
        if not cverbs:
            continue
        for t in _assets_in(doc, s, e):
            tag = doc.tokens[t].tag
            inner = next((v for v in cverbs if v.group_span[0] < t < v.group_span[1]), None)
            if inner is not None:
                links.append(TickerVerbLink(t, tag, inner, PROXIMITY, SUBJECT))
                continue
            before = [v for v in cverbs if v.group_span[1] <= t]
            after = [v for v in cverbs if v.group_span[0] > t]
            best = None
            if before:
                p = before[-1]
                best = (_intervening_words(doc, p.group_span[1], t), p, OBJECT)
            if after:
                f = after[0]
                d = _intervening_words(doc, t + 1, f.group_span[0])
                if best is None or d < best[0]:
                    best = (d, f, SUBJECT)
            links.append(TickerVerbLink(t, tag, best[1], PROXIMITY, best[2]))
    return links


@dataclass(frozen=True)
class Analysis:
    """Everything downstream stages need about one document."""

    doc: TaggedDocument
    verbs: tuple[VerbMention, ...]
    dep_links: tuple[TickerVerbLink, ...]
    prox_links: tuple[TickerVerbLink, ...]


def analyze_document(doc: TaggedDocument, lexicon: VerbLexicon | None = None) -> Analysis:
    lexicon = lexicon or default_verb_lexicon()
    doc = segment(doc, lexicon)
    verbs = tag_verbs(doc, lexicon)
    return Analysis(doc, tuple(verbs), tuple(link_dependency(doc, verbs)), tuple(link_proximity(doc, verbs)))

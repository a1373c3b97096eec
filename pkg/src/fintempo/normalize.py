"""Tokenization and tag replacement for financial news text.

Raw text becomes a :class:`TaggedDocument`: a token stream where numerals,
percentages, dates, proper names, locations and abbreviations are replaced
by canonical tags.  :func:`scrub_for_ngrams` turns a fully tagged document
into the flat string the n-gram vectorizers consume.
"""
from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

TAGS = ("NUM", "PERC", "DATE", "NAME", "LOC", "ABB", "TICKER", "OTHER")
ASSET_TAGS = ("TICKER", "OTHER")

SEMANTIC_CATEGORIES = (
    "commerce", "enterprise", "finance", "banking", "exchange",
    "money", "insurance", "tax", "industry",
)

_TAG_ALT = "|".join(TAGS)
_TOKEN_RE = re.compile(
    rf"""
    (?P<wtag>@(?:{_TAG_ALT})@)
  | (?P<btag>(?<![\w@])(?:{_TAG_ALT})(?![\w@]))
  | (?P<isodate>\d{{4}}-\d{{1,2}}-\d{{1,2}}(?!\d)|\d{{1,2}}/\d{{1,2}}/\d{{2,4}}(?!\d))
  | (?P<acronym>(?:[A-Za-z]\.){{2,}})
  | (?P<number>\d+(?:[.,]\d+)*(?:%|st\b|nd\b|rd\b|th\b|s\b)?)
  | (?P<word>[^\W\d_](?:[^\W_]|['’\-&](?=[^\W_]))*)
  | (?P<punct>\S)
    """,
    re.VERBOSE,
)

NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*(?:%|st|nd|rd|th|s)?")
_PERCENT_WORDS = {"percent", "pct", "percentage"}

MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11,
    "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
    "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
}
# month names that are also everyday words need a numeric neighbour
_WEAK_MONTHS = {"may", "mar", "jan", "jun"}

_DAY_RE = re.compile(r"(?:[1-9]|[12]\d|3[01])(?:st|nd|rd|th)?")
_YEAR_RE = re.compile(r"(?:19|20)\d\d")

SENTENCE_END = {".", "!", "?"}
_CLOSERS = {'"', "'", "”", "’", ")", "]", "»"}
_OPENERS = {'"', "'", "“", "‘", "(", "[", "«"}

_SCRUB_CHARS = str.maketrans("", "", ",:()[]{}-–—!?¡¿'’‘`´@#")


@dataclass(frozen=True)
class Token:
    """One surface token.

    ``text`` is the original surface (for merged tokens, the original span),
    ``ws`` the whitespace that preceded it.  ``tag`` is one of :data:`TAGS`
    or None for plain words.  Asset tokens also carry ``kind``
    ("main"/"other"), ``origin`` ("literal"/"referential") and, when
    referential, the index of the literal mention they resolved to.
    """

    text: str
    start: int
    end: int
    ws: str = ""
    tag: str | None = None
    kind: str | None = None
    origin: str | None = None
    antecedent: int | None = None

    @property
    def is_tag(self) -> bool:
        return self.tag is not None

    @property
    def is_asset(self) -> bool:
        return self.tag in ASSET_TAGS

    @property
    def lower(self) -> str:
        return self.text.lower()

    @property
    def is_word(self) -> bool:
        return self.tag is None and self.text[:1].isalnum()

    @property
    def capitalized(self) -> bool:
        return self.tag is None and self.text[:1].isupper()

    def surface(self, wrap: bool = False) -> str:
        if self.tag is None:
            return self.text
        return f"@{self.tag}@" if wrap else self.tag


@dataclass(frozen=True)
class TaggedDocument:
    tokens: tuple[Token, ...] = ()
    sentence_bounds: tuple[tuple[int, int], ...] = ()
    clause_bounds: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def render(self, wrap: bool = False) -> str:
        """Text with tags substituted; inter-token whitespace becomes one space or newline."""
        parts = []
        for i, tok in enumerate(self.tokens):
            ws = tok.ws if i else ""
            if "\n" in ws:
                ws = "\n"
            elif ws:
                ws = " "
            parts.append(ws + tok.surface(wrap))
        return "".join(parts)

    def sentences(self) -> tuple[tuple[int, int], ...]:
        return self.sentence_bounds or sentence_spans(self.tokens)

    def count(self, tag: str) -> int:
        return sum(1 for t in self.tokens if t.tag == tag)


def tokenize(text: str) -> tuple[Token, ...]:
    tokens = []
    last = 0
    for m in _TOKEN_RE.finditer(text):
        ws = text[last:m.start()]
        last = m.end()
        group = m.lastgroup
        surface = m.group()
        tag = None
        if group == "wtag":
            tag = surface.strip("@")
        elif group == "btag":
            tag = surface
        tokens.append(Token(surface, m.start(), m.end(), ws, tag))
    return tuple(tokens)


def sentence_spans(tokens: Sequence[Token]) -> tuple[tuple[int, int], ...]:
    """Split on terminal punctuation followed by a capital (or the end).

    A line break before a capitalized token also closes a sentence, so a
    headline on its own line is a sentence of its own.
    """
    n = len(tokens)
    if n == 0:
        return ()
    spans = []
    start = 0
    i = 0
    while i < n:
        tok = tokens[i]
        if tok.tag is None and tok.text in SENTENCE_END:
            j = i + 1
            while j < n and tokens[j].text in _CLOSERS and not tokens[j].ws:
                j += 1
            if j >= n or _starts_sentence(tokens, j):
                spans.append((start, j))
                start = j
                i = j
                continue
        elif i > start and "\n" in tok.ws and _starts_sentence(tokens, i):
            spans.append((start, i))
            start = i
        i += 1
    if start < n:
        spans.append((start, n))
    return tuple(spans)


def _starts_sentence(tokens: Sequence[Token], j: int) -> bool:
    tok = tokens[j]
    if tok.tag is None and tok.text in _OPENERS and j + 1 < len(tokens):
        tok = tokens[j + 1]
    return tok.is_tag or tok.text[:1].isupper() or tok.text[:1].isdigit()


def sentence_initial_mask(tokens: Sequence[Token]) -> list[bool]:
    """True for the first word of every sentence (opening quotes skipped)."""
    mask = [False] * len(tokens)
    for s, e in sentence_spans(tokens):
        k = s
        while k < e and tokens[k].tag is None and tokens[k].text in _OPENERS:
            k += 1
        if k < e:
            mask[k] = True
    return mask


def _merge(tokens: Sequence[Token], text_src: str | None, tag: str, **kw) -> Token:
    first, last = tokens[0], tokens[-1]
    if text_src is None:
        surface = "".join((t.ws if k else "") + t.text for k, t in enumerate(tokens))
    else:
        surface = text_src
    return Token(surface, first.start, last.end, first.ws, tag, **kw)


# -- lexica -----------------------------------------------------------------

def read_word_list(path: str | Path) -> list[str]:
    """One entry per line, '#' starts a comment; entries lowercased."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line.lower())
    return entries


def _read_asset_names(path: str | Path) -> list[str]:
    names = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                names.append(line)
    return names


def data_path(name: str) -> Path:
    return Path(str(resources.files("fintempo") / "data" / name))


DEFAULT_LEXICON_FILES = {
    "surnames": "surnames.txt",
    "given_names": "given_names.txt",
    "cities": "cities.txt",
    "abbreviations": "abbreviations.txt",
    "assets": "assets.txt",
    "semantic_tree": "semantic_tree.json",
}


@dataclass(frozen=True)
class LexiconSet:
    surnames: frozenset[str]
    cities: frozenset[str]
    abbreviations: frozenset[str]
    finance_terms: Mapping[str, frozenset[str]]
    assets: tuple[str, ...] = ()
    given_names: frozenset[str] = frozenset()
    _finance_words: frozenset[str] = field(default=frozenset(), repr=False)

    def __post_init__(self):
        unknown = set(self.finance_terms) - set(SEMANTIC_CATEGORIES)
        if unknown:
            raise ValueError(f"unknown finance categories: {sorted(unknown)}")
        words = set()
        for terms in self.finance_terms.values():
            words.update(terms)
        for name in self.assets:
            words.update(w.lower() for w in re.findall(r"[^\W_]+", name))
        object.__setattr__(self, "_finance_words", frozenset(words))

    @classmethod
    def load(cls, paths: Mapping[str, str | Path] | None = None) -> "LexiconSet":
        """Load the bundled lexica, with any entry of ``paths`` overriding."""
        files = {k: data_path(v) for k, v in DEFAULT_LEXICON_FILES.items()}
        for key, value in (paths or {}).items():
            if key not in files:
                raise KeyError(f"unknown lexicon {key!r}")
            files[key] = Path(value)
        for key, path in files.items():
            if not Path(path).is_file():
                raise FileNotFoundError(f"{key} lexicon not found: {path}")
        with open(files["semantic_tree"], encoding="utf-8") as fh:
            tree = json.load(fh)
        return cls(
            surnames=frozenset(read_word_list(files["surnames"])),
            given_names=frozenset(read_word_list(files["given_names"])),
            cities=frozenset(read_word_list(files["cities"])),
            abbreviations=frozenset(read_word_list(files["abbreviations"])),
            assets=tuple(_read_asset_names(files["assets"])),
            finance_terms={k: frozenset(w.strip().lower() for w in v) for k, v in tree.items()},
        )

    def is_finance_word(self, word: str) -> bool:
        return word.lower() in self._finance_words

    def is_personal_name(self, word: str) -> bool:
        w = word.lower()
        return w in self.surnames or w in self.given_names


_DEFAULT_LEXICA: LexiconSet | None = None


def default_lexica() -> LexiconSet:
    global _DEFAULT_LEXICA
    if _DEFAULT_LEXICA is None:
        _DEFAULT_LEXICA = LexiconSet.load()
    return _DEFAULT_LEXICA


# -- numerics -----------------------------------------------------------------

def _as_doc(text_or_doc: str | TaggedDocument) -> TaggedDocument:
    if isinstance(text_or_doc, TaggedDocument):
        return text_or_doc
    return TaggedDocument(tokenize(text_or_doc))


def _is_plain(tok: Token, value: str | None = None) -> bool:
    return tok.tag is None and (value is None or tok.lower == value)


def _month_at(tokens: Sequence[Token], i: int) -> int:
    """Length of a month-name token at ``i`` (1, or 2 with an abbreviation dot), else 0."""
    tok = tokens[i]
    if tok.tag is not None or not tok.text[:1].isupper() or tok.lower not in MONTHS:
        return 0
    if i + 1 < len(tokens) and tokens[i + 1].text == "." and not tokens[i + 1].ws and len(tok.text) <= 4:
        return 2
    return 1


def _is_day(tok: Token) -> bool:
    return tok.tag is None and bool(_DAY_RE.fullmatch(tok.text))


def normalize_numerics(text: str | TaggedDocument) -> TaggedDocument:
    """Replace digit numerals, percentages and dates with NUM/PERC/DATE tags.

    Percentages are recognized first, so "6.6%" is never consumed as NUM.
    Number words ("three") are left alone.
    """
    doc = _as_doc(text)
    toks = doc.tokens
    out: list[Token] = []
    i, n = 0, len(toks)
    while i < n:
        tok = toks[i]
        if tok.tag is not None:
            out.append(tok)
            i += 1
            continue
        m = _month_at(toks, i)
        if m:
            j = i + m
            if j < n and _is_day(toks[j]) and toks[j].ws:
                out.append(_merge(toks[i:j + 1], None, "DATE"))
                i = j + 1
                continue
            weak = tok.lower in _WEAK_MONTHS
            next_year = j < n and toks[j].tag is None and bool(_YEAR_RE.fullmatch(toks[j].text))
            if not weak or next_year:
                out.append(_merge(toks[i:j], None, "DATE"))
                i = j
                continue
        if NUMBER_RE.fullmatch(tok.text) or _is_iso(tok.text):
            m = _month_at(toks, i + 1) if i + 1 < n and toks[i + 1].ws else 0
            if _is_day(tok) and m:
                out.append(_merge(toks[i:i + 1 + m], None, "DATE"))
                i += 1 + m
            elif _is_iso(tok.text):
                out.append(replace(tok, tag="DATE"))
                i += 1
            elif tok.text.endswith("%"):
                out.append(replace(tok, tag="PERC"))
                i += 1
            elif i + 1 < n and _is_plain(toks[i + 1]) and toks[i + 1].lower in _PERCENT_WORDS:
                out.append(_merge(toks[i:i + 2], None, "PERC"))
                i += 2
            elif (i + 2 < n and _is_plain(toks[i + 1], "per") and _is_plain(toks[i + 2], "cent")):
                out.append(_merge(toks[i:i + 3], None, "PERC"))
                i += 3
            elif _YEAR_RE.fullmatch(tok.text):
                out.append(replace(tok, tag="DATE"))
                i += 1
            else:
                out.append(replace(tok, tag="NUM"))
                i += 1
            continue
        out.append(tok)
        i += 1
    return TaggedDocument(tuple(out))


def _is_iso(text: str) -> bool:
    return bool(re.fullmatch(r"\d{4}-\d{1,2}-\d{1,2}|\d{1,2}/\d{1,2}/\d{2,4}", text))


# -- entities ---------------------------------------------------------------

_MAX_CITY_TOKENS = 4


def tag_entities(doc: TaggedDocument, lexica: LexiconSet, expand_adjacent: bool = False) -> TaggedDocument:
    """Tag abbreviations (ABB), locations (LOC) and proper names (NAME).

    Name candidates are capitalized, not sentence-initial, not finance
    vocabulary, and found in the personal-name lexica.  With
    ``expand_adjacent`` a capitalized neighbour of a candidate joins it;
    runs of candidates collapse to one NAME token.  LOC is decided before
    NAME.
    """
    toks = list(doc.tokens)
    initial = sentence_initial_mask(toks)
    out: list[Token] = []
    flags: list[bool] = []  # sentence-initial flag of each output token
    i, n = 0, len(toks)
    while i < n:
        tok = toks[i]
        if tok.tag is not None or not tok.text[:1].isalpha():
            out.append(tok)
            flags.append(initial[i])
            i += 1
            continue
        # abbreviations, optionally absorbing a trailing dot
        if i + 1 < n and toks[i + 1].text == "." and not toks[i + 1].ws and (tok.lower + ".") in lexica.abbreviations:
            out.append(_merge(toks[i:i + 2], None, "ABB"))
            flags.append(initial[i])
            i += 2
            continue
        if tok.lower in lexica.abbreviations and ("." in tok.text or any(c.isupper() for c in tok.text)):
            out.append(replace(tok, tag="ABB"))
            flags.append(initial[i])
            i += 1
            continue
        # multi-token cities, longest first
        if tok.text[:1].isupper():
            matched = 0
            for k in range(min(_MAX_CITY_TOKENS, n - i), 0, -1):
                span = toks[i:i + k]
                if any(t.tag is not None for t in span) or not span[-1].text[:1].isupper():
                    continue
                key = " ".join(t.lower for t in span)
                if key in lexica.cities:
                    matched = k
                    break
            if matched:
                out.append(_merge(toks[i:i + matched], None, "LOC"))
                flags.append(initial[i])
                i += matched
                continue
        out.append(tok)
        flags.append(initial[i])
        i += 1

    cand = [
        t.tag is None and t.text[:1].isupper() and not flags[k]
        and not lexica.is_finance_word(t.text) and lexica.is_personal_name(_strip_clitic(t.text))
        for k, t in enumerate(out)
    ]
    if expand_adjacent:
        seeds = list(cand)
        for k, is_seed in enumerate(seeds):
            if not is_seed:
                continue
            for nb in (k - 1, k + 1):
                if 0 <= nb < len(out) and out[nb].capitalized and not flags[nb] \
                        and not lexica.is_finance_word(out[nb].text):
                    cand[nb] = True
    result: list[Token] = []
    k = 0
    while k < len(out):
        if cand[k]:
            j = k
            while j + 1 < len(out) and cand[j + 1] and out[j + 1].ws == " ":
                j += 1
            result.append(_merge(out[k:j + 1], None, "NAME"))
            k = j + 1
        else:
            result.append(out[k])
            k += 1
    return TaggedDocument(tuple(result))


def _strip_clitic(word: str) -> str:
    for clitic in ("'s", "’s"):
        if word.lower().endswith(clitic):
            return word[: -len(clitic)]
    return word


def strip_accents(text: str) -> str:
    norm = unicodedata.normalize("NFKD", text)
    return "".join(c for c in norm if not unicodedata.combining(c))


def scrub_for_ngrams(doc: TaggedDocument) -> str:
    """Lowercase plain tokens and drop the listed punctuation; tags stay intact."""
    parts = []
    for tok in doc.tokens:
        if tok.tag is not None:
            parts.append(tok.tag)
            continue
        word = strip_accents(tok.text.lower()).translate(_SCRUB_CHARS)
        if word:
            parts.append(word)
    return " ".join(parts)


def normalize_text(text: str, lexica: LexiconSet | None = None) -> TaggedDocument:
    """Numerics then entities: everything short of asset tagging."""
    return tag_entities(normalize_numerics(text), lexica or default_lexica())


def iter_plain(doc: TaggedDocument) -> Iterable[Token]:
    return (t for t in doc.tokens if t.tag is None)

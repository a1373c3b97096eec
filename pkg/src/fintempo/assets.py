"""Main-asset (TICKER) and other-asset (OTHER) tagging, plus referential nouns."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .normalize import (
    LexiconSet,
    TaggedDocument,
    Token,
    _merge,
    sentence_initial_mask,
    sentence_spans,
    tokenize,
)

REFERENTIAL_NOUNS = (
    "company", "enterprise", "stock", "investment", "opportunity", "share", "manufacturer",
)

# asset names that double as ordinary words; skipped when sentence-initial
_AMBIGUOUS_NAMES = {
    "target", "total", "gap", "delta", "shell", "visa", "snap", "zoom", "booking",
    "meta", "oracle", "apple", "amazon", "dell", "canon", "next",
}

_CLITICS = ("'s", "’s", "'", "’")


@dataclass(frozen=True)
class TickerMention:
    token_index: int
    kind: str  # "main" | "other"
    origin: str  # "literal" | "referential"
    antecedent: int | None = None


def _name_tokens(name: str) -> tuple[str, ...]:
    return tuple(t.text.lower() for t in tokenize(name))


def _surface_matches(tok: Token, target: str, last: bool) -> bool:
    if tok.tag is not None:
        return False
    word = tok.text.lower()
    if word == target:
        return True
    if not last:
        return False
    for clitic in _CLITICS:
        if word.endswith(clitic) and word[: -len(clitic)] == target:
            return True
    return word == target + "s" or word == target + "es"


def _match_at(tokens: Sequence[Token], i: int, name: tuple[str, ...]) -> int:
    k = len(name)
    if i + k > len(tokens):
        return 0
    for off, part in enumerate(name):
        tok = tokens[i + off]
        if off and tok.ws not in ("", " "):
            return 0
        if not _surface_matches(tok, part, off == k - 1):
            return 0
    return k


def tag_assets(doc: TaggedDocument, main_ticker: str, lexica: LexiconSet) -> TaggedDocument:
    """Replace the main asset with TICKER and other known assets with OTHER.

    The main ticker matches case-insensitively, with possessive and plural
    surface forms.  Other assets come from the finance lexicon and must be
    capitalized in the text.
    """
    if not main_ticker or not main_ticker.strip():
        raise ValueError("main_ticker must be non-empty")
    main = _name_tokens(main_ticker)
    main_key = " ".join(main)
    others = sorted(
        {n for n in (_name_tokens(a) for a in lexica.assets) if n and " ".join(n) != main_key},
        key=lambda n: (-len(n), n),
    )
    toks = doc.tokens
    initial = sentence_initial_mask(toks)
    out: list[Token] = []
    i = 0
    while i < len(toks):
        k = _match_at(toks, i, main)
        if k:
            out.append(_merge(toks[i:i + k], None, "TICKER", kind="main", origin="literal"))
            i += k
            continue
        tok = toks[i]
        if tok.tag is None and tok.text[:1].isupper():
            for name in others:
                k = _match_at(toks, i, name)
                if not k:
                    continue
                if k == 1 and initial[i] and name[0] in _AMBIGUOUS_NAMES:
                    continue
                out.append(_merge(toks[i:i + k], None, "OTHER", kind="other", origin="literal"))
                i += k
                break
            else:
                out.append(tok)
                i += 1
            continue
        out.append(tok)
        i += 1
    return replace(doc, tokens=tuple(out))


def resolve_referential(doc: TaggedDocument, nouns: Iterable[str] = REFERENTIAL_NOUNS) -> TaggedDocument:
    """Replace referential nouns by the tag of the last literal asset mention.

    The antecedent is searched in the same sentence first, then in the
    previous sentence only; otherwise the noun is left alone.  The
    determiner stays ("the stock" becomes "the TICKER").
    """
    nouns = {n.lower() for n in nouns}
    toks = list(doc.tokens)
    spans = doc.sentences()
    prev_last: int | None = None
    for s, e in spans:
        last_here: int | None = None
        for i in range(s, e):
            tok = toks[i]
            if tok.is_asset and tok.origin != "referential":
                last_here = i
            elif tok.tag is None and tok.text.lower() in nouns:
                ante = last_here if last_here is not None else prev_last
                if ante is not None:
                    src = toks[ante]
                    toks[i] = replace(
                        tok, tag=src.tag, kind=src.kind, origin="referential", antecedent=ante,
                    )
        prev_last = last_here
    return replace(doc, tokens=tuple(toks))


def ticker_mentions(doc: TaggedDocument) -> list[TickerMention]:
    return [
        TickerMention(i, t.kind or ("main" if t.tag == "TICKER" else "other"),
                      t.origin or "literal", t.antecedent)
        for i, t in enumerate(doc.tokens)
        if t.is_asset
    ]


def tag_asset_chain(doc: TaggedDocument, main_ticker: str, lexica: LexiconSet,
                    nouns: Iterable[str] = REFERENTIAL_NOUNS) -> TaggedDocument:
    return resolve_referential(tag_assets(doc, main_ticker, lexica), nouns)


__all__ = [
    "REFERENTIAL_NOUNS", "TickerMention", "tag_assets", "resolve_referential",
    "ticker_mentions", "tag_asset_chain", "sentence_spans",
]

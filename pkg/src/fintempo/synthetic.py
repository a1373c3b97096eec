"""Templated news corpus with a planted tense signal, for end-to-end checks.

Past items lean on past-tense statements about the main asset, Future
items on future-tense ones.  About a third of each class is phrased the
hard way (present-tense recaps, present-tense plans) that the tense rules
misread but word choice still gives away.  Other-asset distractors,
market filler and numbers appear in both classes.
"""
from __future__ import annotations

import random

from .corpus import Corpus, NewsItem
from .lingua import FUTURE, PAST

COMPANIES = (
    "Intel", "Boeing", "Airbus", "Ford", "Tesla", "Nvidia", "Pfizer", "Walmart", "Netflix", "Starbucks",
    "Nike", "Disney", "Siemens", "Toyota", "Samsung", "Qualcomm", "Cisco", "Oracle", "Adobe", "Exxon",
    "Chevron", "Moderna", "Uber", "Spotify", "Alibaba", "Sony", "Nokia", "Ericsson", "Unilever", "Nestle",
)

SOURCES = ("US News", "Reuters", "CNBC", "MarketWatch", "Bloomberg", "Motley Fool", "Forbes")

MONTHS = ("January", "February", "March", "April", "June", "July", "August", "September", "October", "November")

PAST_STRONG = (
    "{T} reported quarterly revenue of ${N} billion on {D}.",
    "Shares of {T} fell {P} after the earnings call.",
    "{T} posted a loss of ${N} million in {Y}.",
    "The company cut {N} jobs last month.",
    "{T} announced a buyback on {D}.",
    "{T} missed analyst estimates for the third quarter.",
    "Last week {T} closed {N} stores.",
    "{T} sold its cloud unit to {O} for ${N} billion.",
    "The stock dropped {P} and recovered in three days.",
    "{T} lost market share to {O} during {Y}.",
    "{T} paid a fine of ${N} million to settle the case.",
    "{T} delivered fewer vehicles than expected in {Y}.",
)
PAST_HARD = (
    "{T} shares are down {P} so far this year.",
    "{T} is trading lower after the weak report.",
    "{T} stock is {P} lower following the recall.",
    "The company remains under pressure after the lawsuit.",
    "{T} is still recovering from the disappointing quarter.",
    "Investors are unhappy after the sharp drop in margins.",
)
FUTURE_STRONG = (
    "{T} will report earnings on {D}.",
    "{T} is going to open {N} new stores in {Y}.",
    "Analysts say {T} will raise its dividend next quarter.",
    "{T} will launch a new product line in {Y}.",
    "The company will invest ${N} billion over the next five years.",
    "{T} is going to face tougher competition from {O}.",
    "The stock will likely rally if demand holds.",
    "{T} will hire {N} engineers next year.",
    "{T} will need more capital to fund the expansion.",
    "{T} is going to release its outlook on {D}.",
)
FUTURE_HARD = (
    "{T} plans to expand into Asia next year.",
    "{T} expects revenue growth of {P} in {Y}.",
    "The company aims to double production by {Y}.",
    "{T} is set to unveil its strategy next month.",
    "{T} hopes to close the deal before the end of the year.",
    "{T} intends to spin off its chip unit soon.",
)
DISTRACTORS = (
    "{O} said last week it fired its chief executive.",
    "{O} will cut prices next month.",
    "Markets were volatile on {D}.",
    "Investors will watch the central bank closely.",
    "The sector has struggled with supply problems.",
    "Many analysts expect volatility ahead.",
    "Rival {O} gained {P} in the same session.",
    "Bond yields rose to {P} on {D}.",
)
PAST_TITLES = (
    "What happened to {T} stock this week",
    "{T} earnings recap",
    "Why {T} shares tumbled",
    "{T} misses the mark",
)
FUTURE_TITLES = (
    "What to expect from {T} next year",
    "Pros and Cons to Buying {T} Stock",
    "{T} outlook for {Y}",
    "Is {T} ready for the next cycle",
)


def _fill(template: str, rng: random.Random, ticker: str) -> str:
    other = rng.choice([c for c in COMPANIES if c != ticker])
    return template.format(
        T=ticker, O=other, N=rng.randint(2, 900), P=f"{rng.randint(1, 40)}.{rng.randint(0, 9)}%",
        D=f"{rng.choice(MONTHS)} {rng.randint(1, 28)}", Y=rng.randint(2015, 2024),
    )


def _body(label: str, rng: random.Random, hard_share: float) -> list[str]:
    hard = rng.random() < hard_share
    if label == PAST:
        main = rng.sample(PAST_HARD, 2) + rng.sample(PAST_STRONG, rng.randint(0, 1)) if hard \
            else rng.sample(PAST_STRONG, rng.randint(2, 3))
        cross = rng.sample(FUTURE_STRONG, 1 if hard or rng.random() < 0.4 else 0)
    else:
        main = rng.sample(FUTURE_HARD, 2) + rng.sample(FUTURE_STRONG, rng.randint(0, 1)) if hard \
            else rng.sample(FUTURE_STRONG, rng.randint(2, 3))
        cross = rng.sample(PAST_STRONG, 1 if hard or rng.random() < 0.4 else 0)
    filler = rng.sample(DISTRACTORS, rng.randint(1, 2))
    sentences = main + cross + filler
    rng.shuffle(sentences)
    return sentences


def generate_corpus(n_past: int = 365, n_future: int = 235, seed: int = 7, hard_share: float = 0.35,
                    label_noise: float = 0.08) -> Corpus:
    """n_past + n_future items; the gold labels are exact, a label_noise share of bodies is swapped."""
    rng = random.Random(seed)
    labels = [PAST] * n_past + [FUTURE] * n_future
    rng.shuffle(labels)
    items = []
    for k, label in enumerate(labels):
        # the body of a noisy item is written for the other class
        style = label if rng.random() >= label_noise else (FUTURE if label == PAST else PAST)
        ticker = rng.choice(COMPANIES)
        titles = PAST_TITLES if style == PAST else FUTURE_TITLES
        if rng.random() < 0.4:
            titles = PAST_TITLES + FUTURE_TITLES
        title = _fill(rng.choice(titles), rng, ticker)
        body = " ".join(_fill(s, rng, ticker) for s in _body(style, rng, hard_share))
        items.append(NewsItem(f"syn-{k:04d}", f"{title}\n{body}", ticker, rng.choice(SOURCES), label))
    return Corpus(tuple(items))


if __name__ == "__main__":
    import argparse

    from .corpus import save_corpus

    ap = argparse.ArgumentParser(description="write the synthetic corpus as JSONL")
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=7)
    ns = ap.parse_args()
    save_corpus(generate_corpus(seed=ns.seed), ns.out)

import json

import pytest

from fintempo.corpus import Corpus, NewsItem
from fintempo.pipeline import Resources
from fintempo.synthetic import generate_corpus

BOEING_BEFORE = ("If they could get the planes, Airbus and Boeing are sold out through 2023. "
                 "On October 29, 2018, the stock dropped 6.6% and recovered in three days.")
BOEING_AFTER = ("If they could get the planes, OTHER and TICKER are sold out through DATE. "
                "On DATE, DATE, the TICKER dropped NUM and recovered in three days.")

# tagged text of the Intel example, with the @TAG@ wrapping reduced to bare tags upstream
INTEL_TAGGED = (
    "@TICKER@ is lagging on its competitors. Make no mistake, @TICKER@ is going to have to fix @TICKER@ "
    "and @TICKER@ will take many, many, many years, @NAME@ Mosesmann, a technology analyst at @NAME@ "
    "Securities, told CNBC in an interview. Couple that issue with an ongoing search to replace former "
    "chief executive officer @NAME@ Krzanich, and @TICKER@ has a lot on its plate heading into the last "
    "quarter of @DATE@ and beyond."
)

INTEL_TITLE = "Pros and Cons to Buying Intel Stock"
INTEL_CONTENT = (
    INTEL_TITLE + "\n"
    "Intel is lagging on its competitors. Can its stock price holding up under the pressure? "
    "\"Make no mistake, Intel is going to have to fix this and it will take many, many, many years.\", "
    "Hans Mosesmann, a technology analyst at Rosenblatt Securities, told CNBC in an interview. "
    "\"Their process technology disadvantage, which I think is broken, will take five, six, seven years. "
    "I don't think that business model works by them being behind by a year or two in terms of process "
    "technology.\"\n"
    "Couple that issue with an ongoing search to replace former chief executive officer Brian Krzanich, "
    "and Intel has a lot on its plate heading into the last quarter of 2019 and beyond."
)


@pytest.fixture(scope="session")
def resources():
    return Resources.default()


@pytest.fixture(scope="session")
def synthetic():
    return generate_corpus()


def make_corpus(labels, prefix="d", text="Intel reported results."):
    items = [NewsItem(f"{prefix}{i:04d}", f"{text} {i}", "Intel", "wire", lab) for i, lab in enumerate(labels)]
    return Corpus(tuple(items))


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r) + "\n")
    return path

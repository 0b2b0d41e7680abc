"""Tweet text normalization and category-echo filtering.

The normalization pipeline runs in a fixed order: strip URLs, @-mentions and
'#' characters (the tag body stays in the text as a word), casefold, split on
non-alphabetic characters, drop tokens shorter than two characters, drop
stopwords, then optionally Porter-stem. With stemming off the pipeline is
idempotent; the stemmer itself is not idempotent on its own output, so the
stemmed pipeline only guarantees determinism.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable

from . import porter

_URL_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*://\S+")
_MENTION_RE = re.compile(r"(?<!\w)@\w+")
_LETTER_RUN_RE = re.compile(r"[^\W\d_]+")
# camel-case and letter/digit boundaries: StayHome -> Stay, Home; covid19 -> covid, 19
_TAG_COMPONENT_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z][a-z]+|[A-Z]+|[a-z]+|\d+")

MIN_TOKEN_LEN = 2


@dataclass(frozen=True)
class NormalizationConfig:
    """Controls for :func:`normalize`. The stopword set is matched after
    casefolding and before stemming, so entries are plain lowercase words."""

    stopwords: frozenset[str] = frozenset()
    stem: bool = True


@dataclass(frozen=True)
class TokenizedDoc:
    """A tweet reduced to its normalized token sequence."""

    tweet_id: str
    tokens: tuple[str, ...]


def normalize(text: str, config: NormalizationConfig) -> list[str]:
    """Normalize raw tweet text to a token list. Token order is preserved;
    output tokens are lowercase, alphabetic, and at least two characters."""
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", "")
    text = text.casefold()
    tokens = [t for t in _LETTER_RUN_RE.findall(text) if len(t) >= MIN_TOKEN_LEN]
    tokens = [t for t in tokens if t not in config.stopwords]
    if config.stem:
        tokens = [porter.stem(t) for t in tokens]
    return tokens


def tokenize_tweets(tweets: Iterable, config: NormalizationConfig) -> list[TokenizedDoc]:
    """Normalize a corpus, one :class:`TokenizedDoc` per tweet, in order."""
    return [TokenizedDoc(t.id, tuple(normalize(t.text, config))) for t in tweets]


def split_tag(tag: str) -> list[str]:
    """Split a hashtag body at camel-case and letter/digit boundaries."""
    return _TAG_COMPONENT_RE.findall(tag)


def _echo_terms(taxonomy, exclusions: Iterable[str]) -> set[str]:
    terms: list[str] = []
    for category in taxonomy.categories:
        raw = category.raw_hashtags or tuple(sorted(category.hashtags))
        for tag in raw:
            body = tag.lstrip("#")
            terms.append(body)
            terms.extend(split_tag(body))
    for entry in exclusions:
        terms.append(entry)
        terms.extend(entry.split())
    out: set[str] = set()
    for term in terms:
        t = term.casefold().strip()
        if not t:
            continue
        out.add(t)
        out.add(porter.stem(t))
    return out


def filter_category_echo(
    tokens: Iterable[str],
    taxonomy,
    exclusions: Iterable[str] = (),
) -> list[str]:
    """Drop tokens that merely echo the category definitions: taxonomy
    hashtags, their camel-case / digit-boundary components, and caller-supplied
    exclusion terms (whitespace-split). A token is dropped when either it or
    its stem appears in the stemmed term set, so raw and pre-stemmed token
    streams both filter correctly."""
    banned = _echo_terms(taxonomy, exclusions)
    return [t for t in tokens if t not in banned and porter.stem(t) not in banned]


def load_wordlist(path) -> frozenset[str]:
    """Read one casefolded word per line; blank lines and '#' comments skipped."""
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            w = line.strip()
            if not w or w.startswith("#"):
                continue
            words.add(w.casefold())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The stopword list shipped with the package."""
    text = resources.files("tagtopics").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(
        w.casefold()
        for w in (line.strip() for line in text.splitlines())
        if w and not w.startswith("#")
    )

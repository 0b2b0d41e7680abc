"""Normalization pipeline and category-echo filtering."""

import string

import numpy as np
import pytest

from tagtopics.corpus import CategoryTaxonomy
from tagtopics.textprep import (
    NormalizationConfig,
    TokenizedDoc,
    default_stopwords,
    filter_category_echo,
    load_wordlist,
    normalize,
    split_tag,
    tokenize_tweets,
)

STOPWORDS = frozenset(
    "a an and at the is was who else from under over your our we".split()
)
STEMMED = NormalizationConfig(stopwords=STOPWORDS, stem=True)
RAW = NormalizationConfig(stopwords=STOPWORDS, stem=False)


class TestNormalize:
    def test_url_mention_and_stopwords(self):
        text = "Wash your hands! https://x.co @who"
        assert normalize(text, STEMMED) == ["wash", "hand"]

    def test_hashtag_body_stays_fused(self):
        assert normalize("#ToiletPaper shortage", STEMMED) == ["toiletpap", "shortag"]
        assert normalize("#ToiletPaper shortage", RAW) == ["toiletpaper", "shortage"]

    def test_digits_split_tokens(self):
        # splitting on non-alphabetic characters cuts at the digits
        assert normalize("#covid19 case counts", RAW) == ["covid", "case", "counts"]

    def test_short_tokens_dropped(self):
        # "I" and "m" fall to the length-2 floor, "5" to the alpha split
        assert normalize("I am 5 m on", RAW) == ["am", "on"]

    def test_mention_mid_text_and_email_kept(self):
        assert normalize("ping @someone about it", RAW) == ["ping", "about", "it"]
        # an address is not a mention; its parts survive as words
        assert normalize("mail me x@y.com", RAW) == ["mail", "me", "com"]

    def test_url_scheme_required(self):
        assert normalize("see https://a.b/c?d=1 now", RAW) == ["see", "now"]
        assert normalize("ratio 3://2 stays? no", RAW) == ["ratio", "stays", "no"]

    def test_empty_and_punctuation_only(self):
        assert normalize("", RAW) == []
        assert normalize("!!! ... 123", RAW) == []

    def test_idempotent_without_stemming(self):
        rng = np.random.default_rng(7)
        words = ["Reading", "CONTROL", "nobody", "w8ing", "#TagLike", "plain"]
        for _ in range(200):
            text = " ".join(rng.choice(words, size=rng.integers(1, 8)))
            once = normalize(text, RAW)
            again = normalize(" ".join(once), RAW)
            assert once == again

    def test_stemmed_pipeline_deterministic(self):
        text = "Universities closing gyms, hoarding continues #StaySafe"
        assert normalize(text, STEMMED) == normalize(text, STEMMED)

    def test_output_alphabet_invariant(self):
        rng = np.random.default_rng(11)
        alphabet = list("abcXYZ019 #@!.:/_-")
        for _ in range(300):
            text = "".join(rng.choice(alphabet, size=rng.integers(0, 40)))
            for config in (STEMMED, RAW):
                for token in normalize(text, config):
                    assert len(token) >= 2
                    assert set(token) <= set(string.ascii_lowercase)
                    assert token not in config.stopwords


class TestSplitTag:
    @pytest.mark.parametrize(
        "tag,parts",
        [
            ("StayHome", ["Stay", "Home"]),
            ("covid19", ["covid", "19"]),
            ("NYCSchools", ["NYC", "Schools"]),
            ("lowercase", ["lowercase"]),
            ("ALLCAPS", ["ALLCAPS"]),
            ("snake_case19", ["snake", "case", "19"]),
        ],
    )
    def test_boundaries(self, tag, parts):
        assert split_tag(tag) == parts


TAXONOMY = CategoryTaxonomy.from_mapping(
    {
        "Pandemic": ["#Covid19", "#StayHome"],
        "Economy": ["#JobLosses"],
    }
)


class TestFilterCategoryEcho:
    def test_drops_tag_bodies_and_components(self):
        tokens = ["covid", "hoard", "stay", "home", "jobs", "market"]
        kept = filter_category_echo(tokens, TAXONOMY)
        # "jobs" stems to "job", matching the JobLosses component
        assert kept == ["hoard", "market"]

    def test_stemmed_token_stream_filters_too(self):
        # tokens already stemmed upstream: losses -> loss
        kept = filter_category_echo(["loss", "rent"], TAXONOMY)
        assert kept == ["rent"]

    def test_exclusions_split_on_whitespace(self):
        kept = filter_category_echo(
            ["governor", "speech", "press"], TAXONOMY, exclusions={"governor press"}
        )
        assert kept == ["speech"]

    def test_no_terms_no_filtering(self):
        empty = CategoryTaxonomy.from_mapping({})
        assert filter_category_echo(["any", "words"], empty) == ["any", "words"]


class TestTokenizeTweets:
    def test_order_and_ids(self):
        class FakeTweet:
            def __init__(self, id, text):
                self.id = id
                self.text = text

        docs = tokenize_tweets(
            [FakeTweet("a", "first tweet"), FakeTweet("b", "second")], RAW
        )
        assert docs == [
            TokenizedDoc("a", ("first", "tweet")),
            TokenizedDoc("b", ("second",)),
        ]


class TestWordlists:
    def test_load_wordlist(self, tmp_path):
        p = tmp_path / "words.txt"
        p.write_text("# comment\nAlpha\n\nbeta\n", encoding="utf-8")
        assert load_wordlist(p) == frozenset({"alpha", "beta"})

    def test_default_stopwords_ship_with_package(self):
        words = default_stopwords()
        assert {"the", "and", "your"} <= words
        assert all(w == w.casefold() for w in words)

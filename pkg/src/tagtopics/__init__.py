"""Hashtag-category analytics and seeded topic modeling for tweet corpora."""

from .corpus import (
    Category,
    CategoryTaxonomy,
    TrendSeries,
    Tweet,
    UNCATEGORIZED,
    assign_categories,
    category_membership,
    extract_hashtags,
    load_corpus,
    load_taxonomy,
    top_hashtags,
    trend_series,
)
from .errors import DataError
from .lexstats import (
    CollocationStat,
    GroupLexicon,
    bigram_collocations,
    build_lexicon,
    chi2_2x2,
    common_words,
    distinctive_words,
    tfidf,
)
from .porter import stem
from .sentiment import (
    NON_NEUTRAL,
    SentimentDistribution,
    SentimentLabel,
    category_distribution,
    default_valence_lexicon,
    ingest_scores,
    load_valence_lexicon,
    score_lexicon,
)
from .syntax import (
    DependencyTree,
    ParseNode,
    RelationConfig,
    VerbNounTable,
    VerbProfile,
    distinctive_verbs,
    load_parses,
    serialize_parses,
    verb_noun_pairs,
)
from .textprep import (
    NormalizationConfig,
    TokenizedDoc,
    default_stopwords,
    filter_category_echo,
    load_wordlist,
    normalize,
    tokenize_tweets,
)
from .topics import (
    EvaluationReport,
    SeededLdaModel,
    SeedSpec,
    UNASSIGNED,
    classify,
    classify_all,
    derive_gold,
    doc_topic_distribution,
    evaluate,
    load_model,
    save_model,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Category",
    "CategoryTaxonomy",
    "CollocationStat",
    "DataError",
    "DependencyTree",
    "EvaluationReport",
    "GroupLexicon",
    "NON_NEUTRAL",
    "NormalizationConfig",
    "ParseNode",
    "RelationConfig",
    "SeedSpec",
    "SeededLdaModel",
    "SentimentDistribution",
    "SentimentLabel",
    "TokenizedDoc",
    "TrendSeries",
    "Tweet",
    "UNASSIGNED",
    "UNCATEGORIZED",
    "VerbNounTable",
    "VerbProfile",
    "assign_categories",
    "bigram_collocations",
    "build_lexicon",
    "category_distribution",
    "category_membership",
    "chi2_2x2",
    "classify",
    "classify_all",
    "common_words",
    "default_stopwords",
    "default_valence_lexicon",
    "derive_gold",
    "distinctive_verbs",
    "distinctive_words",
    "doc_topic_distribution",
    "evaluate",
    "extract_hashtags",
    "filter_category_echo",
    "ingest_scores",
    "load_corpus",
    "load_model",
    "load_parses",
    "load_taxonomy",
    "load_valence_lexicon",
    "load_wordlist",
    "normalize",
    "save_model",
    "score_lexicon",
    "serialize_parses",
    "stem",
    "tfidf",
    "tokenize_tweets",
    "top_hashtags",
    "train",
    "trend_series",
    "verb_noun_pairs",
]

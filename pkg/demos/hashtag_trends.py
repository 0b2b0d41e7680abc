"""
Hashtag trends over a tiny tweet log
====================================

Walks the first stage of the toolkit: read a JSON Lines tweet log, match
hashtags against a category taxonomy, and turn the matches into daily trend
series and a hashtag leaderboard.
"""

import json
import tempfile
from pathlib import Path

from tagtopics import (
    category_membership,
    load_corpus,
    load_taxonomy,
    top_hashtags,
    trend_series,
)

# A week of made-up tweets about a city street fair. Each record needs an id,
# a created_at timestamp, and the raw text; hashtags live inside the text.
RECORDS = [
    {"id": "f01", "created_at": "2023-09-18T08:10:00Z",
     "text": "Setup crews rolling in #streetfair"},
    {"id": "f02", "created_at": "2023-09-18T12:00:00Z",
     "text": "Band lineup posted! #LiveStage #streetfair"},
    {"id": "f03", "created_at": "2023-09-19T09:30:00Z",
     "text": "Food trucks confirmed for both days #TasteTown"},
    {"id": "f04", "created_at": "2023-09-19T17:45:00Z",
     "text": "Sound check at the main stage #livestage"},
    {"id": "f05", "created_at": "2023-09-20T11:20:00Z",
     "text": "Rain date announced just in case #streetfair #TasteTown"},
    {"id": "f06", "created_at": "2023-09-20T19:00:00Z",
     "text": "Who is playing Friday night? #LiveStage"},
    {"id": "f07", "created_at": "2023-09-21T10:05:00Z",
     "text": "Volunteer signups close tonight"},
    {"id": "f08", "created_at": "2023-09-21T15:30:00Z",
     "text": "Dumpling stand returns this year #tastetown"},
]

# The taxonomy maps a category name to the hashtags that signal it. Matching
# is case-insensitive, so #LiveStage and #livestage land in the same bucket.
TAXONOMY = {
    "Fair logistics": ["#streetfair"],
    "Music": ["#LiveStage"],
    "Food": ["#TasteTown"],
}

with tempfile.TemporaryDirectory() as tmp:
    corpus_path = Path(tmp) / "fair.jsonl"
    corpus_path.write_text(
        "\n".join(json.dumps(r) for r in RECORDS) + "\n", encoding="utf-8"
    )
    taxonomy_path = Path(tmp) / "taxonomy.json"
    taxonomy_path.write_text(json.dumps(TAXONOMY), encoding="utf-8")

    tweets = load_corpus(corpus_path)
    taxonomy = load_taxonomy(taxonomy_path)

print(f"loaded {len(tweets)} tweets, {len(taxonomy.categories)} categories")

# Which categories did each tweet land in? A tweet can match several, and a
# tweet with no recognized hashtag (f07 here) matches none.
membership = category_membership(tweets, taxonomy)
for tweet in tweets:
    cats = sorted(membership.get(tweet.id, ()))
    print(f"  {tweet.id}: {', '.join(cats) if cats else '(uncategorized)'}")

# Daily counts per category across the whole corpus span. Days with no
# activity are reported as explicit zeroes, so every series has equal length.
print("\ndaily trend series")
for series in trend_series(tweets, taxonomy):
    counts = " ".join(str(c) for _, c in series.points)
    print(f"  {series.category:15s} {counts}")

# The leaderboard counts each hashtag once per tweet that uses it.
print("\ntop hashtags")
for tag, count in top_hashtags(tweets, n=5):
    print(f"  #{tag:12s} {count}")

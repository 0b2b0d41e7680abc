"""
Per-category sentiment profiles with exact shares
=================================================

Labels each tweet by the mean valence of its lexicon hits, then aggregates
the labels per category with the neutral class excluded. The remaining four
shares are exact fractions that always sum to 100.
"""

from fractions import Fraction

from tagtopics import (
    NON_NEUTRAL,
    NormalizationConfig,
    category_distribution,
    default_stopwords,
    default_valence_lexicon,
    normalize,
    score_lexicon,
)

TWEETS = {
    "p01": ("Phones", "I love the new camera, photos look amazing"),
    "p02": ("Phones", "Battery life is great, easily two days"),
    "p03": ("Phones", "The update broke notifications, this is terrible"),
    "p04": ("Phones", "Screen arrived cracked, awful packaging"),
    "p05": ("Phones", "It is a phone, it makes calls"),
    "l01": ("Laptops", "Keyboard feels wonderful, best typing in years"),
    "l02": ("Laptops", "Happy with the display, colors are excellent"),
    "l03": ("Laptops", "Fan noise is bad under any real load"),
    "l04": ("Laptops", "Shipping took three weeks, disappointed but it works"),
}

# Scoring matches surface words against the valence lexicon, so stemming is
# off; stopword removal still applies.
config = NormalizationConfig(stopwords=default_stopwords(), stem=False)
lexicon = default_valence_lexicon()
print(f"valence lexicon: {len(lexicon)} entries")

labels = {}
membership = {}
for tweet_id, (category, text) in TWEETS.items():
    tokens = normalize(text, config)
    labels[tweet_id] = score_lexicon(tokens, lexicon)
    membership[tweet_id] = [category]
    print(f"  {tweet_id}: {labels[tweet_id].value}")

# Neutral tweets (p05 above) drop out before the shares are computed; the
# four non-neutral counts are renormalized as exact rationals.
print("\nnon-neutral shares per category")
for dist in category_distribution(labels, membership, ["Phones", "Laptops"]):
    if dist.insufficient_data:
        print(f"  {dist.category}: no non-neutral tweets")
        continue
    parts = []
    for label in NON_NEUTRAL:
        share = dist.shares[label]
        parts.append(f"{label.value}={share} ({float(share):.1f}%)")
    print(f"  {dist.category}: " + ", ".join(parts))
    assert sum(dist.shares.values()) == Fraction(100)
print("\nshares sum to exactly 100 in every category")

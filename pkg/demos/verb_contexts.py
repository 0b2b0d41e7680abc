"""
Verbs and the nouns they govern
===============================

Reads a handful of dependency parses in the six-column tab-separated block
format, then asks which nouns each verb governs (subjects, objects, and
objects reached through a preposition) and which verbs are distinctive of
each group of tweets.
"""

import tempfile
from pathlib import Path

from tagtopics import RelationConfig, distinctive_verbs, load_parses, verb_noun_pairs

# One block per sentence: a tweet_id comment, then ID FORM LEMMA UPOS HEAD
# DEPREL rows, blank line after each block. Pronoun arguments show up in the
# parse but never in the extraction tables (the POS filter wants nouns).
PARSES = """\
# tweet_id = n01
1\tCommuters\tcommuter\tNOUN\t2\tnsubj
2\tcrowd\tcrowd\tVERB\t0\troot
3\tonto\tonto\tADP\t2\tprep
4\tplatforms\tplatform\tNOUN\t3\tpobj

# tweet_id = n02
1\tThey\tthey\tPRON\t2\tnsubj
2\tdelay\tdelay\tVERB\t0\troot
3\ttrains\ttrain\tNOUN\t2\tdobj

# tweet_id = n03
1\tCrews\tcrew\tNOUN\t2\tnsubj
2\trepair\trepair\tVERB\t0\troot
3\ttracks\ttrack\tNOUN\t2\tdobj

# tweet_id = n04
1\tStorms\tstorm\tNOUN\t2\tnsubj
2\tdelay\tdelay\tVERB\t0\troot
3\tflights\tflight\tNOUN\t2\tdobj
4\tat\tat\tADP\t2\tprep
5\tairports\tairport\tNOUN\t4\tpobj

"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "transit.conllu"
    path.write_text(PARSES, encoding="utf-8")
    trees = load_parses(path)

print(f"parsed {len(trees)} sentences")

# "delay" appears twice: once with a pronoun subject (ignored) and a noun
# object, once with a noun subject, object, and a prepositional object.
for verb in ("delay", "crowd", "repair"):
    table = verb_noun_pairs(trees, verb)
    listing = ", ".join(f"{noun}({count})" for noun, count in table.nouns)
    print(f"  {verb:8s} -> {listing if listing else '(none)'}")

# The same extraction under a Universal Dependencies style parse would take
# obliques directly instead of walking preposition -> object; with these
# trees that path simply finds fewer nouns.
ud = RelationConfig.universal_dependencies()
print("\nUD-style relations on the same trees")
for verb in ("delay", "crowd"):
    table = verb_noun_pairs(trees, verb, ud)
    listing = ", ".join(f"{noun}({count})" for noun, count in table.nouns)
    print(f"  {verb:8s} -> {listing if listing else '(none)'}")

# Group the sentences and ask which verbs are distinctive: a verb used by
# every group scores zero and disappears, the rest rank by in-group count.
groups = {
    "Rail": [t for t in trees if t.tweet_id in ("n01", "n02", "n03")],
    "Air": [t for t in trees if t.tweet_id == "n04"],
}
print("\ndistinctive verbs per group ('delay' is shared, so it drops out)")
for profile in distinctive_verbs(groups, n=3):
    listing = ", ".join(f"{lemma}({count})" for lemma, count, _ in profile.verbs)
    print(f"  {profile.category:5s} {listing if listing else '(none)'}")

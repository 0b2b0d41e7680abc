"""Command-line interface.

One subcommand per analysis stage, all writing deterministic artifacts into
the output directory: trends.csv, words.csv, bigrams.csv, sentiment.csv,
verbs.csv, pairs.csv, model.json, assignments.csv, report.json, summary.json.
Options come from built-in defaults, then a JSON config file (--config), then
explicit flags, later layers winning. Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import (
    corpus as corpus_mod,
    lexstats,
    sentiment as sentiment_mod,
    syntax as syntax_mod,
    textprep,
    topics as topics_mod,
)
from .errors import DataError

logger = logging.getLogger(__name__)

DEFAULT_RNG_SEED = 12345


class UsageError(Exception):
    """Bad invocation (unknown flag, malformed config). Exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; this interface reserves 2 for data
    # errors and uses 1 for usage problems.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Every knob the subcommands read. Field names double as config-file
    keys and (dashed) flag names."""

    corpus: str | None = None
    format: str = "jsonl"
    taxonomy: str | None = None
    stopwords: str | None = None  # None selects the packaged list
    exclusions: str | None = None
    lexicon: str | None = None  # None selects the packaged valence lexicon
    parses: str | None = None
    scores: str | None = None
    seed_file: str | None = None
    predictions: str | None = None
    out: str = "out"
    stem: bool = True
    alpha: float = topics_mod.DEFAULT_ALPHA
    beta: float = topics_mod.DEFAULT_BETA
    mu: float = topics_mod.DEFAULT_MU
    iters: int = topics_mod.DEFAULT_ITERATIONS
    unseeded: int = topics_mod.DEFAULT_UNSEEDED
    rng_seed: int = DEFAULT_RNG_SEED
    top_n: int = 10
    min_count: int = 5
    min_groups: int = 2
    gold_policy: str = "rarest"

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)


def _load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _merge_config(args: argparse.Namespace) -> RunConfig:
    layers = RunConfig().to_dict()
    if args.config is not None:
        layers.update(_load_config_file(args.config))
    for name in list(layers):
        value = getattr(args, name, None)
        if value is not None:
            layers[name] = value
    return RunConfig.from_dict(layers)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tagtopics", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--corpus", help="tweet corpus file")
        p.add_argument("--format", choices=("jsonl", "csv"), help="corpus format")
        p.add_argument("--taxonomy", help="category taxonomy JSON")
        p.add_argument("--stopwords", help="stopword list file")
        p.add_argument("--exclusions", help="extra echo-filter terms, one per line")
        p.add_argument("--lexicon", help="valence lexicon CSV")
        p.add_argument("--parses", help="dependency parses file")
        p.add_argument("--scores", help="external sentiment scores (JSON lines)")
        p.add_argument("--seed-file", dest="seed_file", help="topic seed words JSON")
        p.add_argument("--predictions", help="assignments CSV to evaluate")
        p.add_argument("--out", help="output directory")
        p.add_argument("--stem", action=argparse.BooleanOptionalAction,
                       help="Porter-stem normalized tokens")
        p.add_argument("--alpha", type=float, help="document-topic prior")
        p.add_argument("--beta", type=float, help="topic-word prior")
        p.add_argument("--mu", type=float, help="extra prior mass on seed words")
        p.add_argument("--iters", type=int, help="Gibbs sweeps")
        p.add_argument("--unseeded", type=int, help="number of unseeded topics")
        p.add_argument("--rng-seed", dest="rng_seed", type=int, help="RNG seed")
        p.add_argument("--top-n", dest="top_n", type=int, help="rows per ranking")
        p.add_argument("--min-count", dest="min_count", type=int,
                       help="minimum bigram count")
        p.add_argument("--min-groups", dest="min_groups", type=int,
                       help="groups needed for a common word")
        p.add_argument("--gold-policy", dest="gold_policy",
                       choices=("rarest", "priority", "exclude_multi"),
                       help="multi-category gold label policy")
        return p

    add("trends", "daily tweet counts per category")
    add("words", "common and distinctive words per category")
    add("bigrams", "chi-square bigram collocations per category")
    add("sentiment", "non-neutral sentiment shares per category")
    add("verbs", "distinctive verbs per category")
    pairs = add("pairs", "nouns governed by selected verbs")
    pairs.add_argument("--verb", action="append", dest="verbs", metavar="LEMMA",
                       help="verb lemma to profile (repeatable)")
    pairs.add_argument("--rel-scheme", dest="rel_scheme",
                       choices=("default", "ud"),
                       help="dependency relation scheme")
    pairs.add_argument("--subtree", action="store_true",
                       help="collect nouns from the whole verb subtree")
    add("topics-train", "train the seeded topic model")
    add("topics-classify", "label documents with the trained model")
    add("topics-eval", "score assignments against hashtag-derived gold labels")
    add("report", "summarize artifacts already in the output directory")
    return parser


# ---------------------------------------------------------------------------
# shared pipeline pieces


def _require(cfg: RunConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise DataError(f"missing required input: --{name.replace('_', '-')}")


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _norm_config(cfg: RunConfig) -> textprep.NormalizationConfig:
    stopwords = (
        textprep.load_wordlist(cfg.stopwords)
        if cfg.stopwords is not None
        else textprep.default_stopwords()
    )
    return textprep.NormalizationConfig(stopwords=stopwords, stem=cfg.stem)


def _load_corpus_and_taxonomy(cfg: RunConfig):
    _require(cfg, "corpus", "taxonomy")
    tweets = corpus_mod.load_corpus(cfg.corpus, cfg.format)
    taxonomy = corpus_mod.load_taxonomy(cfg.taxonomy)
    return tweets, taxonomy


def _exclusion_terms(cfg: RunConfig) -> frozenset[str]:
    if cfg.exclusions is None:
        return frozenset()
    return textprep.load_wordlist(cfg.exclusions)


def _category_docs(tweets, taxonomy, cfg: RunConfig) -> dict[str, list[textprep.TokenizedDoc]]:
    """Normalized, echo-filtered docs grouped by category, taxonomy order.
    Multi-category tweets appear in every matching group."""
    norm = _norm_config(cfg)
    exclusions = _exclusion_terms(cfg)
    order = {name: i for i, name in enumerate(taxonomy.names())}
    groups: dict[str, list[textprep.TokenizedDoc]] = {name: [] for name in order}
    for tweet in tweets:
        cats = corpus_mod.assign_categories(tweet, taxonomy)
        if not cats:
            continue
        tokens = textprep.normalize(tweet.text, norm)
        tokens = textprep.filter_category_echo(tokens, taxonomy, exclusions)
        doc = textprep.TokenizedDoc(tweet.id, tuple(tokens))
        for cat in sorted(cats, key=order.get):
            groups[cat].append(doc)
    return groups


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _summary(line: str) -> None:
    print(line)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_trends(cfg: RunConfig) -> int:
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    series = corpus_mod.trend_series(tweets, taxonomy)
    out = _out_dir(cfg)
    rows = [
        (s.category, day.isoformat(), count)
        for s in series
        for day, count in s.points
    ]
    _write_csv(out / "trends.csv", ["category", "date", "count"], rows)
    _summary(f"trends: {len(rows)} rows over {len(series)} series -> {out / 'trends.csv'}")
    return 0


def _cmd_words(cfg: RunConfig) -> int:
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    groups = _category_docs(tweets, taxonomy, cfg)
    lexicons = [
        lexstats.build_lexicon(docs, category=name) for name, docs in groups.items()
    ]
    common = (
        lexstats.common_words(lexicons, min_groups=cfg.min_groups, n=cfg.top_n)
        if len(lexicons) >= 2
        else []
    )
    common_set = [token for token, _, _ in common]
    rows = [
        ("(common)", rank, token, freq, group_count)
        for rank, (token, group_count, freq) in enumerate(common, start=1)
    ]
    for lex in lexicons:
        distinct = lexstats.distinctive_words(lex, common_set, n=cfg.top_n)
        rows.extend(
            (lex.category, rank, token, count, count)
            for rank, (token, count) in enumerate(distinct, start=1)
        )
    out = _out_dir(cfg)
    _write_csv(out / "words.csv", ["category", "rank", "term", "count", "score"], rows)
    _summary(f"words: {len(rows)} rows -> {out / 'words.csv'}")
    return 0


def _cmd_bigrams(cfg: RunConfig) -> int:
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    groups = _category_docs(tweets, taxonomy, cfg)
    rows = []
    for name, docs in groups.items():
        lex = lexstats.build_lexicon(docs, category=name)
        stats = lexstats.bigram_collocations(lex, min_count=cfg.min_count, n=cfg.top_n)
        rows.extend(
            (name, rank, " ".join(s.bigram), s.observed[0][0], repr(s.chi2))
            for rank, s in enumerate(stats, start=1)
        )
    out = _out_dir(cfg)
    _write_csv(out / "bigrams.csv", ["category", "rank", "term", "count", "score"], rows)
    _summary(f"bigrams: {len(rows)} rows -> {out / 'bigrams.csv'}")
    return 0


def _cmd_sentiment(cfg: RunConfig) -> int:
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    membership = corpus_mod.category_membership(tweets, taxonomy)
    if cfg.scores is not None:
        labels = sentiment_mod.ingest_scores(cfg.scores)
    else:
        lexicon = (
            sentiment_mod.load_valence_lexicon(cfg.lexicon)
            if cfg.lexicon is not None
            else sentiment_mod.default_valence_lexicon()
        )
        # scoring matches surface words, so stemming stays off here
        norm = textprep.NormalizationConfig(
            stopwords=_norm_config(cfg).stopwords, stem=False
        )
        labels = {
            t.id: sentiment_mod.score_lexicon(textprep.normalize(t.text, norm), lexicon)
            for t in tweets
        }
    dists = sentiment_mod.category_distribution(
        labels, membership, categories=taxonomy.names()
    )
    rows = []
    for dist in dists:
        for label in sentiment_mod.NON_NEUTRAL:
            share = dist.shares[label]
            rows.append((dist.category, label.value, f"{float(share):.6f}"))
    out = _out_dir(cfg)
    _write_csv(out / "sentiment.csv", ["category", "label", "percentage"], rows)
    flagged = sum(1 for d in dists if d.insufficient_data)
    note = f" ({flagged} categories lacked non-neutral tweets)" if flagged else ""
    _summary(f"sentiment: {len(rows)} rows -> {out / 'sentiment.csv'}{note}")
    return 0


def _grouped_trees(cfg: RunConfig):
    _require(cfg, "parses")
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    trees = syntax_mod.load_parses(cfg.parses)
    membership = corpus_mod.category_membership(tweets, taxonomy)
    groups: dict[str, list[syntax_mod.DependencyTree]] = {
        name: [] for name in taxonomy.names()
    }
    for tree in trees:
        for cat in membership.get(tree.tweet_id, ()):
            groups[cat].append(tree)
    for name in groups:
        groups[name].sort(key=lambda t: t.tweet_id)
    return groups


def _cmd_verbs(cfg: RunConfig) -> int:
    groups = _grouped_trees(cfg)
    profiles = syntax_mod.distinctive_verbs(groups, n=cfg.top_n)
    rows = [
        (p.category, rank, lemma, count, repr(score))
        for p in profiles
        for rank, (lemma, count, score) in enumerate(p.verbs, start=1)
    ]
    out = _out_dir(cfg)
    _write_csv(out / "verbs.csv", ["category", "rank", "term", "count", "score"], rows)
    _summary(f"verbs: {len(rows)} rows -> {out / 'verbs.csv'}")
    return 0


def _cmd_pairs(cfg: RunConfig, verbs: list[str] | None, rel_scheme: str | None,
               subtree: bool) -> int:
    groups = _grouped_trees(cfg)
    if rel_scheme == "ud":
        rel_config = syntax_mod.RelationConfig.universal_dependencies(
            whole_subtree=subtree
        )
    else:
        rel_config = syntax_mod.RelationConfig(whole_subtree=subtree)
    rows = []
    for name, trees in groups.items():
        if verbs:
            targets = [v.casefold() for v in verbs]
        else:
            profiles = syntax_mod.distinctive_verbs({name: trees}, n=5)
            targets = [lemma for lemma, _, _ in profiles[0].verbs] if profiles else []
        for verb in targets:
            table = syntax_mod.verb_noun_pairs(trees, verb, rel_config)
            rows.extend(
                (name, verb, noun, count) for noun, count in table.nouns
            )
    out = _out_dir(cfg)
    _write_csv(out / "pairs.csv", ["category", "verb", "noun", "count"], rows)
    _summary(f"pairs: {len(rows)} rows -> {out / 'pairs.csv'}")
    return 0


def _normalized_seeds(cfg: RunConfig, norm: textprep.NormalizationConfig) -> topics_mod.SeedSpec:
    _require(cfg, "seed_file")
    raw = topics_mod.SeedSpec.from_json_file(cfg.seed_file, unseeded=cfg.unseeded)
    seeded = []
    for name, words in raw.seeded:
        normalized: set[str] = set()
        for word in sorted(words):
            tokens = textprep.normalize(word, norm)
            if not tokens:
                logger.warning("seed word %r for %r normalizes to nothing", word, name)
            normalized.update(tokens)
        if not normalized:
            raise DataError(f"no seed words survive normalization for {name!r}")
        seeded.append((name, frozenset(normalized)))
    return topics_mod.SeedSpec(seeded=tuple(seeded), unseeded=raw.unseeded)


def _cmd_topics_train(cfg: RunConfig) -> int:
    _require(cfg, "corpus")
    tweets = corpus_mod.load_corpus(cfg.corpus, cfg.format)
    norm = _norm_config(cfg)
    seeds = _normalized_seeds(cfg, norm)
    docs = textprep.tokenize_tweets(tweets, norm)
    model = topics_mod.train(
        docs,
        seeds,
        alpha=cfg.alpha,
        beta=cfg.beta,
        mu=cfg.mu,
        iterations=cfg.iters,
        rng_seed=cfg.rng_seed,
    )
    out = _out_dir(cfg)
    topics_mod.save_model(model, out / "model.json")
    _summary(
        f"topics-train: {len(model.doc_ids)} docs, vocabulary {model.vocab_size}, "
        f"{model.num_topics} topics, {cfg.iters} sweeps -> {out / 'model.json'}"
    )
    return 0


def _cmd_topics_classify(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    model_path = out / "model.json"
    model = topics_mod.load_model(model_path)
    rng = np.random.default_rng(cfg.rng_seed)
    labels = topics_mod.classify_all(model, rng)
    rows = list(labels.items())
    _write_csv(out / "assignments.csv", ["id", "category"], rows)
    _summary(f"topics-classify: {len(rows)} docs -> {out / 'assignments.csv'}")
    return 0


def _read_assignments(path) -> dict[str, str]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or {"id", "category"} - set(reader.fieldnames):
            raise DataError(f"{path}: expected columns id,category")
        out: dict[str, str] = {}
        for row in reader:
            out[row["id"]] = row["category"]
    return out


def _cmd_topics_eval(cfg: RunConfig) -> int:
    tweets, taxonomy = _load_corpus_and_taxonomy(cfg)
    out = _out_dir(cfg)
    pred_path = Path(cfg.predictions) if cfg.predictions else out / "assignments.csv"
    predictions = _read_assignments(pred_path)
    membership = corpus_mod.category_membership(tweets, taxonomy)
    gold = topics_mod.derive_gold(
        membership, policy=cfg.gold_policy, categories=taxonomy.names()
    )
    shared = predictions.keys() & gold.keys()
    if not shared:
        raise DataError("no documents shared between predictions and gold labels")
    report = topics_mod.evaluate(
        {k: predictions[k] for k in shared}, {k: gold[k] for k in shared}
    )
    payload = {
        "policy": cfg.gold_policy,
        "evaluated": len(shared),
        "predictions_only": len(predictions.keys() - gold.keys()),
        "gold_only": len(gold.keys() - predictions.keys()),
    }
    payload.update(report.to_dict())
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")
    _summary(
        f"topics-eval: accuracy {report.accuracy:.4f} macro-F1 {report.macro_f1:.4f} "
        f"on {len(shared)} docs -> {out / 'report.json'}"
    )
    return 0


def _csv_rows(path: Path) -> int:
    with open(path, encoding="utf-8", newline="") as fh:
        return max(0, sum(1 for _ in csv.reader(fh)) - 1)


def _cmd_report(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    summary: dict[str, object] = {}
    for name in ("trends.csv", "words.csv", "bigrams.csv", "sentiment.csv",
                 "verbs.csv", "pairs.csv", "assignments.csv"):
        path = out / name
        if path.exists():
            summary[name] = {"rows": _csv_rows(path)}
    model_path = out / "model.json"
    if model_path.exists():
        model = topics_mod.load_model(model_path)
        summary["model.json"] = {
            "documents": len(model.doc_ids),
            "vocabulary": model.vocab_size,
            "topics": model.num_topics,
            "iterations": model.iterations,
        }
    report_path = out / "report.json"
    if report_path.exists():
        with open(report_path, encoding="utf-8") as fh:
            report = json.load(fh)
        summary["report.json"] = {
            "accuracy": report.get("accuracy"),
            "macro_f1": report.get("macro", {}).get("f1"),
            "evaluated": report.get("evaluated"),
        }
    if not summary:
        raise DataError(f"no artifacts found in {out}")
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=False)
        fh.write("\n")
    _summary(f"report: {len(summary)} artifacts summarized -> {out / 'summary.json'}")
    return 0


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.command == "trends":
            return _cmd_trends(cfg)
        if args.command == "words":
            return _cmd_words(cfg)
        if args.command == "bigrams":
            return _cmd_bigrams(cfg)
        if args.command == "sentiment":
            return _cmd_sentiment(cfg)
        if args.command == "verbs":
            return _cmd_verbs(cfg)
        if args.command == "pairs":
            return _cmd_pairs(cfg, args.verbs, args.rel_scheme, args.subtree)
        if args.command == "topics-train":
            return _cmd_topics_train(cfg)
        if args.command == "topics-classify":
            return _cmd_topics_classify(cfg)
        if args.command == "topics-eval":
            return _cmd_topics_eval(cfg)
        if args.command == "report":
            return _cmd_report(cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"tagtopics: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"tagtopics: data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

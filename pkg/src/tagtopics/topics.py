"""Seeded topic modeling by collapsed Gibbs sampling, with classification
and evaluation.

Each category contributes one seeded topic whose seed words get extra prior
mass mu on top of the symmetric beta; a configurable number of unseeded
topics absorbs everything else. Training is single-threaded and fully
deterministic for a given rng seed: initialization draws and one uniform per
token per sweep all come from the same PCG64 stream, in document order.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._gibbs import run_sweep
from .errors import DataError
from .textprep import TokenizedDoc

logger = logging.getLogger(__name__)

UNASSIGNED = "unassigned"

DEFAULT_ALPHA = 0.01
DEFAULT_BETA = 0.0001
DEFAULT_MU = 0.5
DEFAULT_ITERATIONS = 2000
DEFAULT_UNSEEDED = 2

_FORMAT = "tagtopics-lda"
_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SeedSpec:
    """Ordered seeded topics as (category name, seed word set) pairs, plus
    the number of trailing unseeded topics."""

    seeded: tuple[tuple[str, frozenset[str]], ...]
    unseeded: int = DEFAULT_UNSEEDED

    def __post_init__(self) -> None:
        names = [name for name, _ in self.seeded]
        if len(names) != len(set(names)):
            raise ValueError("seeded topic names must be unique")
        for name, words in self.seeded:
            if not words:
                raise ValueError(f"seed set for {name!r} is empty")
        if self.unseeded < 0:
            raise ValueError("unseeded topic count must be non-negative")
        if not self.seeded and self.unseeded == 0:
            raise ValueError("need at least one topic")

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[str, Iterable[str]], unseeded: int = DEFAULT_UNSEEDED
    ) -> "SeedSpec":
        seeded = tuple(
            (str(name), frozenset(str(w).casefold() for w in words))
            for name, words in mapping.items()
        )
        return cls(seeded=seeded, unseeded=unseeded)

    @classmethod
    def from_json_file(cls, path, unseeded: int = DEFAULT_UNSEEDED) -> "SeedSpec":
        with open(path, encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: invalid seed JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DataError(f"{path}: seed file must map category -> word list")
        for name, words in obj.items():
            if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
                raise DataError(f"{path}: seeds for {name!r} must be a list of strings")
        return cls.from_mapping(obj, unseeded=unseeded)


@dataclass
class SeededLdaModel:
    vocabulary: tuple[str, ...]  # word id -> token
    doc_ids: tuple[str, ...]
    dropped_doc_ids: tuple[str, ...]
    categories: tuple[str, ...]  # seeded topic index -> category name
    num_unseeded: int
    alpha: float
    beta: float
    mu: float
    iterations: int
    rng_seed: int
    seed_word_ids: tuple[tuple[int, ...], ...]  # per seeded topic, sorted
    doc_words: tuple[np.ndarray, ...]  # per doc, word ids (int32)
    assignments: tuple[np.ndarray, ...]  # per doc, topic of each token (int32)
    n_dt: np.ndarray = field(repr=False)  # (D, K) int64
    n_tw: np.ndarray = field(repr=False)  # (V, K) int64
    n_t: np.ndarray = field(repr=False)  # (K,) int64

    @property
    def num_seeded(self) -> int:
        return len(self.categories)

    @property
    def num_topics(self) -> int:
        return self.num_seeded + self.num_unseeded

    @property
    def vocab_size(self) -> int:
        return len(self.vocabulary)

    def check_counts(self) -> None:
        """Verify the bookkeeping invariants; raises AssertionError on any
        violation. Cheap enough to run after every sweep on small corpora."""
        if (self.n_dt < 0).any() or (self.n_tw < 0).any() or (self.n_t < 0).any():
            raise AssertionError("negative count")
        doc_lens = np.array([len(w) for w in self.doc_words], dtype=np.int64)
        if not (self.n_dt.sum(axis=1) == doc_lens).all():
            raise AssertionError("document-topic rows do not sum to document lengths")
        if not (self.n_tw.sum(axis=0) == self.n_t).all():
            raise AssertionError("word-topic columns do not sum to topic totals")
        if self.n_t.sum() != int(doc_lens.sum()):
            raise AssertionError("topic totals do not sum to corpus token count")
        for d, (words, z) in enumerate(zip(self.doc_words, self.assignments)):
            counts = np.bincount(z, minlength=self.num_topics)
            if not (counts == self.n_dt[d]).all():
                raise AssertionError(f"assignments of doc {d} disagree with n_dt")
            if len(words) != len(z):
                raise AssertionError(f"doc {d} word/assignment length mismatch")

    def word_prior(self) -> tuple[np.ndarray, np.ndarray]:
        """B and Bsum: B[w, t] = beta + mu if w seeds topic t else beta;
        Bsum[t] = V * beta + mu * |in-vocabulary seeds of t|."""
        v, k = self.vocab_size, self.num_topics
        prior = np.full((v, k), self.beta, dtype=np.float64)
        total = np.full(k, v * self.beta, dtype=np.float64)
        for t, ids in enumerate(self.seed_word_ids):
            for w in ids:
                prior[w, t] += self.mu
            total[t] += self.mu * len(ids)
        return prior, total


def topic_weights(
    doc_topic_counts: np.ndarray,
    word_topic_counts: np.ndarray,
    topic_totals: np.ndarray,
    alpha: float,
    word_prior: np.ndarray,
    prior_total: np.ndarray,
) -> np.ndarray:
    """Unnormalized conditional weights for one token, given counts with the
    token already removed. Reference form of the kernel's inner loop."""
    return (
        (doc_topic_counts + alpha)
        * (word_topic_counts + word_prior)
        / (topic_totals + prior_total)
    )


def train(
    docs: Sequence[TokenizedDoc],
    seeds: SeedSpec,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
    mu: float = DEFAULT_MU,
    iterations: int = DEFAULT_ITERATIONS,
    rng_seed: int = 0,
    check_every_sweep: bool = False,
) -> SeededLdaModel:
    """Run collapsed Gibbs sampling and return the trained model.

    Empty documents are dropped (and recorded on the model); seed words
    missing from the corpus vocabulary are warned about and ignored. Counts
    are verified after initialization and after the final sweep; with
    `check_every_sweep` they are verified after every sweep.
    """
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if mu < 0:
        raise ValueError("mu must be non-negative")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")

    kept = [d for d in docs if d.tokens]
    dropped = tuple(d.tweet_id for d in docs if not d.tokens)
    if dropped:
        logger.warning("dropped %d empty documents", len(dropped))
    if not kept:
        raise DataError("corpus has no non-empty documents")

    vocab_index: dict[str, int] = {}
    for doc in kept:
        for token in doc.tokens:
            if token not in vocab_index:
                vocab_index[token] = len(vocab_index)
    vocabulary = tuple(vocab_index)

    categories = tuple(name for name, _ in seeds.seeded)
    k = len(categories) + seeds.unseeded
    seed_word_ids: list[tuple[int, ...]] = []
    for name, words in seeds.seeded:
        ids = sorted(vocab_index[w] for w in words if w in vocab_index)
        missing = sorted(w for w in words if w not in vocab_index)
        if missing:
            logger.warning(
                "seed words for %r missing from vocabulary: %s", name, ", ".join(missing)
            )
        seed_word_ids.append(tuple(ids))

    # topics seeded by each word, for the biased initialization
    seeded_by: dict[int, list[int]] = {}
    for t, ids in enumerate(seed_word_ids):
        for w in ids:
            seeded_by.setdefault(w, []).append(t)

    doc_words = tuple(
        np.array([vocab_index[t] for t in doc.tokens], dtype=np.int32) for doc in kept
    )
    rng = np.random.default_rng(rng_seed)

    assignments: list[np.ndarray] = []
    for words in doc_words:
        z = np.empty(len(words), dtype=np.int32)
        for i, w in enumerate(words):
            owners = seeded_by.get(int(w))
            if owners is None:
                z[i] = rng.integers(k)
            elif len(owners) == 1:
                z[i] = owners[0]
            else:
                z[i] = owners[int(rng.integers(len(owners)))]
        assignments.append(z)

    v, d_count = len(vocabulary), len(kept)
    n_dt = np.zeros((d_count, k), dtype=np.int64)
    n_tw = np.zeros((v, k), dtype=np.int64)
    n_t = np.zeros(k, dtype=np.int64)
    for d, (words, z) in enumerate(zip(doc_words, assignments)):
        for w, t in zip(words, z):
            n_dt[d, t] += 1
            n_tw[w, t] += 1
            n_t[t] += 1

    model = SeededLdaModel(
        vocabulary=vocabulary,
        doc_ids=tuple(doc.tweet_id for doc in kept),
        dropped_doc_ids=dropped,
        categories=categories,
        num_unseeded=seeds.unseeded,
        alpha=alpha,
        beta=beta,
        mu=mu,
        iterations=iterations,
        rng_seed=rng_seed,
        seed_word_ids=tuple(seed_word_ids),
        doc_words=doc_words,
        assignments=tuple(assignments),
        n_dt=n_dt,
        n_tw=n_tw,
        n_t=n_t,
    )
    model.check_counts()

    word_prior, prior_total = model.word_prior()
    doc_of = np.concatenate(
        [np.full(len(w), d, dtype=np.int32) for d, w in enumerate(doc_words)]
    ) if doc_words else np.empty(0, dtype=np.int32)
    word_of = np.concatenate(doc_words)
    z_flat = np.concatenate(assignments)
    n_tokens = len(z_flat)

    for _ in range(iterations):
        u = rng.random(n_tokens)
        run_sweep(z_flat, doc_of, word_of, n_dt, n_tw, n_t,
                  word_prior, prior_total, alpha, u)
        if check_every_sweep:
            _scatter_assignments(model, z_flat)
            model.check_counts()

    _scatter_assignments(model, z_flat)
    model.check_counts()
    return model


def _scatter_assignments(model: SeededLdaModel, z_flat: np.ndarray) -> None:
    offset = 0
    for z in model.assignments:
        z[:] = z_flat[offset:offset + len(z)]
        offset += len(z)


def doc_topic_distribution(model: SeededLdaModel, doc: int) -> np.ndarray:
    """theta for one document: (n_dt + alpha) / (len + K * alpha)."""
    if not 0 <= doc < len(model.doc_ids):
        raise IndexError(f"document index {doc} out of range")
    row = model.n_dt[doc]
    return (row + model.alpha) / (row.sum() + model.num_topics * model.alpha)


def classify(model: SeededLdaModel, doc: int, rng: np.random.Generator) -> str:
    """Dominant-topic label for a document: the category of the seeded topic
    with the highest count, `unassigned` if an unseeded topic wins. Exact
    count ties are broken uniformly with the supplied rng."""
    if not 0 <= doc < len(model.doc_ids):
        raise IndexError(f"document index {doc} out of range")
    row = model.n_dt[doc]
    tied = np.flatnonzero(row == row.max())
    topic = int(tied[0]) if len(tied) == 1 else int(tied[rng.integers(len(tied))])
    if topic < model.num_seeded:
        return model.categories[topic]
    return UNASSIGNED


def classify_all(model: SeededLdaModel, rng: np.random.Generator) -> dict[str, str]:
    """Labels for every document, in training order."""
    return {
        doc_id: classify(model, d, rng) for d, doc_id in enumerate(model.doc_ids)
    }


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvaluationReport:
    labels: tuple[str, ...]  # sorted union of gold and predicted labels
    matrix: tuple[tuple[int, ...], ...]  # rows gold, columns predicted
    accuracy: float
    per_class: Mapping[str, ClassMetrics]
    gold_classes: tuple[str, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    micro_precision: float
    micro_recall: float
    micro_f1: float

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "matrix": [list(row) for row in self.matrix],
            "accuracy": self.accuracy,
            "per_class": {
                name: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
                for name, m in self.per_class.items()
            },
            "gold_classes": list(self.gold_classes),
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "micro": {
                "precision": self.micro_precision,
                "recall": self.micro_recall,
                "f1": self.micro_f1,
            },
        }


def _safe_div(num: int, den: int) -> float:
    return num / den if den else 0.0


def evaluate(
    predictions: Mapping[str, str], gold: Mapping[str, str]
) -> EvaluationReport:
    """Confusion matrix and metrics over identical key sets. Macro averages
    run over the classes present in the gold labels (so a predicted-only
    label such as `unassigned` gets a matrix column but no vote in the
    averages); micro averages pool counts over the same classes."""
    if predictions.keys() != gold.keys():
        only_p = len(predictions.keys() - gold.keys())
        only_g = len(gold.keys() - predictions.keys())
        raise DataError(
            f"prediction and gold key sets differ ({only_p} prediction-only, "
            f"{only_g} gold-only)"
        )
    if not gold:
        raise DataError("nothing to evaluate: empty key set")

    labels = tuple(sorted(set(gold.values()) | set(predictions.values())))
    index = {name: i for i, name in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for key, g in gold.items():
        counts[index[g]][index[predictions[key]]] += 1

    total = len(gold)
    correct = sum(counts[i][i] for i in range(len(labels)))
    accuracy = correct / total

    per_class: dict[str, ClassMetrics] = {}
    for name in labels:
        i = index[name]
        tp = counts[i][i]
        fp = sum(counts[j][i] for j in range(len(labels))) - tp
        fn = sum(counts[i]) - tp
        precision = _safe_div(tp, tp + fp)
        recall = _safe_div(tp, tp + fn)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[name] = ClassMetrics(precision, recall, f1)

    gold_classes = tuple(sorted(set(gold.values())))
    macro_p = sum(per_class[c].precision for c in gold_classes) / len(gold_classes)
    macro_r = sum(per_class[c].recall for c in gold_classes) / len(gold_classes)
    macro_f = sum(per_class[c].f1 for c in gold_classes) / len(gold_classes)

    tp_sum = sum(counts[index[c]][index[c]] for c in gold_classes)
    fp_sum = sum(
        sum(counts[j][index[c]] for j in range(len(labels))) - counts[index[c]][index[c]]
        for c in gold_classes
    )
    fn_sum = sum(
        sum(counts[index[c]]) - counts[index[c]][index[c]] for c in gold_classes
    )
    micro_p = _safe_div(tp_sum, tp_sum + fp_sum)
    micro_r = _safe_div(tp_sum, tp_sum + fn_sum)
    micro_f = 2 * micro_p * micro_r / (micro_p + micro_r) if micro_p + micro_r else 0.0

    return EvaluationReport(
        labels=labels,
        matrix=tuple(tuple(row) for row in counts),
        accuracy=accuracy,
        per_class=per_class,
        gold_classes=gold_classes,
        macro_precision=macro_p,
        macro_recall=macro_r,
        macro_f1=macro_f,
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f1=micro_f,
    )


def derive_gold(
    membership: Mapping[str, Iterable[str]],
    policy: str = "rarest",
    categories: Sequence[str] | None = None,
) -> dict[str, str]:
    """Collapse multi-category membership to one gold label per tweet.

    Policies: `rarest` picks the member category with the fewest member
    tweets in this corpus (ties by taxonomy order), `priority` picks the
    member category earliest in taxonomy order, `exclude_multi` drops tweets
    with more than one category. Tweets with no category are always dropped.
    `categories` supplies the taxonomy order; names missing from it sort
    after it, alphabetically.
    """
    if policy not in ("rarest", "priority", "exclude_multi"):
        raise ValueError(f"unknown gold policy: {policy!r}")
    seen: set[str] = set()
    for cats in membership.values():
        seen.update(cats)
    if categories is None:
        order = sorted(seen)
    else:
        order = list(categories) + sorted(seen - set(categories))
    rank = {name: i for i, name in enumerate(order)}

    sizes: dict[str, int] = {name: 0 for name in order}
    for cats in membership.values():
        for cat in cats:
            sizes[cat] += 1

    gold: dict[str, str] = {}
    for tweet_id, cats in membership.items():
        members = sorted(cats, key=lambda c: rank[c])
        if not members:
            continue
        if policy == "exclude_multi":
            if len(members) == 1:
                gold[tweet_id] = members[0]
            continue
        if policy == "priority":
            gold[tweet_id] = members[0]
            continue
        gold[tweet_id] = min(members, key=lambda c: (sizes[c], rank[c]))
    return gold


def save_model(model: SeededLdaModel, path) -> None:
    """Write the model as deterministic JSON: hyperparameters, vocabulary,
    seed ids, per-document word ids and assignments, and all count tables
    (the word-topic table in sparse [word, topic, count] triples)."""
    n_tw_sparse = [
        [int(w), int(t), int(c)]
        for (w, t), c in np.ndenumerate(model.n_tw)
        if c > 0
    ]
    payload = {
        "format": _FORMAT,
        "version": _FORMAT_VERSION,
        "alpha": model.alpha,
        "beta": model.beta,
        "mu": model.mu,
        "iterations": model.iterations,
        "rng_seed": model.rng_seed,
        "categories": list(model.categories),
        "num_unseeded": model.num_unseeded,
        "vocabulary": list(model.vocabulary),
        "seed_word_ids": [list(ids) for ids in model.seed_word_ids],
        "doc_ids": list(model.doc_ids),
        "dropped_doc_ids": list(model.dropped_doc_ids),
        "doc_words": [w.tolist() for w in model.doc_words],
        "assignments": [z.tolist() for z in model.assignments],
        "n_dt": model.n_dt.tolist(),
        "n_tw": n_tw_sparse,
        "n_t": model.n_t.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path) -> SeededLdaModel:
    """Read a model written by :func:`save_model`, verifying format and count
    consistency."""
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid model JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != _FORMAT:
        raise DataError(f"{path}: not a {_FORMAT} model file")
    if payload.get("version") != _FORMAT_VERSION:
        raise DataError(f"{path}: unsupported model version {payload.get('version')!r}")
    try:
        k = len(payload["categories"]) + payload["num_unseeded"]
        v = len(payload["vocabulary"])
        n_tw = np.zeros((v, k), dtype=np.int64)
        for w, t, c in payload["n_tw"]:
            n_tw[w, t] = c
        model = SeededLdaModel(
            vocabulary=tuple(payload["vocabulary"]),
            doc_ids=tuple(payload["doc_ids"]),
            dropped_doc_ids=tuple(payload["dropped_doc_ids"]),
            categories=tuple(payload["categories"]),
            num_unseeded=int(payload["num_unseeded"]),
            alpha=float(payload["alpha"]),
            beta=float(payload["beta"]),
            mu=float(payload["mu"]),
            iterations=int(payload["iterations"]),
            rng_seed=int(payload["rng_seed"]),
            seed_word_ids=tuple(tuple(ids) for ids in payload["seed_word_ids"]),
            doc_words=tuple(
                np.array(w, dtype=np.int32) for w in payload["doc_words"]
            ),
            assignments=tuple(
                np.array(z, dtype=np.int32) for z in payload["assignments"]
            ),
            n_dt=np.array(payload["n_dt"], dtype=np.int64).reshape(
                len(payload["doc_ids"]), k
            ),
            n_tw=n_tw,
            n_t=np.array(payload["n_t"], dtype=np.int64),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise DataError(f"{path}: corrupt model payload: {exc}") from exc
    try:
        model.check_counts()
    except AssertionError as exc:
        raise DataError(f"{path}: inconsistent model counts: {exc}") from exc
    return model

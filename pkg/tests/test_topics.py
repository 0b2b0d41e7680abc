"""Seeded LDA: seed specs, the Gibbs kernel against a pure-Python replay,
training determinism and invariants, classification, evaluation metrics,
gold-label derivation, and model persistence."""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from tagtopics._gibbs import run_sweep
from tagtopics.errors import DataError
from tagtopics.textprep import TokenizedDoc
from tagtopics.topics import (
    UNASSIGNED,
    SeededLdaModel,
    SeedSpec,
    classify,
    classify_all,
    derive_gold,
    doc_topic_distribution,
    evaluate,
    load_model,
    save_model,
    topic_weights,
    train,
)

DATA = Path(__file__).parent / "data"


def doc(i, *tokens):
    return TokenizedDoc(f"d{i}", tuple(tokens))


class TestSeedSpec:
    def test_from_mapping_casefolds(self):
        spec = SeedSpec.from_mapping({"A": ["Storm", "RAIN"]}, unseeded=1)
        assert spec.seeded == (("A", frozenset({"storm", "rain"})),)
        assert spec.unseeded == 1

    def test_from_json_fixture(self):
        spec = SeedSpec.from_json_file(DATA / "seeds.json")
        assert [name for name, _ in spec.seeded] == ["Music", "Sports", "Weather"]
        assert frozenset({"storm", "rain", "heat", "lightning"}) == spec.seeded[2][1]
        assert spec.unseeded == 2

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            SeedSpec(seeded=(("A", frozenset({"x"})), ("A", frozenset({"y"}))))

    def test_empty_seed_set_rejected(self):
        with pytest.raises(ValueError):
            SeedSpec(seeded=(("A", frozenset()),))

    def test_negative_unseeded_rejected(self):
        with pytest.raises(ValueError):
            SeedSpec(seeded=(), unseeded=-1)

    def test_zero_topics_rejected(self):
        with pytest.raises(ValueError):
            SeedSpec(seeded=(), unseeded=0)

    def test_unseeded_only_allowed(self):
        assert SeedSpec(seeded=(), unseeded=3).unseeded == 3

    def test_bad_json_files(self, tmp_path):
        broken = tmp_path / "bad.json"
        broken.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataError):
            SeedSpec.from_json_file(broken)
        broken.write_text('["list"]', encoding="utf-8")
        with pytest.raises(DataError):
            SeedSpec.from_json_file(broken)
        broken.write_text('{"A": "notalist"}', encoding="utf-8")
        with pytest.raises(DataError):
            SeedSpec.from_json_file(broken)


class TestTopicWeights:
    def test_worked_example(self):
        # two topics; token removed already; symmetric prior 0.1 / 0.2
        w = topic_weights(
            doc_topic_counts=np.array([1.0, 0.0]),
            word_topic_counts=np.array([1.0, 0.0]),
            topic_totals=np.array([2.0, 1.0]),
            alpha=0.01,
            word_prior=np.array([0.1, 0.1]),
            prior_total=np.array([0.2, 0.2]),
        )
        assert abs(w[0] - 0.505) <= 1e-12  # 1.01 * 1.1 / 2.2
        assert abs(w[1] - 1 / 1200) <= 1e-12  # 0.01 * 0.1 / 1.2

    def test_seed_bias_raises_weight(self):
        base = topic_weights(
            np.zeros(2), np.zeros(2), np.ones(2), 0.01,
            np.array([0.0001, 0.0001]), np.array([0.01, 0.01]),
        )
        biased = topic_weights(
            np.zeros(2), np.zeros(2), np.ones(2), 0.01,
            np.array([0.5001, 0.0001]), np.array([0.51, 0.01]),
        )
        assert biased[0] > base[0]


class TestWordPrior:
    def test_shapes_and_values(self):
        spec = SeedSpec.from_mapping({"A": ["a"], "B": ["b", "zz"]}, unseeded=1)
        model = train([doc(1, "a", "b", "c")], spec, iterations=0, rng_seed=0)
        prior, total = model.word_prior()
        v, k = len(model.vocabulary), 3
        assert prior.shape == (v, k) and total.shape == (k,)
        a = model.vocabulary.index("a")
        c = model.vocabulary.index("c")
        assert prior[a, 0] == pytest.approx(model.beta + model.mu)
        assert prior[a, 1] == model.beta
        assert prior[c, 2] == model.beta
        # "zz" never entered the vocabulary, so topic B counts one seed
        assert total[0] == pytest.approx(v * model.beta + model.mu)
        assert total[1] == pytest.approx(v * model.beta + model.mu)
        assert total[2] == pytest.approx(v * model.beta)


def replay_sweep(z, doc_of, word_of, n_dt, n_tw, n_t, prior, prior_total, alpha, u):
    """Pure-Python mirror of the kernel, accumulating in the same order."""
    k = n_t.shape[0]
    for i in range(len(z)):
        d, w, t = doc_of[i], word_of[i], z[i]
        n_dt[d, t] -= 1
        n_tw[w, t] -= 1
        n_t[t] -= 1
        weights = []
        total = np.float64(0.0)
        for tt in range(k):
            wt = ((n_dt[d, tt] + alpha)
                  * (n_tw[w, tt] + prior[w, tt])
                  / (n_t[tt] + prior_total[tt]))
            weights.append(wt)
            total += wt
        r = u[i] * total
        new_t = k - 1
        acc = np.float64(0.0)
        for tt in range(k):
            acc += weights[tt]
            if r < acc:
                new_t = tt
                break
        z[i] = new_t
        n_dt[d, new_t] += 1
        n_tw[w, new_t] += 1
        n_t[new_t] += 1


class TestKernel:
    def setup_state(self, rng):
        d_count, v, k, n = 6, 9, 4, 60
        doc_of = np.sort(rng.integers(0, d_count, n)).astype(np.int32)
        word_of = rng.integers(0, v, n).astype(np.int32)
        z = rng.integers(0, k, n).astype(np.int32)
        n_dt = np.zeros((d_count, k), dtype=np.int64)
        n_tw = np.zeros((v, k), dtype=np.int64)
        n_t = np.zeros(k, dtype=np.int64)
        for d, w, t in zip(doc_of, word_of, z):
            n_dt[d, t] += 1
            n_tw[w, t] += 1
            n_t[t] += 1
        prior = np.full((v, k), 0.0001)
        prior[rng.integers(0, v, 3), rng.integers(0, k, 3)] += 0.5
        prior_total = prior.sum(axis=0)
        return z, doc_of, word_of, n_dt, n_tw, n_t, prior, prior_total

    def test_kernel_matches_pure_python_replay(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            state = self.setup_state(rng)
            u = rng.random(len(state[0]))
            kernel_state = tuple(a.copy() for a in state)
            replay_state = tuple(a.copy() for a in state)
            run_sweep(*kernel_state[:6], kernel_state[6], kernel_state[7], 0.01, u)
            replay_sweep(*replay_state[:6], replay_state[6], replay_state[7], 0.01, u)
            for got, want in zip(kernel_state, replay_state):
                np.testing.assert_array_equal(got, want)

    def test_degenerate_weights_rejected(self):
        # zero prior and zero alpha leave every numerator at zero once the
        # lone token is removed, so the weight total cannot be positive
        z = np.zeros(1, dtype=np.int32)
        doc_of = np.zeros(1, dtype=np.int32)
        word_of = np.zeros(1, dtype=np.int32)
        n_dt = np.array([[1, 0]], dtype=np.int64)
        n_tw = np.array([[1, 0]], dtype=np.int64)
        n_t = np.array([1, 0], dtype=np.int64)
        prior = np.zeros((1, 2))
        prior_total = np.ones(2)
        with pytest.raises(AssertionError):
            run_sweep(z, doc_of, word_of, n_dt, n_tw, n_t, prior, prior_total,
                      0.0, np.array([0.5]))


def small_corpus():
    rng = np.random.default_rng(99)
    docs = []
    for i in range(20):
        vocab = ["apple", "banana", "citrus"] if i % 2 else ["xray", "yoga", "zebra"]
        tokens = [vocab[j] for j in rng.integers(0, 3, size=8)]
        docs.append(TokenizedDoc(f"d{i:02d}", tuple(tokens)))
    return docs


class TestTrain:
    def test_deterministic_given_seed(self):
        docs = small_corpus()
        spec = SeedSpec.from_mapping({"A": ["apple"], "B": ["xray"]}, unseeded=1)
        m1 = train(docs, spec, iterations=30, rng_seed=5)
        m2 = train(docs, spec, iterations=30, rng_seed=5)
        np.testing.assert_array_equal(m1.n_dt, m2.n_dt)
        np.testing.assert_array_equal(m1.n_tw, m2.n_tw)
        np.testing.assert_array_equal(m1.n_t, m2.n_t)
        for z1, z2 in zip(m1.assignments, m2.assignments):
            np.testing.assert_array_equal(z1, z2)
        r1 = np.random.default_rng(1)
        r2 = np.random.default_rng(1)
        assert classify_all(m1, r1) == classify_all(m2, r2)

    def test_different_seed_differs(self):
        docs = small_corpus()
        spec = SeedSpec.from_mapping({"A": ["apple"], "B": ["xray"]}, unseeded=1)
        m1 = train(docs, spec, iterations=5, rng_seed=5)
        m2 = train(docs, spec, iterations=5, rng_seed=6)
        assert any(
            not np.array_equal(z1, z2)
            for z1, z2 in zip(m1.assignments, m2.assignments)
        )

    def test_invariants_hold_and_checked(self):
        docs = small_corpus()
        spec = SeedSpec.from_mapping({"A": ["apple"]}, unseeded=2)
        model = train(docs, spec, iterations=10, rng_seed=3, check_every_sweep=True)
        model.check_counts()
        total_tokens = sum(len(w) for w in model.doc_words)
        assert int(model.n_t.sum()) == total_tokens
        assert model.num_topics == 3
        assert model.n_dt.shape == (20, 3)

    def test_vocabulary_first_appearance_order(self):
        model = train(
            [doc(1, "pear", "apple"), doc(2, "apple", "kiwi")],
            SeedSpec(seeded=(), unseeded=2),
            iterations=0,
        )
        assert model.vocabulary == ("pear", "apple", "kiwi")

    def test_sole_owner_seed_init(self):
        spec = SeedSpec.from_mapping({"A": ["aa"], "B": ["bb"]}, unseeded=0)
        model = train([doc(1, "aa", "aa", "bb")], spec, iterations=0, rng_seed=0)
        np.testing.assert_array_equal(model.assignments[0], [0, 0, 1])
        np.testing.assert_array_equal(model.n_dt[0], [2, 1])

    def test_shared_seed_word_splits_between_owners(self):
        spec = SeedSpec.from_mapping({"A": ["aa"], "B": ["aa"]}, unseeded=0)
        model = train(
            [doc(i, *(["aa"] * 10)) for i in range(10)], spec,
            iterations=0, rng_seed=0,
        )
        z = np.concatenate(model.assignments)
        assert set(z.tolist()) == {0, 1}  # both owners drawn, nothing else

    def test_empty_docs_dropped_with_warning(self, caplog):
        docs = [doc(1, "a"), TokenizedDoc("empty1", ()), doc(2, "b")]
        with caplog.at_level("WARNING", logger="tagtopics.topics"):
            model = train(docs, SeedSpec(seeded=(), unseeded=2), iterations=1)
        assert model.doc_ids == ("d1", "d2")
        assert model.dropped_doc_ids == ("empty1",)
        assert any("empty" in r.message for r in caplog.records)

    def test_all_empty_rejected(self):
        with pytest.raises(DataError):
            train([TokenizedDoc("e", ())], SeedSpec(seeded=(), unseeded=2))

    def test_missing_seed_words_warned(self, caplog):
        spec = SeedSpec.from_mapping({"A": ["ghost", "apple"]}, unseeded=1)
        with caplog.at_level("WARNING", logger="tagtopics.topics"):
            model = train([doc(1, "apple")], spec, iterations=1)
        assert any("ghost" in r.message for r in caplog.records)
        assert model.seed_word_ids == ((0,),)

    @pytest.mark.parametrize(
        "kwargs", [{"alpha": 0.0}, {"beta": 0.0}, {"mu": -0.1}, {"iterations": -1}]
    )
    def test_bad_hyperparameters(self, kwargs):
        with pytest.raises(ValueError):
            train([doc(1, "a")], SeedSpec(seeded=(), unseeded=2), **kwargs)

    def test_disjoint_vocabularies_separate(self):
        rng = np.random.default_rng(11)
        docs = []
        for i in range(200):
            vocab = ["aa", "ab"] if i % 2 == 0 else ["ca", "cb"]
            tokens = [vocab[j] for j in rng.integers(0, 2, size=10)]
            docs.append(TokenizedDoc(f"d{i:03d}", tuple(tokens)))
        spec = SeedSpec.from_mapping({"A": ["aa"], "C": ["ca"]}, unseeded=0)
        model = train(docs, spec, iterations=200, rng_seed=1)
        labels = classify_all(model, np.random.default_rng(2))
        expected = {d.tweet_id: ("A" if i % 2 == 0 else "C")
                    for i, d in enumerate(docs)}
        agree = sum(labels[k] == expected[k] for k in expected)
        assert agree / len(expected) >= 0.95


class TestDocTopicDistribution:
    def test_concentrated_document(self):
        # five tokens all on the seeded topic of a two-topic model
        spec = SeedSpec.from_mapping({"A": ["aa"]}, unseeded=1)
        model = train([doc(1, *(["aa"] * 5))], spec, iterations=0, rng_seed=0)
        theta = doc_topic_distribution(model, 0)
        assert abs(theta[0] - 5.01 / 5.02) <= 1e-12
        assert abs(theta[1] - 0.01 / 5.02) <= 1e-12

    def test_sums_to_one(self):
        docs = small_corpus()
        spec = SeedSpec.from_mapping({"A": ["apple"]}, unseeded=2)
        model = train(docs, spec, iterations=5, rng_seed=4)
        for d in range(len(model.doc_ids)):
            assert abs(doc_topic_distribution(model, d).sum() - 1.0) <= 1e-12

    def test_out_of_range(self):
        model = train([doc(1, "a")], SeedSpec(seeded=(), unseeded=2), iterations=0)
        with pytest.raises(IndexError):
            doc_topic_distribution(model, 1)
        with pytest.raises(IndexError):
            doc_topic_distribution(model, -1)


def make_model(n_dt_rows, categories, num_unseeded):
    """Hand-built model wrapping given document-topic counts; only the fields
    classify() touches need to be meaningful."""
    n_dt = np.array(n_dt_rows, dtype=np.int64)
    d, k = n_dt.shape
    assert k == len(categories) + num_unseeded
    doc_words = tuple(
        np.zeros(int(row.sum()), dtype=np.int32) for row in n_dt
    )
    assignments = tuple(
        np.repeat(np.arange(k, dtype=np.int32), row) for row in n_dt
    )
    n_tw = np.zeros((1, k), dtype=np.int64)
    for row in n_dt:
        n_tw[0] += row
    return SeededLdaModel(
        vocabulary=("w",),
        doc_ids=tuple(f"d{i}" for i in range(d)),
        dropped_doc_ids=(),
        categories=tuple(categories),
        num_unseeded=num_unseeded,
        alpha=0.01,
        beta=0.0001,
        mu=0.5,
        iterations=0,
        rng_seed=0,
        seed_word_ids=tuple(() for _ in categories),
        doc_words=doc_words,
        assignments=assignments,
        n_dt=n_dt,
        n_tw=n_tw,
        n_t=n_tw[0].copy(),
    )


class TestClassify:
    def test_seeded_argmax(self):
        model = make_model([[3, 1, 0]], ["A", "B"], 1)
        assert classify(model, 0, np.random.default_rng(0)) == "A"

    def test_unseeded_winner_is_unassigned(self):
        model = make_model([[1, 0, 4]], ["A", "B"], 1)
        assert classify(model, 0, np.random.default_rng(0)) == UNASSIGNED

    def test_tie_broken_uniformly(self):
        model = make_model([[2, 2]], ["A", "B"], 0)
        rng = np.random.default_rng(13)
        trials = 10_000
        a_wins = sum(
            classify(model, 0, rng) == "A" for _ in range(trials)
        )
        assert abs(a_wins / trials - 0.5) <= 0.05

    def test_near_tie_is_not_a_tie(self):
        model = make_model([[3, 2]], ["A", "B"], 0)
        rng = np.random.default_rng(13)
        assert all(classify(model, 0, rng) == "A" for _ in range(50))

    def test_classify_all_order(self):
        model = make_model([[2, 0], [0, 2]], ["A"], 1)
        labels = classify_all(model, np.random.default_rng(0))
        assert labels == {"d0": "A", "d1": UNASSIGNED}


class TestEvaluate:
    def test_worked_example(self):
        gold = {"1": "a", "2": "a", "3": "b", "4": "b"}
        pred = {"1": "a", "2": "a", "3": "a", "4": "b"}
        report = evaluate(pred, gold)
        assert report.labels == ("a", "b")
        assert report.matrix == ((2, 0), (1, 1))
        assert report.accuracy == 0.75
        a, b = report.per_class["a"], report.per_class["b"]
        assert abs(a.precision - 2 / 3) <= 1e-12 and a.recall == 1.0
        assert abs(a.f1 - 0.8) <= 1e-12
        assert b.precision == 1.0 and b.recall == 0.5
        assert abs(b.f1 - 2 / 3) <= 1e-12
        assert abs(report.macro_precision - 5 / 6) <= 1e-12
        assert abs(report.macro_recall - 0.75) <= 1e-12
        assert abs(report.macro_f1 - 11 / 15) <= 1e-12
        assert report.micro_precision == 0.75
        assert report.micro_recall == 0.75
        assert abs(report.micro_f1 - 0.75) <= 1e-12

    def test_perfect_predictions(self):
        gold = {str(i): f"c{i % 3}" for i in range(9)}
        report = evaluate(dict(gold), gold)
        assert report.accuracy == 1.0
        assert report.macro_f1 == 1.0
        assert report.micro_f1 == 1.0
        assert all(m.f1 == 1.0 for m in report.per_class.values())

    def test_predicted_only_label_gets_column_not_vote(self):
        gold = {"1": "a", "2": "a"}
        pred = {"1": "a", "2": UNASSIGNED}
        report = evaluate(pred, gold)
        assert report.labels == ("a", UNASSIGNED)
        assert report.matrix == ((1, 1), (0, 0))
        assert report.gold_classes == ("a",)
        assert report.accuracy == 0.5
        # macro covers the one gold class only
        assert report.macro_precision == 1.0
        assert report.macro_recall == 0.5
        un = report.per_class[UNASSIGNED]
        assert (un.precision, un.recall, un.f1) == (0.0, 0.0, 0.0)

    def test_mismatched_keys_rejected(self):
        with pytest.raises(DataError):
            evaluate({"1": "a"}, {"2": "a"})
        with pytest.raises(DataError):
            evaluate({"1": "a", "2": "a"}, {"1": "a"})

    def test_empty_rejected(self):
        with pytest.raises(DataError):
            evaluate({}, {})

    def test_matrix_against_brute_force(self):
        rng = np.random.default_rng(21)
        classes = ["x", "y", "z"]
        for _ in range(100):
            n = int(rng.integers(1, 30))
            gold = {str(i): classes[rng.integers(3)] for i in range(n)}
            pred = {str(i): classes[rng.integers(3)] for i in range(n)}
            report = evaluate(pred, gold)
            for gi, gname in enumerate(report.labels):
                for pi, pname in enumerate(report.labels):
                    want = sum(
                        1 for k in gold if gold[k] == gname and pred[k] == pname
                    )
                    assert report.matrix[gi][pi] == want
            assert sum(map(sum, report.matrix)) == n
            assert report.accuracy == sum(
                1 for k in gold if gold[k] == pred[k]
            ) / n

    def test_to_dict_round_trips_through_json(self):
        report = evaluate({"1": "a"}, {"1": "b"})
        payload = json.loads(json.dumps(report.to_dict()))
        assert payload["labels"] == ["a", "b"]
        assert payload["macro"]["f1"] == 0.0
        assert payload["accuracy"] == 0.0


class TestDeriveGold:
    MEMBERSHIP = {"t1": {"A", "B"}, "t2": {"A"}, "t3": {"A"}, "t4": {"B", "C"}}

    def test_rarest(self):
        # sizes: A=3, B=2, C=1
        gold = derive_gold(self.MEMBERSHIP, "rarest", ["A", "B", "C"])
        assert gold == {"t1": "B", "t2": "A", "t3": "A", "t4": "C"}

    def test_rarest_tie_uses_taxonomy_order(self):
        gold = derive_gold({"t1": {"A", "B"}}, "rarest", ["B", "A"])
        assert gold == {"t1": "B"}

    def test_priority(self):
        gold = derive_gold(self.MEMBERSHIP, "priority", ["A", "B", "C"])
        assert gold == {"t1": "A", "t2": "A", "t3": "A", "t4": "B"}

    def test_exclude_multi(self):
        gold = derive_gold(self.MEMBERSHIP, "exclude_multi", ["A", "B", "C"])
        assert gold == {"t2": "A", "t3": "A"}

    def test_memberless_tweets_dropped(self):
        gold = derive_gold({"t1": set(), "t2": {"A"}}, "priority", ["A"])
        assert gold == {"t2": "A"}

    def test_unlisted_categories_sort_after(self):
        gold = derive_gold({"t1": {"zed", "mid"}}, "priority", ["mid"])
        assert gold == {"t1": "mid"}
        gold = derive_gold({"t1": {"zed", "alpha"}}, "priority", [])
        assert gold == {"t1": "alpha"}

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            derive_gold({}, "weirdest")


class TestSaveLoad:
    def trained(self):
        spec = SeedSpec.from_mapping({"A": ["apple"], "B": ["xray"]}, unseeded=1)
        return train(small_corpus(), spec, iterations=10, rng_seed=8)

    def test_round_trip(self, tmp_path):
        model = self.trained()
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.vocabulary == model.vocabulary
        assert loaded.doc_ids == model.doc_ids
        assert loaded.categories == model.categories
        assert loaded.seed_word_ids == model.seed_word_ids
        assert (loaded.alpha, loaded.beta, loaded.mu) == (
            model.alpha, model.beta, model.mu
        )
        np.testing.assert_array_equal(loaded.n_dt, model.n_dt)
        np.testing.assert_array_equal(loaded.n_tw, model.n_tw)
        np.testing.assert_array_equal(loaded.n_t, model.n_t)
        for a, b in zip(loaded.assignments, model.assignments):
            np.testing.assert_array_equal(a, b)
        assert classify_all(loaded, np.random.default_rng(3)) == classify_all(
            model, np.random.default_rng(3)
        )

    def test_save_is_deterministic(self, tmp_path):
        model = self.trained()
        p1, p2 = tmp_path / "m1.json", tmp_path / "m2.json"
        save_model(model, p1)
        save_model(model, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_files_rejected(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("{broken", encoding="utf-8")
        with pytest.raises(DataError):
            load_model(path)
        path.write_text('{"format": "something-else"}', encoding="utf-8")
        with pytest.raises(DataError):
            load_model(path)
        path.write_text(
            '{"format": "tagtopics-lda", "version": 99}', encoding="utf-8"
        )
        with pytest.raises(DataError):
            load_model(path)

    def test_tampered_counts_rejected(self, tmp_path):
        model = self.trained()
        path = tmp_path / "m.json"
        save_model(model, path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["n_t"][0] += 1
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(DataError):
            load_model(path)

    def test_truncated_payload_rejected(self, tmp_path):
        model = self.trained()
        path = tmp_path / "m.json"
        save_model(model, path)
        payload = json.loads(path.read_text(encoding="utf-8"))
        del payload["n_dt"]
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(DataError):
            load_model(path)

"""User models, ranking and the chronological/random baselines."""

import itertools
import math

import numpy as np
import pytest

from microrec.bag import VectorModel, vector_similarity
from microrec.config import Config
from microrec.corpus import Source, Tweet
from microrec.graphs import build_graph, merge_graphs
from microrec.recommend import (
    RankedList,
    baseline_chr,
    baseline_ran,
    build_user_model,
    rank,
)
from microrec.topics import pool, train_lda


def tw(tid, ts, text, author="v"):
    return Tweet(tid, author, ts, text)


BAG_TF = Config(model="bow-token", n=1, weighting="tf", aggregation="centroid",
                similarity="cosine")
BAG_SUM = Config(model="bow-token", n=1, weighting="tf", aggregation="sum",
                 similarity="cosine")
GRAPH_CFG = Config(model="graph-token", n=1, similarity="value")


class TestBuildUserModel:
    def test_single_doc_bag_equals_its_vector(self):
        doc = tw("d", 0, "a b a")
        model = build_user_model([doc], BAG_SUM, Source.R)
        assert model.payload.weights == {
            "a": pytest.approx(2 / 3), "b": pytest.approx(1 / 3),
        }
        # centroid normalizes magnitude: same direction, unit length
        model = build_user_model([doc], BAG_TF, Source.R)
        assert model.payload.weights["a"] == pytest.approx(
            2 * model.payload.weights["b"]
        )
        assert model.payload.norm == pytest.approx(1.0)

    def test_graph_model_is_merge_of_doc_graphs(self):
        docs = [tw("d1", 0, "a b c"), tw("d2", 1, "b c d")]
        model = build_user_model(docs, GRAPH_CFG, Source.R)
        expected = merge_graphs([
            build_graph(["a", "b", "c"], 1), build_graph(["b", "c", "d"], 1),
        ])
        assert model.payload.edges == expected.edges

    def test_topic_centroid(self):
        pooled = pool(
            [tw(f"t{i}", i, f"w{i % 2}x1 w{i % 2}x2") for i in range(20)], "none"
        )
        state = train_lda(pooled, 2, alpha=0.1, iterations=150, seed=0)
        cfg = Config(model="lda", topics=2, iterations=150, pooling="none",
                     aggregation="centroid", similarity="cosine")
        docs = [tw("a", 0, "w0x1 w0x2 w0x1"), tw("b", 1, "w1x1 w1x2 w1x1")]
        model = build_user_model(docs, cfg, Source.R, topic_state=state)
        assert model.payload.sum() == pytest.approx(1.0)
        # two opposite-topic docs average out near the middle
        assert abs(model.payload[0] - 0.5) < 0.25

    def test_empty_training_set(self):
        with pytest.raises(ValueError):
            build_user_model([], BAG_TF, Source.R)

    def test_missing_topic_state(self):
        cfg = Config(model="lda", topics=2, aggregation="centroid")
        with pytest.raises(ValueError):
            build_user_model([tw("a", 0, "x")], cfg, Source.R)

    def test_rocchio_labels(self):
        cfg = Config(model="bow-token", n=1, weighting="tf",
                     aggregation="rocchio", similarity="cosine")
        docs = [tw("p", 0, "x"), tw("n", 1, "y")]
        model = build_user_model(
            [docs[0], docs[1]], cfg, Source.E,
            doc_labels={"p": "positive", "n": "negative"},
        )
        assert model.payload.weights == {"x": pytest.approx(0.8)}


class TestRank:
    def test_matching_doc_outranks_mismatch(self):
        user = build_user_model([tw("d", 0, "a")], BAG_TF, Source.R)
        test_docs = [(tw("ta", 5, "a"), True), (tw("tb", 6, "b"), False)]
        ranked = rank(user, test_docs, BAG_TF)
        assert [e.tweet_id for e in ranked.entries] == ["ta", "tb"]
        assert ranked.entries[0].score == pytest.approx(1.0)
        assert ranked.entries[1].score == 0.0

    def test_tie_break_later_timestamp_first_then_id(self):
        user = build_user_model([tw("d", 0, "a")], BAG_TF, Source.R)
        test_docs = [
            (tw("t2", 5, "a"), True), (tw("t1", 9, "a"), False),
            (tw("t0", 5, "a"), False),
        ]
        ranked = rank(user, test_docs, BAG_TF)
        assert [e.tweet_id for e in ranked.entries] == ["t1", "t0", "t2"]

    def test_empty_test_set(self):
        user = build_user_model([tw("d", 0, "a")], BAG_TF, Source.R)
        assert rank(user, [], BAG_TF).entries == []

    def test_output_is_permutation_of_input(self):
        rng = np.random.default_rng(0)
        user = build_user_model([tw("d", 0, "a b c")], BAG_TF, Source.R)
        docs = [
            (tw(f"t{i}", int(rng.integers(100)), " ".join(
                rng.choice(list("abcxyz"), size=4))), bool(rng.integers(2)))
            for i in range(30)
        ]
        ranked = rank(user, docs, BAG_TF)
        assert sorted(e.tweet_id for e in ranked.entries) == sorted(
            t.id for t, _ in docs
        )

    def test_scaling_user_model_keeps_cosine_order(self):
        # nested prefixes guarantee well-separated scores, so the order
        # comparison is not at the mercy of last-ulp rounding under scaling
        alphabet = list("abcdefgh")
        docs = [
            (tw(f"t{i}", i, " ".join(alphabet[: i + 1])), False)
            for i in range(len(alphabet))
        ]
        user = build_user_model([tw("d", 0, "a b c")], BAG_TF, Source.R)
        ranked1 = rank(user, docs, BAG_TF)
        user.payload = VectorModel(
            user.payload.unit, user.payload.n,
            {k: 7.3 * w for k, w in user.payload.weights.items()},
        )
        ranked2 = rank(user, docs, BAG_TF)
        assert [e.tweet_id for e in ranked1.entries] == [
            e.tweet_id for e in ranked2.entries
        ]

    def test_scores_bounded(self):
        rng = np.random.default_rng(2)
        user = build_user_model([tw("d", 0, "a b c")], BAG_TF, Source.R)
        docs = [
            (tw(f"t{i}", i, " ".join(rng.choice(list("abcz"), size=3))), False)
            for i in range(50)
        ]
        for cfg in (BAG_TF, GRAPH_CFG):
            model = build_user_model([tw("d", 0, "a b c")], cfg, Source.R)
            for e in rank(model, docs, cfg).entries:
                assert -1e-12 <= e.score <= 1 + 1e-12

    def test_empty_test_doc_scores_zero(self):
        user = build_user_model([tw("d", 0, "a")], BAG_TF, Source.R)
        ranked = rank(user, [(tw("t", 0, "..."), False)], BAG_TF)
        assert ranked.entries[0].score == 0.0


class TestBaselines:
    def test_chr_orders_latest_first(self):
        docs = [(tw("a", 5, "x"), False), (tw("b", 9, "x"), True), (tw("c", 1, "x"), False)]
        ranked = baseline_chr(docs)
        assert [e.tweet_id for e in ranked.entries] == ["b", "a", "c"]
        assert [e.score for e in ranked.entries] == [9.0, 5.0, 1.0]

    def test_chr_equal_timestamps_id_descending(self):
        docs = [(tw("a", 5, "x"), False), (tw("b", 5, "x"), False)]
        assert [e.tweet_id for e in baseline_chr(docs).entries] == ["b", "a"]

    def test_chr_singleton(self):
        assert len(baseline_chr([(tw("a", 1, "x"), True)]).entries) == 1

    def test_ran_deterministic_per_seed(self):
        docs = [(tw(str(i), i, "x"), False) for i in range(10)]
        a = baseline_ran(docs, 42)
        b = baseline_ran(docs, 42)
        assert [e.tweet_id for e in a.entries] == [e.tweet_id for e in b.entries]
        c = baseline_ran(docs, 43)
        assert [e.tweet_id for e in a.entries] != [e.tweet_id for e in c.entries]

    def test_ran_empty(self):
        assert baseline_ran([], 1).entries == []

    def test_ran_permutations_uniform(self):
        docs = [(tw("a", 1, "x"), False), (tw("b", 2, "x"), False), (tw("c", 3, "x"), False)]
        counts = {p: 0 for p in itertools.permutations("abc")}
        trials = 10_000
        for seed in range(trials):
            ranked = baseline_ran(docs, seed)
            counts[tuple(e.tweet_id for e in ranked.entries)] += 1
        for perm, count in counts.items():
            assert abs(count / trials - 1 / 6) < 0.02, perm

    def test_csv_serialization(self):
        docs = [(tw("a", 5, "x"), True), (tw("b", 9, "x"), False)]
        csv_text = baseline_chr(docs).to_csv()
        lines = csv_text.strip().split("\n")
        assert lines[0] == "rank,tweet_id,score,relevant"
        assert lines[1].startswith("1,b,")

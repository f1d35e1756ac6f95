"""Corpus-layer tests: tokenization, sources, categories, splits, file IO."""

import math

import numpy as np
import pytest

from microrec.corpus import (
    ALL_SOURCES,
    Corpus,
    SocialGraph,
    Source,
    Tweet,
    build_source,
    char_ngrams,
    classify_ratio,
    compute_stoplist,
    load_graph_tsv,
    load_tweets_jsonl,
    posting_ratio,
    save_graph_tsv,
    save_tweets_jsonl,
    split_train_test,
    tokenize,
)


class TestTokenize:
    def test_squeeze_and_lowercase(self):
        assert tokenize("Yeeees!") == ["yees"]

    def test_specials_survive_as_single_tokens(self):
        assert tokenize("check http://t.co/x #edbt @bob :)") == [
            "check", "http://t.co/x", "#edbt", "@bob", ":)",
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_splits(self):
        assert tokenize("a.b,c") == ["a", "b", "c"]

    def test_double_letters_survive(self):
        assert tokenize("good") == ["good"]

    def test_nose_variants(self):
        assert tokenize("fine :-)") == ["fine", ":-)"]

    def test_idempotent_on_rejoin(self):
        rng = np.random.default_rng(4)
        pieces = ["Yeees!", "a.b", "#tag", "@who", ":)", "http://x.co/q", "heLLo", "??"]
        for _ in range(200):
            text = " ".join(rng.choice(pieces, size=rng.integers(0, 6)))
            once = tokenize(text)
            assert tokenize(" ".join(once)) == once


class TestCharNgrams:
    def test_basic(self):
        assert char_ngrams("abcd", 2) == ["ab", "bc", "cd"]

    def test_too_short(self):
        assert char_ngrams("ab", 4) == []

    def test_rejects_nonpositive_n(self):
        with pytest.raises(ValueError):
            char_ngrams("abc", 0)

    def test_misspelling_overlap(self):
        # noisy variants still match on most character bigrams
        a = set(char_ngrams("tweet", 2))
        b = set(char_ngrams("twete", 2))
        assert len(a) == 4 and len(b) == 4
        assert len(a & b) == 3


def make_corpus():
    """Small fixed corpus: u1 follows u2,u3; u2 follows u1; u3 follows nobody."""
    tweets = [
        Tweet("t1", "u1", 10, "alpha beta"),
        Tweet("t2", "u1", 20, "gamma delta", retweet_of="u2"),
        Tweet("t3", "u2", 5, "gamma delta"),
        Tweet("t4", "u2", 30, "epsilon"),
        Tweet("t5", "u3", 15, "zeta"),
        Tweet("t6", "u3", 25, "eta theta"),
    ]
    graph = SocialGraph([("u1", "u2"), ("u1", "u3"), ("u2", "u1")])
    return Corpus(tweets, graph)


class TestSources:
    def test_tr_is_union_of_t_and_r(self):
        corpus = make_corpus()
        t = {x.id for x in build_source(corpus, "u1", Source.T)}
        r = {x.id for x in build_source(corpus, "u1", Source.R)}
        tr = {x.id for x in build_source(corpus, "u1", Source.TR)}
        assert t == {"t1"} and r == {"t2"}
        assert tr == t | r

    def test_reciprocal_is_user_level_intersection(self):
        corpus = make_corpus()
        # u1's followees {u2,u3}, followers {u2} -> C = posts of u2
        c = {x.id for x in build_source(corpus, "u1", Source.C)}
        assert c == {"t3", "t4"}

    def test_composites_dedup_by_id(self):
        corpus = make_corpus()
        re = build_source(corpus, "u1", Source.RE)
        ids = [x.id for x in re]
        assert len(ids) == len(set(ids))
        r = {x.id for x in build_source(corpus, "u1", Source.R)}
        e = {x.id for x in build_source(corpus, "u1", Source.E)}
        assert set(ids) == r | e

    def test_every_composite_equals_union_of_atoms(self):
        corpus = make_corpus()
        for src in ALL_SOURCES:
            if len(src.value) == 1:
                continue
            whole = {x.id for x in build_source(corpus, "u1", src)}
            parts = set()
            for atom in src.atoms:
                parts |= {x.id for x in build_source(corpus, "u1", atom)}
            assert whole == parts, src

    def test_unknown_user(self):
        with pytest.raises(KeyError):
            build_source(make_corpus(), "nobody", Source.T)


class TestPostingRatio:
    def test_producer(self):
        cat = classify_ratio(100, 40)
        assert cat.ratio == pytest.approx(2.5) and cat.category == "IP"

    def test_seeker(self):
        cat = classify_ratio(30, 100)
        assert cat.ratio == pytest.approx(0.3) and cat.category == "IS"

    def test_balanced_midpoint(self):
        cat = classify_ratio(50, 50)
        assert cat.ratio == 1.0 and cat.category == "BU"

    def test_boundaries_are_balanced(self):
        assert classify_ratio(1, 2).category == "BU"
        assert classify_ratio(2, 1).category == "BU"

    def test_undefined_ratio(self):
        with pytest.raises(ValueError):
            classify_ratio(10, 0)

    def test_categories_cover_all_ratios(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            out = int(rng.integers(0, 500))
            inc = int(rng.integers(1, 500))
            cat = classify_ratio(out, inc)
            ratio = out / inc
            if ratio < 0.5:
                assert cat.category == "IS"
            elif ratio > 2:
                assert cat.category == "IP"
            else:
                assert cat.category == "BU"

    def test_corpus_level(self):
        corpus = make_corpus()
        cat = posting_ratio(corpus, "u1")
        # outgoing = 2 (t1, t2); incoming = posts of u2 and u3 = 4
        assert cat.ratio == pytest.approx(0.5) and cat.category == "BU"


def split_corpus(n_retweets=10, pool_size=None):
    """One user with retweets at timestamps 1..n and a followee authoring
    the originals plus extra unretweeted posts in the testing phase."""
    tweets = []
    for i in range(1, n_retweets + 1):
        tweets.append(Tweet(f"orig{i}", "v", i, f"text {i}"))
        tweets.append(Tweet(f"rt{i}", "u", i, f"text {i}", retweet_of="v"))
    pool_size = 3 * n_retweets if pool_size is None else pool_size
    split_ts = math.ceil(0.8 * n_retweets) + 1 if n_retweets > 1 else 1
    for j in range(pool_size):
        tweets.append(Tweet(f"neg{j}", "v", 100 + j, f"unseen {j}"))
    graph = SocialGraph([("u", "v")])
    return Corpus(tweets, graph)


class TestSplit:
    def test_twenty_percent_most_recent(self):
        corpus = split_corpus(10)
        split = split_train_test(corpus, "u", rng_seed=3)
        assert {t.id for t in split.positives} == {"rt9", "rt10"}
        assert split.split_timestamp == 9
        assert len(split.negatives) == 8
        assert not split.warnings

    def test_minimum_five_retweets(self):
        corpus = split_corpus(5)
        split = split_train_test(corpus, "u", rng_seed=0)
        assert len(split.positives) == 1
        assert len(split.negatives) == 4
        with pytest.raises(ValueError):
            split_train_test(split_corpus(4), "u")

    def test_exhausted_pool_warns(self):
        corpus = split_corpus(5, pool_size=3)
        split = split_train_test(corpus, "u", rng_seed=0)
        assert len(split.negatives) == 3
        assert split.warnings

    def test_train_test_disjoint(self):
        corpus = split_corpus(10)
        split = split_train_test(corpus, "u", rng_seed=1)
        test_ids = {t.id for t, _ in split.test_docs}
        for docs in split.train_docs.values():
            assert test_ids.isdisjoint({t.id for t in docs})
            for t in docs:
                assert t.timestamp < split.split_timestamp

    def test_negatives_come_from_testing_phase(self):
        corpus = split_corpus(10)
        split = split_train_test(corpus, "u", rng_seed=1)
        for t in split.negatives:
            assert t.timestamp >= split.split_timestamp
            assert t.author == "v"

    def test_retweeted_originals_never_sampled_as_negatives(self):
        corpus = split_corpus(10)
        split = split_train_test(corpus, "u", rng_seed=2)
        neg_ids = {t.id for t in split.negatives}
        assert not any(i.startswith("orig") for i in neg_ids)

    def test_deterministic_given_seed(self):
        corpus = split_corpus(10, pool_size=50)
        a = split_train_test(corpus, "u", rng_seed=9)
        b = split_train_test(corpus, "u", rng_seed=9)
        assert [t.id for t, _ in a.test_docs] == [t.id for t, _ in b.test_docs]


class TestStoplist:
    def _tweets(self, counts):
        out = []
        i = 0
        for tok, c in counts.items():
            for _ in range(c):
                out.append(Tweet(f"s{i}", "u", i, tok))
                i += 1
        return out

    def test_top_k(self):
        tweets = self._tweets({"a": 5, "b": 3, "c": 1})
        assert compute_stoplist(tweets, 2) == {"a", "b"}

    def test_zero_k(self):
        assert compute_stoplist(self._tweets({"a": 2}), 0) == set()

    def test_lexicographic_tiebreak(self):
        tweets = self._tweets({"b": 2, "a": 2})
        assert compute_stoplist(tweets, 1) == {"a"}

    def test_fewer_tokens_than_k(self):
        tweets = self._tweets({"a": 1, "b": 1})
        assert compute_stoplist(tweets, 10) == {"a", "b"}


class TestGraphAndIO:
    def test_reciprocity_invariant(self):
        g = SocialGraph([("a", "b"), ("b", "a"), ("c", "a")])
        for follower, followees in g.followees.items():
            for followee in followees:
                assert follower in g.followers[followee]
        assert g.reciprocal_of("a") == {"b"}

    def test_self_edge_rejected(self):
        with pytest.raises(ValueError):
            SocialGraph([("a", "a")])

    def test_duplicate_tweet_ids_rejected(self):
        with pytest.raises(ValueError):
            Corpus([Tweet("x", "u", 1, "a"), Tweet("x", "u", 2, "b")], SocialGraph())

    def test_jsonl_round_trip(self, tmp_path):
        corpus = make_corpus()
        path = tmp_path / "tweets.jsonl"
        save_tweets_jsonl(corpus.tweets, path)
        back = load_tweets_jsonl(path)
        assert back == corpus.tweets

    def test_graph_tsv_round_trip(self, tmp_path):
        g = SocialGraph([("a", "b"), ("b", "a"), ("c", "a")])
        path = tmp_path / "graph.tsv"
        save_graph_tsv(g, path)
        back = load_graph_tsv(path)
        assert back.followees == g.followees

    def test_bad_jsonl_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a"}\n')
        with pytest.raises(ValueError):
            load_tweets_jsonl(path)

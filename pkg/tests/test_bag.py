"""Vector model tests: weighting, aggregation, similarities and their
identities."""

import math

import numpy as np
import pytest

from microrec.bag import CorpusStats, VectorModel, aggregate, vector_similarity, vectorize


def vec(weights, unit="token", n=1):
    return VectorModel(unit, n, dict(weights))


class TestVectorize:
    def test_tf(self):
        v = vectorize(["a", "b", "a"], "tf")
        assert v.weights == {"a": pytest.approx(2 / 3), "b": pytest.approx(1 / 3)}

    def test_binary(self):
        v = vectorize(["a", "b", "a"], "binary")
        assert v.weights == {"a": 1.0, "b": 1.0}

    def test_tfidf(self):
        stats = CorpusStats(doc_count=4, doc_freq={"a": 1})
        v = vectorize(["a"], "tfidf", stats=stats)
        assert v.weights["a"] == pytest.approx(math.log(2), abs=1e-4)

    def test_tf_weights_sum_to_one(self):
        rng = np.random.default_rng(1)
        alphabet = list("abcdefg")
        for _ in range(200):
            ngrams = list(rng.choice(alphabet, size=rng.integers(1, 30)))
            v = vectorize(ngrams, "tf")
            assert sum(v.weights.values()) == pytest.approx(1.0)

    def test_empty_document_errors_for_tf(self):
        with pytest.raises(ValueError):
            vectorize([], "tf")
        with pytest.raises(ValueError):
            vectorize([], "tfidf", stats=CorpusStats(1, {}))

    def test_empty_binary_is_empty_vector(self):
        assert vectorize([], "binary").weights == {}

    def test_idf_decreases_with_document_frequency(self):
        stats = CorpusStats(doc_count=1000, doc_freq={})
        idfs = [
            CorpusStats(1000, {"t": df}).idf("t") for df in range(0, 999, 7)
        ]
        assert all(a > b or (a == b == 0.0) for a, b in zip(idfs, idfs[1:]))

    def test_ubiquitous_term_clamps_to_zero_weight(self):
        stats = CorpusStats(doc_count=3, doc_freq={"a": 3})
        v = vectorize(["a"], "tfidf", stats=stats)
        assert "a" not in v.weights


class TestAggregate:
    def test_sum(self):
        out = aggregate([(vec({"a": 1}), "positive"), (vec({"a": 1, "b": 1}), "positive")], "sum")
        assert out.weights == {"a": 2.0, "b": 1.0}

    def test_centroid_of_unit_vectors(self):
        out = aggregate([(vec({"x": 1}), "positive"), (vec({"y": 1}), "positive")], "centroid")
        assert out.weights == {"x": pytest.approx(0.5), "y": pytest.approx(0.5)}

    def test_centroid_of_copies_is_the_vector(self):
        v = vec({"a": 3.0, "b": 4.0})
        unit = {k: w / 5.0 for k, w in v.weights.items()}
        out = aggregate([(v, "positive")] * 7, "centroid")
        for k in unit:
            assert out.weights[k] == pytest.approx(unit[k])

    def test_rocchio_clamps_negative_coordinates(self):
        out = aggregate(
            [(vec({"x": 1}), "positive"), (vec({"y": 1}), "negative")],
            "rocchio", alpha=0.8, beta=0.2,
        )
        assert out.weights == {"x": pytest.approx(0.8)}

    def test_rocchio_requires_positive(self):
        with pytest.raises(ValueError):
            aggregate([(vec({"y": 1}), "negative")], "rocchio")

    def test_rocchio_requires_convex_weights(self):
        with pytest.raises(ValueError):
            aggregate([(vec({"x": 1}), "positive")], "rocchio", alpha=0.9, beta=0.3)

    def test_zero_vector_rejected_by_centroid(self):
        with pytest.raises(ValueError):
            aggregate([(vec({}), "positive")], "centroid")


class TestVectorSimilarity:
    def test_cosine(self):
        a, b = vec({"x": 1, "y": 2}), vec({"x": 2, "y": 1})
        assert vector_similarity(a, b, "cosine") == pytest.approx(0.8)

    def test_jaccard(self):
        a, b = vec({"a": 1, "b": 1, "c": 1}), vec({"b": 1, "c": 1, "d": 1})
        assert vector_similarity(a, b, "jaccard") == pytest.approx(0.5)

    def test_generalized_jaccard(self):
        a, b = vec({"a": 1, "b": 2}), vec({"a": 2, "b": 1})
        assert vector_similarity(a, b, "generalized_jaccard") == pytest.approx(0.5)

    def test_empty_scores_zero(self):
        assert vector_similarity(vec({}), vec({"a": 1}), "cosine") == 0.0
        assert vector_similarity(vec({}), vec({}), "jaccard") == 0.0

    def test_unit_mismatch_errors(self):
        with pytest.raises(ValueError):
            vector_similarity(vec({"a": 1}), vec({"a": 1}, unit="char"), "cosine")
        with pytest.raises(ValueError):
            vector_similarity(vec({"a": 1}), vec({"a": 1}, n=2), "cosine")

    @staticmethod
    def _random_vector(rng):
        keys = rng.choice(list("abcdefghij"), size=rng.integers(0, 8), replace=False)
        return vec({k: float(rng.uniform(0.1, 3.0)) for k in keys})

    def test_symmetry_bounds_and_self_similarity(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            a, b = self._random_vector(rng), self._random_vector(rng)
            for measure in ("cosine", "jaccard", "generalized_jaccard"):
                s_ab = vector_similarity(a, b, measure)
                s_ba = vector_similarity(b, a, measure)
                assert s_ab == pytest.approx(s_ba, abs=1e-12)
                assert -1e-12 <= s_ab <= 1 + 1e-12
                if not a.is_empty():
                    assert vector_similarity(a, a, measure) == pytest.approx(1.0)

    def test_debug_serialization_sorted_lines(self):
        v = vec({"b": 2.0, "a": 0.5})
        assert v.to_text() == "a\t0.5\nb\t2.0"

    def test_gjs_equals_js_for_binary_weights(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            a_keys = rng.choice(list("abcdefgh"), size=rng.integers(1, 6), replace=False)
            b_keys = rng.choice(list("abcdefgh"), size=rng.integers(1, 6), replace=False)
            a = vec({k: 1.0 for k in a_keys})
            b = vec({k: 1.0 for k in b_keys})
            js = vector_similarity(a, b, "jaccard")
            gjs = vector_similarity(a, b, "generalized_jaccard")
            assert gjs == pytest.approx(js, abs=1e-12)

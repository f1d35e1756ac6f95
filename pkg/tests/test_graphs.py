"""Graph model tests: windowed construction, additive merge, similarities."""

import numpy as np
import pytest

from microrec.graphs import GraphModel, build_graph, graph_similarity, merge_graphs


class TestBuildGraph:
    def test_window_one(self):
        g = build_graph(["a", "b", "c"], 1)
        assert g.edges == {("a", "b"): 1.0, ("b", "c"): 1.0}

    def test_window_two(self):
        g = build_graph(["a", "b", "c"], 2)
        assert g.edges == {("a", "b"): 1.0, ("b", "c"): 1.0, ("a", "c"): 1.0}

    def test_no_self_loops(self):
        assert build_graph(["a", "a"], 1).edges == {}

    def test_repeated_cooccurrence_accumulates(self):
        g = build_graph(["a", "b", "a", "b"], 1)
        assert g.edges == {("a", "b"): 3.0}

    def test_short_input(self):
        assert build_graph(["a"], 3).is_empty()
        assert build_graph([], 3).is_empty()

    def test_sentence_slices_merge_when_windows_do_not_span(self):
        # a document equals the merge of its slices only when no window
        # crosses the slice boundary; an all-distinct boundary breaks it
        doc = ["a", "b", "c", "d", "e", "f"]
        whole = build_graph(doc, 1)
        # window 1 never spans two positions apart, so splitting between any
        # adjacent pair loses exactly the boundary edge unless we re-add it
        left, right = build_graph(doc[:3], 1), build_graph(doc[3:], 1)
        merged = merge_graphs([left, right])
        boundary = build_graph(["c", "d"], 1)
        assert merge_graphs([merged, boundary]).edges == whole.edges


class TestMergeGraphs:
    def test_additive(self):
        g1 = GraphModel("token", 1, {("a", "b"): 1.0})
        g2 = GraphModel("token", 1, {("a", "b"): 2.0, ("b", "c"): 1.0})
        assert merge_graphs([g1, g2]).edges == {("a", "b"): 3.0, ("b", "c"): 1.0}

    def test_identity(self):
        g = build_graph(["a", "b", "c"], 2)
        assert merge_graphs([g, GraphModel("token", 2)]).edges == g.edges

    def test_doubling(self):
        g = build_graph(["a", "b", "c"], 2)
        doubled = merge_graphs([g, g])
        assert doubled.edges == {e: 2 * w for e, w in g.edges.items()}

    def test_mismatch_errors(self):
        with pytest.raises(ValueError):
            merge_graphs([GraphModel("token", 1, {("a", "b"): 1.0}),
                          GraphModel("char", 1, {("a", "b"): 1.0})])

    def test_empty_list(self):
        assert merge_graphs([]).is_empty()

    def test_debug_serialization_canonical_pairs(self):
        g = build_graph(["b", "a"], 1)
        assert g.to_text() == "a\tb\t1.0"


class TestGraphSimilarity:
    def test_containment(self):
        gi = GraphModel("token", 1, {("a", "b"): 1.0, ("c", "d"): 1.0})
        gj = GraphModel("token", 1, {("c", "d"): 1.0, ("e", "f"): 1.0, ("g", "h"): 1.0})
        assert graph_similarity(gi, gj, "containment") == pytest.approx(0.5)

    def test_value_and_normalized_value(self):
        gi = GraphModel("token", 1, {("a", "b"): 2.0, ("x", "y"): 1.0})
        gj = GraphModel("token", 1, {("a", "b"): 4.0, ("p", "q"): 1.0, ("r", "s"): 1.0})
        assert graph_similarity(gi, gj, "value") == pytest.approx(0.5 / 3)
        assert graph_similarity(gi, gj, "normalized_value") == pytest.approx(0.25)

    def test_identical_graphs_score_one(self):
        g = build_graph(["a", "b", "c", "a"], 2)
        for measure in ("containment", "value", "normalized_value"):
            assert graph_similarity(g, g, measure) == pytest.approx(1.0)

    def test_empty_operand_scores_zero(self):
        g = build_graph(["a", "b"], 1)
        empty = GraphModel("token", 1)
        for measure in ("containment", "value", "normalized_value"):
            assert graph_similarity(g, empty, measure) == 0.0

    @staticmethod
    def _random_graph(rng):
        tokens = [str(t) for t in rng.integers(0, 8, size=rng.integers(2, 12))]
        g = build_graph(tokens, 2)
        for key in list(g.edges):
            g.edges[key] = float(rng.integers(1, 6))
        return g

    def test_symmetry_bounds_and_ns_dominates_vs(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            gi, gj = self._random_graph(rng), self._random_graph(rng)
            for measure in ("containment", "value", "normalized_value"):
                s_ij = graph_similarity(gi, gj, measure)
                s_ji = graph_similarity(gj, gi, measure)
                assert s_ij == pytest.approx(s_ji, abs=1e-12)
                assert -1e-12 <= s_ij <= 1 + 1e-12
            vs = graph_similarity(gi, gj, "value")
            ns = graph_similarity(gi, gj, "normalized_value")
            assert ns >= vs - 1e-12

    def test_adding_shared_edge_never_decreases_value_numerator(self):
        gi = GraphModel("token", 1, {("a", "b"): 2.0})
        gj = GraphModel("token", 1, {("a", "b"): 2.0, ("c", "d"): 1.0})
        before = graph_similarity(gi, gj, "value") * max(gi.size, gj.size)
        gi2 = GraphModel("token", 1, {**gi.edges, ("e", "f"): 3.0})
        gj2 = GraphModel("token", 1, {**gj.edges, ("e", "f"): 3.0})
        after = graph_similarity(gi2, gj2, "value") * max(gi2.size, gj2.size)
        assert after >= before - 1e-12

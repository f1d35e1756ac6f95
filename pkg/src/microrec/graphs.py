"""n-gram co-occurrence graph models: construction, merging and the three
graph similarities (containment, value, normalized value)."""

from __future__ import annotations

from dataclasses import dataclass, field

GRAPH_SIMILARITIES = ("containment", "value", "normalized_value")


@dataclass
class GraphModel:
    """Undirected weighted graph over n-grams. Edges are keyed by the
    canonically ordered pair; weights count co-occurrences and are > 0."""

    unit: str  # "token" | "char"
    n: int
    edges: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.edges)

    def is_empty(self) -> bool:
        return not self.edges

    def to_text(self) -> str:
        """Debug serialization: "gramA<TAB>gramB<TAB>weight" lines."""
        lines = [f"{a}\t{b}\t{w!r}" for (a, b), w in sorted(self.edges.items())]
        return "\n".join(lines)


def _edge(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def _check_compatible(gi: GraphModel, gj: GraphModel) -> None:
    if gi.unit != gj.unit or gi.n != gj.n:
        raise ValueError(
            f"incompatible graphs: ({gi.unit}, n={gi.n}) vs ({gj.unit}, n={gj.n})"
        )


def build_graph(ngrams, n: int, unit: str = "token") -> GraphModel:
    """Connect every pair of n-grams that co-occur within a window of size n.

    For position i, edges go to positions i+1 .. i+n. Identical n-grams map
    to one vertex and never form a self-loop; edge weights count how often
    the pair co-occurred.
    """
    if n < 1:
        raise ValueError(f"window size must be >= 1, got {n}")
    ngrams = list(ngrams)
    edges: dict[tuple[str, str], float] = {}
    for i, g in enumerate(ngrams):
        for j in range(i + 1, min(i + n, len(ngrams) - 1) + 1):
            if g != ngrams[j]:
                key = _edge(g, ngrams[j])
                edges[key] = edges.get(key, 0.0) + 1.0
    return GraphModel(unit=unit, n=n, edges=edges)


def merge_graphs(graphs) -> GraphModel:
    """Union of edge sets with per-document weights summed."""
    graphs = list(graphs)
    if not graphs:
        return GraphModel(unit="token", n=1)
    first = graphs[0]
    edges = dict(first.edges)
    for g in graphs[1:]:
        _check_compatible(first, g)
        for key, w in g.edges.items():
            edges[key] = edges.get(key, 0.0) + w
    return GraphModel(unit=first.unit, n=first.n, edges=edges)


def graph_similarity(gi: GraphModel, gj: GraphModel, measure: str) -> float:
    """Similarity in [0, 1]; an empty operand always scores 0.

    containment: shared-edge count over the smaller size. value: sum of
    min/max weight ratios of common edges over the larger size.
    normalized_value: the same sum over the smaller size.
    """
    if measure not in GRAPH_SIMILARITIES:
        raise ValueError(f"unknown graph similarity {measure!r}")
    _check_compatible(gi, gj)
    if gi.is_empty() or gj.is_empty():
        return 0.0

    small, large = (gi.edges, gj.edges)
    if len(small) > len(large):
        small, large = large, small

    if measure == "containment":
        shared = sum(1 for e in small if e in large)
        return shared / min(gi.size, gj.size)

    ratio_sum = 0.0
    for e, w in small.items():
        other = large.get(e)
        if other is not None:
            ratio_sum += min(w, other) / max(w, other)
    if measure == "value":
        return ratio_sum / max(gi.size, gj.size)
    return ratio_sum / min(gi.size, gj.size)

"""Sparse n-gram vector models: weighting schemes, user-level aggregation and
vector similarities."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

WEIGHTINGS = ("binary", "tf", "tfidf")
AGGREGATIONS = ("sum", "centroid", "rocchio")
VECTOR_SIMILARITIES = ("cosine", "jaccard", "generalized_jaccard")


@dataclass(frozen=True)
class CorpusStats:
    """Document frequencies for idf weighting: ``doc_count`` is |D| and
    ``doc_freq`` maps each n-gram to the number of documents containing it."""

    doc_count: int
    doc_freq: dict[str, int]

    @classmethod
    def from_documents(cls, documents) -> "CorpusStats":
        """Build stats from an iterable of n-gram lists."""
        df = Counter()
        n_docs = 0
        for ngrams in documents:
            n_docs += 1
            df.update(set(ngrams))
        return cls(doc_count=n_docs, doc_freq=dict(df))

    def idf(self, ngram: str) -> float:
        """ln(|D| / (df + 1)); clamped at 0 so weights stay nonnegative."""
        if self.doc_count <= 0:
            return 0.0
        return max(0.0, math.log(self.doc_count / (self.doc_freq.get(ngram, 0) + 1)))


@dataclass
class VectorModel:
    """Sparse weighted n-gram vector. Zero weights are never stored."""

    unit: str  # "token" | "char"
    n: int
    weights: dict[str, float] = field(default_factory=dict)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))

    def is_empty(self) -> bool:
        return not self.weights

    def scaled(self, factor: float) -> "VectorModel":
        return VectorModel(self.unit, self.n, {k: w * factor for k, w in self.weights.items()})

    def to_text(self) -> str:
        """Debug serialization: one "ngram<TAB>weight" line per entry."""
        lines = [f"{k}\t{w!r}" for k, w in sorted(self.weights.items())]
        return "\n".join(lines)


def _check_compatible(a: VectorModel, b: VectorModel) -> None:
    if a.unit != b.unit or a.n != b.n:
        raise ValueError(
            f"incompatible vectors: ({a.unit}, n={a.n}) vs ({b.unit}, n={b.n})"
        )


def vectorize(
    ngrams,
    scheme: str,
    *,
    unit: str = "token",
    n: int = 1,
    stats: CorpusStats | None = None,
) -> VectorModel:
    """Turn an n-gram list into a weighted vector.

    binary: 1 per distinct n-gram. tf: occurrence count over document length.
    tfidf: tf times ln(|D|/(df+1)), which needs ``stats``.
    """
    if scheme not in WEIGHTINGS:
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    ngrams = list(ngrams)
    if scheme == "binary":
        return VectorModel(unit, n, {g: 1.0 for g in set(ngrams)})
    if not ngrams:
        raise ValueError("empty document: tf/tfidf weights are undefined")
    total = len(ngrams)
    counts = Counter(ngrams)
    if scheme == "tf":
        return VectorModel(unit, n, {g: c / total for g, c in counts.items()})
    if stats is None:
        raise ValueError("tfidf weighting needs corpus stats")
    weights = {}
    for g, c in counts.items():
        w = (c / total) * stats.idf(g)
        if w > 0.0:
            weights[g] = w
    return VectorModel(unit, n, weights)


def aggregate(
    vectors,
    fn: str,
    alpha: float = 0.8,
    beta: float = 0.2,
) -> VectorModel:
    """Combine per-document vectors into one user vector.

    ``vectors`` is a list of (VectorModel, label) pairs with label in
    {"positive", "negative"}; sum and centroid ignore the labels. rocchio
    computes alpha * mean(normalized positives) - beta * mean(normalized
    negatives) and clamps negative coordinates to 0.
    """
    if fn not in AGGREGATIONS:
        raise ValueError(f"unknown aggregation {fn!r}")
    pairs = [(v, lab) for v, lab in vectors]
    if not pairs:
        raise ValueError("nothing to aggregate")
    first = pairs[0][0]
    for v, _ in pairs[1:]:
        _check_compatible(first, v)

    if fn == "sum":
        acc: dict[str, float] = {}
        for v, _ in pairs:
            for g, w in v.weights.items():
                acc[g] = acc.get(g, 0.0) + w
        return VectorModel(first.unit, first.n, acc)

    def normalized_mean(vs) -> dict[str, float]:
        acc: dict[str, float] = {}
        for v in vs:
            nrm = v.norm
            if nrm == 0.0:
                raise ValueError("zero-magnitude vector cannot be normalized")
            for g, w in v.weights.items():
                acc[g] = acc.get(g, 0.0) + w / nrm
        return {g: w / len(vs) for g, w in acc.items()}

    if fn == "centroid":
        return VectorModel(first.unit, first.n, normalized_mean([v for v, _ in pairs]))

    # rocchio
    if not math.isclose(alpha + beta, 1.0, abs_tol=1e-9):
        raise ValueError(f"rocchio needs alpha + beta = 1, got {alpha} + {beta}")
    pos = [v for v, lab in pairs if lab == "positive"]
    neg = [v for v, lab in pairs if lab == "negative"]
    if not pos:
        raise ValueError("rocchio needs at least one positive document")
    acc = {g: alpha * w for g, w in normalized_mean(pos).items()}
    if neg:
        for g, w in normalized_mean(neg).items():
            acc[g] = acc.get(g, 0.0) - beta * w
    # Clamp: similarity measures assume nonnegative coordinates.
    acc = {g: w for g, w in acc.items() if w > 0.0}
    return VectorModel(first.unit, first.n, acc)


def vector_similarity(a: VectorModel, b: VectorModel, measure: str) -> float:
    """Similarity in [0, 1]; an empty operand always scores 0."""
    if measure not in VECTOR_SIMILARITIES:
        raise ValueError(f"unknown vector similarity {measure!r}")
    _check_compatible(a, b)
    if a.is_empty() or b.is_empty():
        return 0.0

    if measure == "cosine":
        small, large = (a.weights, b.weights)
        if len(small) > len(large):
            small, large = large, small
        dot = sum(w * large.get(g, 0.0) for g, w in small.items())
        return dot / (a.norm * b.norm)

    if measure == "jaccard":
        sa, sb = set(a.weights), set(b.weights)
        return len(sa & sb) / len(sa | sb)

    # generalized jaccard: sum of coordinate-wise min over sum of max
    num = 0.0
    den = 0.0
    for g in set(a.weights) | set(b.weights):
        wa = a.weights.get(g, 0.0)
        wb = b.weights.get(g, 0.0)
        num += min(wa, wb)
        den += max(wa, wb)
    return num / den if den > 0.0 else 0.0

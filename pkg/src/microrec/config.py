"""Model configuration: one frozen record per grid entry.

Model ids: bow-token / bow-char (n-gram vectors), graph-token / graph-char
(n-gram graphs), lda / llda / btm / hdp / hlda (topic models), plsa (off the
default grid). Baselines chr / ran appear in reports but carry no Config.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import FEEDBACK_SOURCES, Source

BAG_MODELS = ("bow-token", "bow-char")
GRAPH_MODELS = ("graph-token", "graph-char")
TOPIC_MODELS = ("lda", "llda", "btm", "hdp", "hlda", "plsa")
ALL_MODELS = BAG_MODELS + GRAPH_MODELS + TOPIC_MODELS

ROCCHIO_ALPHA = 0.8
ROCCHIO_BETA = 0.2


@dataclass(frozen=True)
class Config:
    model: str
    n: int | None = None               # n-gram size == co-occurrence window
    weighting: str | None = None       # binary | tf | tfidf
    aggregation: str | None = None     # sum | centroid | rocchio
    similarity: str | None = None      # vector or graph measure; topics use cosine
    topics: int | None = None
    iterations: int | None = None
    pooling: str | None = None         # none | user | hashtag
    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    levels: int | None = None
    window: int | None = None          # biterm window; None = whole document

    def __post_init__(self):
        if self.model not in ALL_MODELS:
            raise ValueError(f"unknown model {self.model!r}")

    @property
    def family(self) -> str:
        if self.model in BAG_MODELS:
            return "bag"
        if self.model in GRAPH_MODELS:
            return "graph"
        return "topic"

    @property
    def unit(self) -> str:
        return "char" if self.model.endswith("-char") else "token"

    @property
    def config_id(self) -> str:
        parts = [self.model]
        if self.n is not None:
            parts.append(f"n{self.n}")
        if self.weighting:
            parts.append(self.weighting)
        if self.topics is not None:
            parts.append(f"k{self.topics}")
        if self.iterations is not None:
            parts.append(f"i{self.iterations}")
        if self.pooling:
            parts.append(f"p-{self.pooling}")
        if self.alpha is not None:
            parts.append(f"a{self.alpha:g}")
        if self.beta is not None:
            parts.append(f"b{self.beta:g}")
        if self.gamma is not None:
            parts.append(f"g{self.gamma:g}")
        if self.levels is not None:
            parts.append(f"l{self.levels}")
        if self.window is not None:
            parts.append(f"r{self.window}")
        if self.aggregation:
            parts.append(self.aggregation)
        if self.similarity:
            parts.append(self.similarity)
        return "-".join(parts)

    def applies_to_source(self, source: Source) -> bool:
        """Relevance-feedback aggregation needs sources that mix endorsed and
        non-endorsed documents; everything else runs everywhere."""
        if self.aggregation == "rocchio":
            return source in FEEDBACK_SOURCES
        return True

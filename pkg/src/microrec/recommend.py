"""User model construction, test-set ranking and the two trivial baselines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bag, graphs
from .config import Config, ROCCHIO_ALPHA, ROCCHIO_BETA
from .corpus import Source, char_ngrams, token_ngrams, tokenize
from .topics.inference import infer_theta
from .topics.state import TopicState


@dataclass
class UserModel:
    family: str  # bag | graph | topic
    payload: object  # VectorModel | GraphModel | np.ndarray topic distribution
    source: Source
    config_id: str


@dataclass(frozen=True)
class RankEntry:
    tweet_id: str
    score: float
    relevant: bool


@dataclass
class RankedList:
    entries: list[RankEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def to_csv(self) -> str:
        lines = ["rank,tweet_id,score,relevant"]
        for rank, e in enumerate(self.entries, start=1):
            lines.append(f"{rank},{e.tweet_id},{float(e.score)!r},{int(e.relevant)}")
        return "\n".join(lines) + "\n"


def doc_ngrams(text: str, unit: str, n: int, stoplist=frozenset()) -> list[str]:
    """The n-gram stream a document contributes under a model configuration.

    Token models tokenize, drop stoplisted tokens, then window; character
    models slide over the raw lowercased text (the stoplist is a token-level
    artifact and does not apply).
    """
    if unit == "token":
        tokens = [t for t in tokenize(text) if t not in stoplist]
        return token_ngrams(tokens, n)
    return char_ngrams(text, n)


def _bag_doc_vector(text: str, config: Config, stats, stoplist) -> bag.VectorModel:
    ngrams = doc_ngrams(text, config.unit, config.n, stoplist)
    if not ngrams:
        return bag.VectorModel(config.unit, config.n, {})
    return bag.vectorize(
        ngrams, config.weighting, unit=config.unit, n=config.n, stats=stats
    )


def build_user_model(
    train_docs,
    config: Config,
    source: Source,
    topic_state: TopicState | None = None,
    stats: bag.CorpusStats | None = None,
    stoplist=frozenset(),
    doc_labels: dict[str, str] | None = None,
) -> UserModel:
    """Aggregate a user's training documents into one model.

    ``doc_labels`` maps tweet id to "positive"/"negative" and is required for
    rocchio aggregation; unlabeled documents count as positive. Documents
    that vanish under preprocessing are skipped.
    """
    train_docs = list(train_docs)
    if not train_docs:
        raise ValueError("empty training set")

    def label_of(t) -> str:
        if doc_labels is None:
            return "positive"
        return doc_labels.get(t.id, "positive")

    if config.family == "bag":
        pairs = []
        for t in train_docs:
            vec = _bag_doc_vector(t.text, config, stats, stoplist)
            if not vec.is_empty():
                pairs.append((vec, label_of(t)))
        if not pairs:
            raise ValueError("empty training set after preprocessing")
        if config.aggregation == "rocchio" and not any(
            lab == "positive" for _, lab in pairs
        ):
            raise ValueError("rocchio needs at least one positive training document")
        payload = bag.aggregate(
            pairs, config.aggregation, alpha=ROCCHIO_ALPHA, beta=ROCCHIO_BETA
        )
        return UserModel("bag", payload, source, config.config_id)

    if config.family == "graph":
        doc_graphs = []
        for t in train_docs:
            g = graphs.build_graph(
                doc_ngrams(t.text, config.unit, config.n, stoplist),
                config.n,
                unit=config.unit,
            )
            if not g.is_empty():
                doc_graphs.append(g)
        if not doc_graphs:
            raise ValueError("empty training set after preprocessing")
        return UserModel("graph", graphs.merge_graphs(doc_graphs), source, config.config_id)

    # topic family
    if topic_state is None:
        raise ValueError("missing topic state for topic-family user model")
    pos = []
    neg = []
    for t in train_docs:
        theta = infer_theta(topic_state, [tok for tok in tokenize(t.text) if tok not in stoplist])
        (neg if label_of(t) == "negative" else pos).append(theta)
    if config.aggregation == "rocchio":
        if not pos:
            raise ValueError("rocchio needs at least one positive training document")
        payload = ROCCHIO_ALPHA * np.mean(pos, axis=0)
        if neg:
            payload = payload - ROCCHIO_BETA * np.mean(neg, axis=0)
        payload = np.clip(payload, 0.0, None)
        total = payload.sum()
        payload = payload / total if total > 0 else np.mean(pos, axis=0)
    else:
        everything = pos + neg
        payload = np.mean(everything, axis=0)
    return UserModel("topic", payload, source, config.config_id)


def _score_topic(payload: np.ndarray, theta: np.ndarray) -> float:
    denom = np.linalg.norm(payload) * np.linalg.norm(theta)
    if denom == 0.0:
        return 0.0
    return float(np.dot(payload, theta) / denom)


def rank(
    user_model: UserModel,
    test_docs,
    config: Config,
    topic_state: TopicState | None = None,
    stats: bag.CorpusStats | None = None,
    stoplist=frozenset(),
) -> RankedList:
    """Score and sort a user's test documents.

    Each document is converted exactly as the user model was (same unit, n,
    weighting, stats or topic state). Ties break toward later timestamps,
    then ascending tweet id.
    """
    scored = []
    for tweet, relevant in test_docs:
        if user_model.family == "bag":
            vec = _bag_doc_vector(tweet.text, config, stats, stoplist)
            score = bag.vector_similarity(user_model.payload, vec, config.similarity)
        elif user_model.family == "graph":
            g = graphs.build_graph(
                doc_ngrams(tweet.text, config.unit, config.n, stoplist),
                config.n,
                unit=config.unit,
            )
            score = graphs.graph_similarity(user_model.payload, g, config.similarity)
        else:
            if topic_state is None:
                raise ValueError("missing topic state for topic-family ranking")
            theta = infer_theta(
                topic_state, [t for t in tokenize(tweet.text) if t not in stoplist]
            )
            score = _score_topic(user_model.payload, theta)
        scored.append((tweet, relevant, score))
    scored.sort(key=lambda item: (-item[2], -item[0].timestamp, item[0].id))
    return RankedList([RankEntry(t.id, s, rel) for t, rel, s in scored])


def baseline_chr(test_docs) -> RankedList:
    """Chronological ordering: latest first; scores are raw timestamps.

    Equal timestamps fall back to descending tweet id (two stable sorts)."""
    docs = sorted(test_docs, key=lambda pair: pair[0].id, reverse=True)
    docs.sort(key=lambda pair: pair[0].timestamp, reverse=True)
    return RankedList(
        [RankEntry(t.id, float(t.timestamp), rel) for t, rel in docs]
    )


def baseline_ran(test_docs, seed: int) -> RankedList:
    """Uniform random permutation; deterministic for a given seed."""
    docs = list(test_docs)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(docs))
    n = len(docs)
    entries = [
        RankEntry(docs[j][0].id, (n - i) / n, docs[j][1])
        for i, j in enumerate(order)
    ]
    return RankedList(entries)

"""Synthetic microblog corpora with known topical ground truth.

Users carry latent topic preferences; their posts draw tokens from disjoint
per-topic vocabularies; repost decisions follow preference-content alignment;
timestamps are uniform so recency carries no relevance signal. The returned
ground truth (topic-word distributions, user preferences, per-tweet topics)
feeds oracle checks.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..corpus import Corpus, SocialGraph, Tweet


@dataclass
class SynthSpec:
    num_users: int = 12
    num_topics: int = 4
    vocab_partition: int = 40          # words per topic, disjoint across topics
    docs_per_user: int = 40            # base post count, scaled per user
    tokens_per_doc: int = 9
    preference_sharpness: float = 8.0  # weight of the home topic; inf = pure
    seed: int = 0
    followees_forward: int = 4         # ring edges ahead (u follows u+1..u+fwd)
    followees_back: int = 2            # ring edges behind; makes reciprocal pairs
    retweet_base: float = 0.25
    hashtag_prob: float = 0.3
    decoration_prob: float = 0.05      # chance of a '?' or emoticon suffix
    time_horizon: int = 1_000_000
    max_retweet_delay: int = 1_000
    activity_cycle: tuple = (0.5, 1.0, 2.5)

    def validate(self) -> None:
        if self.num_users < 2:
            raise ValueError("need at least 2 users")
        if self.num_topics < 1:
            raise ValueError("need at least 1 topic")
        if self.vocab_partition < 1 or self.tokens_per_doc < 1 or self.docs_per_user < 1:
            raise ValueError("vocabulary, document and token counts must be positive")
        if not (0.0 < self.retweet_base <= 1.0):
            raise ValueError("retweet_base must be in (0, 1]")
        if self.followees_forward + self.followees_back >= self.num_users:
            raise ValueError("ring degree must be below num_users")
        if self.followees_forward < 1:
            raise ValueError("need at least one forward followee")


def parse_synth_spec(path) -> SynthSpec:
    """Read a flat key=value spec file ('#' comments allowed)."""
    known = {f.name: f.type for f in fields(SynthSpec)}
    kwargs = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            key = key.strip()
            if not eq or key not in known:
                raise ValueError(f"{path}:{lineno}: unknown synth key {key!r}")
            value = value.strip()
            if key == "activity_cycle":
                kwargs[key] = tuple(float(v) for v in value.split(","))
            elif key in ("preference_sharpness", "retweet_base", "hashtag_prob",
                         "decoration_prob"):
                kwargs[key] = float(value)
            else:
                kwargs[key] = int(value)
    return SynthSpec(**kwargs)


_DECORATIONS = ("?", ":)", ":(", ";)", "<3")


def generate_synthetic(spec: SynthSpec) -> tuple[Corpus, dict]:
    """Build (corpus, ground_truth); byte-identical for a fixed seed."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    K = spec.num_topics
    users = [f"u{idx:03d}" for idx in range(spec.num_users)]

    # ring graph: forward and backward edges; the overlap yields reciprocals
    graph = SocialGraph()
    for idx, user in enumerate(users):
        for step in range(1, spec.followees_forward + 1):
            graph.add_edge(user, users[(idx + step) % spec.num_users])
        for step in range(1, spec.followees_back + 1):
            graph.add_edge(user, users[(idx - step) % spec.num_users])

    # disjoint vocabulary partition and (sharpened) user preferences
    vocab = [
        [f"w{z}x{j}" for j in range(spec.vocab_partition)] for z in range(K)
    ]
    sharp = spec.preference_sharpness
    preferences = np.full((spec.num_users, K), 1.0)
    home_topics = np.array([idx % K for idx in range(spec.num_users)])
    if np.isinf(sharp):
        preferences = np.zeros((spec.num_users, K))
        preferences[np.arange(spec.num_users), home_topics] = 1.0
    else:
        preferences[np.arange(spec.num_users), home_topics] += sharp
        preferences /= preferences.sum(axis=1, keepdims=True)

    tweets: list[Tweet] = []
    tweet_topics: dict[str, int] = {}
    next_id = 0

    def new_id() -> str:
        nonlocal next_id
        next_id += 1
        return f"t{next_id:06d}"

    originals: dict[str, list[Tweet]] = {u: [] for u in users}
    for idx, user in enumerate(users):
        activity = spec.activity_cycle[idx % len(spec.activity_cycle)]
        n_docs = max(3, round(spec.docs_per_user * activity))
        for _ in range(n_docs):
            z = int(rng.choice(K, p=preferences[idx]))
            words = [
                vocab[z][int(w)]
                for w in rng.integers(0, spec.vocab_partition, size=spec.tokens_per_doc)
            ]
            if rng.random() < spec.hashtag_prob:
                words.append(f"#topic{z}")
            if rng.random() < spec.decoration_prob:
                words.append(_DECORATIONS[int(rng.integers(len(_DECORATIONS)))])
            ts = int(rng.integers(0, spec.time_horizon))
            tweet = Tweet(
                id=new_id(), author=user, timestamp=ts, text=" ".join(words)
            )
            tweets.append(tweet)
            originals[user].append(tweet)
            tweet_topics[tweet.id] = z

    # repost decisions: probability grows with the reader's preference for
    # the post's topic; at infinite sharpness only exact matches survive
    for idx, user in enumerate(users):
        incoming = []
        for followee in sorted(graph.followees_of(user)):
            incoming.extend(originals[followee])
        incoming.sort(key=lambda t: (t.timestamp, t.id))
        for post in incoming:
            z = tweet_topics[post.id]
            p_retweet = min(1.0, spec.retweet_base * K * preferences[idx, z])
            if rng.random() < p_retweet:
                delay = int(rng.integers(1, spec.max_retweet_delay + 1))
                retweet = Tweet(
                    id=new_id(),
                    author=user,
                    timestamp=post.timestamp + delay,
                    text=post.text,
                    retweet_of=post.author,
                )
                tweets.append(retweet)
                tweet_topics[retweet.id] = z

    phi = np.zeros((K, K * spec.vocab_partition))
    all_words = [w for part in vocab for w in part]
    word_index = {w: i for i, w in enumerate(all_words)}
    for z, part in enumerate(vocab):
        for w in part:
            phi[z, word_index[w]] = 1.0 / spec.vocab_partition

    corpus = Corpus(tweets, graph)
    ground_truth = {
        "phi": phi,
        "vocabulary": all_words,
        "preferences": preferences,
        "home_topics": home_topics,
        "tweet_topics": tweet_topics,
    }
    return corpus, ground_truth

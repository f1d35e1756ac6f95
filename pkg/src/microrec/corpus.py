"""Tweet corpus handling: ingestion, tokenization, representation sources,
user categories and chronological train/test splits."""

from __future__ import annotations

import json
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Emoticon lexicon. Keys are the surface forms recognised by the tokenizer
# (text is lowercased first, so ":D" arrives as ":d"); values name the
# emoticon category. Nose variants map to the same category.
EMOTICON_CATEGORIES = {
    ":)": "smile", ":-)": "smile",
    ":(": "frown", ":-(": "frown",
    ";)": "wink", ";-)": "wink",
    ":d": "big_grin", ":-d": "big_grin",
    "<3": "heart",
    ":o": "surprise", ":-o": "surprise",
    ":/": "awkward", ":-/": "awkward",
    ":s": "confused", ":-s": "confused",
}

# Canonical glyph per category, used e.g. for label naming.
CATEGORY_GLYPHS = {
    "smile": ":)", "frown": ":(", "wink": ";)", "big_grin": ":d",
    "heart": "<3", "surprise": ":o", "awkward": ":/", "confused": ":s",
}

_SQUEEZE_RE = re.compile(r"(.)\1{2,}", re.DOTALL)

# URLs must be tried before emoticons so "http://" does not shed a ":/".
# Emoticons carry a lookahead so ":dog" is not split into ":d" + "og".
_TOKEN_RE = re.compile(
    r"https?://\S+"
    r"|www\.\S+"
    r"|[@#]\w+"
    r"|(?::-?[)(dos/]|;-?\)|<3)(?!\w)"
    r"|\w+"
)


def squeeze_repeats(text: str) -> str:
    """Collapse any run of 3+ identical characters down to 2."""
    return _SQUEEZE_RE.sub(r"\1\1", text)


def tokenize(text: str) -> list[str]:
    """Split a post into lowercase tokens.

    URLs, #hashtags, @mentions and the emoticons of EMOTICON_CATEGORIES
    survive as single tokens; any other punctuation separates tokens and is
    dropped. Runs of 3+ identical characters are squeezed to 2 first, so
    "Yeeees!" becomes ["yees"].
    """
    return _TOKEN_RE.findall(squeeze_repeats(text.lower()))


def char_ngrams(text: str, n: int) -> list[str]:
    """All contiguous length-n substrings of the lowercased text, in order."""
    if n < 1:
        raise ValueError(f"n-gram size must be >= 1, got {n}")
    text = text.lower()
    return [text[i:i + n] for i in range(len(text) - n + 1)]


def token_ngrams(tokens: list[str], n: int) -> list[str]:
    """Length-n token windows, joined with single spaces."""
    if n < 1:
        raise ValueError(f"n-gram size must be >= 1, got {n}")
    if n == 1:
        return list(tokens)
    return [" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


class Source(Enum):
    """Representation source: which tweets feed a user's model.

    Atomic kinds: the user's own posts (T), her reposts (R), everything her
    followees post (E), everything her followers post (F), and the posts of
    reciprocal connections (C). Composite kinds are pairwise unions.
    """

    T = "T"
    R = "R"
    E = "E"
    F = "F"
    C = "C"
    TR = "TR"
    TE = "TE"
    RE = "RE"
    EF = "EF"
    TF = "TF"
    RF = "RF"
    TC = "TC"
    RC = "RC"

    @property
    def atoms(self) -> tuple["Source", ...]:
        if len(self.value) == 1:
            return (self,)
        return tuple(Source(ch) for ch in self.value)


ALL_SOURCES = tuple(Source)

# Sources whose document sets contain both endorsed and non-endorsed posts,
# i.e. the only ones where relevance-feedback aggregation is meaningful.
FEEDBACK_SOURCES = frozenset(
    {Source.C, Source.E, Source.TE, Source.RE, Source.TC, Source.RC, Source.EF}
)


@dataclass(frozen=True)
class Tweet:
    """A single post. ``retweet_of`` holds the original author's user id when
    the post is a repost; None marks an original post."""

    id: str
    author: str
    timestamp: int
    text: str
    retweet_of: str | None = None

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of is not None

    def hashtags(self) -> list[str]:
        return [t for t in tokenize(self.text) if t.startswith("#") and len(t) > 1]


class SocialGraph:
    """Directed follow graph with symmetric follower/followee views."""

    def __init__(self, edges=()):
        self.followees: dict[str, set[str]] = defaultdict(set)
        self.followers: dict[str, set[str]] = defaultdict(set)
        for follower, followee in edges:
            self.add_edge(follower, followee)

    def add_edge(self, follower: str, followee: str) -> None:
        if follower == followee:
            raise ValueError(f"self-edge rejected for user {follower!r}")
        self.followees[follower].add(followee)
        self.followers[followee].add(follower)

    def followees_of(self, user: str) -> set[str]:
        return self.followees.get(user, set())

    def followers_of(self, user: str) -> set[str]:
        return self.followers.get(user, set())

    def reciprocal_of(self, user: str) -> set[str]:
        return self.followees_of(user) & self.followers_of(user)

    def knows(self, user: str) -> bool:
        return user in self.followees or user in self.followers

    def __len__(self) -> int:
        return sum(len(v) for v in self.followees.values())


class Corpus:
    """Immutable collection of tweets plus the social graph.

    ``stoplist`` (the top-k most frequent tokens of the training phase) and
    ``vocab_stats`` are attached by the harness once splits are known; all
    read operations are pure and safe to call from concurrent workers.
    """

    def __init__(self, tweets, graph: SocialGraph, stoplist=frozenset(), vocab_stats=None):
        self.tweets: list[Tweet] = list(tweets)
        self.graph = graph
        self.stoplist = frozenset(stoplist)
        self.vocab_stats = vocab_stats
        self.by_id: dict[str, Tweet] = {}
        self.by_author: dict[str, list[Tweet]] = defaultdict(list)
        for t in self.tweets:
            if t.id in self.by_id:
                raise ValueError(f"duplicate tweet id {t.id!r}")
            self.by_id[t.id] = t
            self.by_author[t.author].append(t)
        for posts in self.by_author.values():
            posts.sort(key=lambda t: (t.timestamp, t.id))
        self._endorsed_cache: dict[str, frozenset[str]] = {}

    def users(self) -> list[str]:
        seen = set(self.by_author)
        seen.update(self.graph.followees)
        seen.update(self.graph.followers)
        return sorted(seen)

    def knows_user(self, user: str) -> bool:
        return user in self.by_author or self.graph.knows(user)

    def own_tweets(self, user: str) -> list[Tweet]:
        return [t for t in self.by_author.get(user, []) if not t.is_retweet]

    def retweets(self, user: str) -> list[Tweet]:
        return [t for t in self.by_author.get(user, []) if t.is_retweet]

    def posts_of_users(self, users) -> list[Tweet]:
        out = []
        for u in sorted(users):
            out.extend(self.by_author.get(u, []))
        return out

    def endorsed_ids(self, user: str) -> frozenset[str]:
        """Ids of other users' tweets this user reposted.

        A repost stores only the original author, so originals are matched by
        (author, text) equality against the user's reposts.
        """
        cached = self._endorsed_cache.get(user)
        if cached is not None:
            return cached
        wanted = {(r.retweet_of, r.text) for r in self.retweets(user)}
        ids = frozenset(
            t.id
            for author, _ in wanted
            for t in self.by_author.get(author, [])
            if (t.author, t.text) in wanted
        )
        self._endorsed_cache[user] = ids
        return ids


def build_source(corpus: Corpus, user: str, source: Source) -> list[Tweet]:
    """The document set a source contributes for a user, deduplicated by id
    and ordered by (timestamp, id)."""
    if not corpus.knows_user(user):
        raise KeyError(f"unknown user {user!r}")
    seen: dict[str, Tweet] = {}
    for atom in source.atoms:
        if atom is Source.T:
            picked = corpus.own_tweets(user)
        elif atom is Source.R:
            picked = corpus.retweets(user)
        elif atom is Source.E:
            picked = corpus.posts_of_users(corpus.graph.followees_of(user))
        elif atom is Source.F:
            picked = corpus.posts_of_users(corpus.graph.followers_of(user))
        elif atom is Source.C:
            picked = corpus.posts_of_users(corpus.graph.reciprocal_of(user))
        else:  # pragma: no cover - enum is exhaustive
            raise ValueError(f"not an atomic source: {atom}")
        for t in picked:
            seen.setdefault(t.id, t)
    return sorted(seen.values(), key=lambda t: (t.timestamp, t.id))


@dataclass(frozen=True)
class UserCategory:
    """Posting ratio (outgoing / incoming posts) and the resulting class:
    IS below 0.5, IP above 2, BU in between (boundaries inclusive)."""

    ratio: float
    category: str


def classify_ratio(outgoing: int, incoming: int) -> UserCategory:
    if incoming <= 0:
        raise ValueError("undefined ratio: user receives no tweets")
    # Integer comparisons keep the 0.5 / 2 boundaries exact.
    if 2 * outgoing < incoming:
        cat = "IS"
    elif outgoing > 2 * incoming:
        cat = "IP"
    else:
        cat = "BU"
    return UserCategory(ratio=outgoing / incoming, category=cat)


def posting_ratio(corpus: Corpus, user: str) -> UserCategory:
    """Classify a user by her outgoing (T+R) to incoming (E) post ratio."""
    outgoing = len(corpus.by_author.get(user, []))
    incoming = len(build_source(corpus, user, Source.E))
    return classify_ratio(outgoing, incoming)


def compute_stoplist(training_tweets, k: int) -> set[str]:
    """The k tokens with the highest total occurrence count; ties broken
    lexicographically ascending."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return set()
    counts = Counter()
    for t in training_tweets:
        counts.update(tokenize(t.text))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return {tok for tok, _ in ranked[:k]}


@dataclass
class TrainTestSplit:
    """Per-user chronological split.

    Test positives are the user's most recent reposts (20% by default, at
    least one); negatives are sampled from her unretweeted incoming posts of
    the testing phase. Train documents of every source are restricted to
    timestamps strictly before ``split_timestamp``.
    """

    user: str
    split_timestamp: int
    train_docs: dict[Source, list[Tweet]]
    test_docs: list[tuple[Tweet, bool]]
    warnings: list[str] = field(default_factory=list)

    @property
    def positives(self) -> list[Tweet]:
        return [t for t, rel in self.test_docs if rel]

    @property
    def negatives(self) -> list[Tweet]:
        return [t for t, rel in self.test_docs if not rel]


def split_train_test(
    corpus: Corpus,
    user: str,
    negative_ratio: int = 4,
    rng_seed: int = 0,
    test_fraction: float = 0.2,
    sources=ALL_SOURCES,
) -> TrainTestSplit:
    """Build the train/test split for one user.

    Raises ValueError when the user has fewer than 5 reposts. A too-small
    negative pool is recorded as a warning, not an error.
    """
    if negative_ratio < 1:
        raise ValueError("negative_ratio must be >= 1")
    rts = sorted(corpus.retweets(user), key=lambda t: (t.timestamp, t.id))
    if len(rts) < 5:
        raise ValueError(f"user {user!r} has {len(rts)} retweets, need >= 5")

    n_pos = math.ceil(test_fraction * len(rts))
    positives = rts[-n_pos:]
    split_ts = positives[0].timestamp

    endorsed = corpus.endorsed_ids(user)
    pool = [
        t
        for t in build_source(corpus, user, Source.E)
        if t.timestamp >= split_ts and t.id not in endorsed
    ]

    warnings: list[str] = []
    wanted = negative_ratio * n_pos
    rng = np.random.default_rng(rng_seed)
    if len(pool) <= wanted:
        negatives = pool
        if len(pool) < wanted:
            warnings.append(
                f"negative pool exhausted for {user!r}: "
                f"wanted {wanted}, found {len(pool)}"
            )
    else:
        idx = rng.choice(len(pool), size=wanted, replace=False)
        negatives = [pool[i] for i in sorted(idx)]

    train_docs = {
        src: [t for t in build_source(corpus, user, src) if t.timestamp < split_ts]
        for src in sources
    }
    test_docs = [(t, True) for t in reversed(positives)]
    test_docs += [(t, False) for t in negatives]
    return TrainTestSplit(
        user=user,
        split_timestamp=split_ts,
        train_docs=train_docs,
        test_docs=test_docs,
        warnings=warnings,
    )


def load_tweets_jsonl(path) -> list[Tweet]:
    """Read tweets from a JSON-lines file with keys id, author, ts, text,
    retweet_of (nullable)."""
    tweets = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                tweets.append(
                    Tweet(
                        id=str(obj["id"]),
                        author=str(obj["author"]),
                        timestamp=int(obj["ts"]),
                        text=str(obj["text"]),
                        retweet_of=(
                            None if obj.get("retweet_of") is None
                            else str(obj["retweet_of"])
                        ),
                    )
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad tweet record: {exc}") from exc
    return tweets


def save_tweets_jsonl(tweets, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in tweets:
            fh.write(
                json.dumps(
                    {
                        "id": t.id,
                        "author": t.author,
                        "ts": t.timestamp,
                        "text": t.text,
                        "retweet_of": t.retweet_of,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_graph_tsv(path) -> SocialGraph:
    """Read a follower<TAB>followee edge list."""
    graph = SocialGraph()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
            graph.add_edge(parts[0], parts[1])
    return graph


def save_graph_tsv(graph: SocialGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for follower in sorted(graph.followees):
            for followee in sorted(graph.followees[follower]):
                fh.write(f"{follower}\t{followee}\n")

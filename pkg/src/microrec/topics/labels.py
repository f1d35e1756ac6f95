"""Observable label extraction for supervised topic modeling: frequent
hashtags, the question mark, emoticon categories and the leading @mention."""

from __future__ import annotations

import zlib
from collections import Counter
from dataclasses import dataclass

from ..corpus import CATEGORY_GLYPHS, EMOTICON_CATEGORIES, tokenize

# Categories frequent enough to warrant 10 sub-labels each; the suffix is a
# stable hash of the tweet id. The remaining emoticon categories and hashtag
# labels carry no variations.
VARIED_CATEGORIES = ("smile", "frown", "wink", "awkward")
FIXED_CATEGORIES = ("big_grin", "heart", "surprise", "confused")
N_VARIATIONS = 10


@dataclass
class LabelSet:
    """Global label catalogue and the labels observed per tweet id."""

    labels: frozenset[str]
    per_doc: dict[str, frozenset[str]]

    def labels_for_tweets(self, tweet_ids) -> frozenset[str]:
        out: set[str] = set()
        for tid in tweet_ids:
            out.update(self.per_doc.get(tid, ()))
        return frozenset(out)


def _variation(tweet_id: str) -> int:
    return zlib.crc32(tweet_id.encode("utf-8")) % N_VARIATIONS


def extract_llda_labels(tweets, hashtag_min_count: int = 30) -> LabelSet:
    """Collect per-tweet labels.

    One label per hashtag occurring strictly more than ``hashtag_min_count``
    times across the tweets; "?" when the raw text holds a question mark;
    one label per emoticon category present; "@user" when a mention is the
    first token. The busy label families fan out into 10 variations keyed by
    a hash of the tweet id (e.g. ":(-0" .. ":(-9").
    """
    if hashtag_min_count < 1:
        raise ValueError("hashtag_min_count must be >= 1")
    tweets = list(tweets)
    token_lists = [tokenize(t.text) for t in tweets]

    tag_counts = Counter()
    for toks in token_lists:
        tag_counts.update(t for t in toks if t.startswith("#") and len(t) > 1)
    frequent_tags = {t for t, c in tag_counts.items() if c > hashtag_min_count}

    per_doc: dict[str, frozenset[str]] = {}
    seen: set[str] = set()
    for tweet, toks in zip(tweets, token_lists):
        var = _variation(tweet.id)
        labels: set[str] = set()
        labels.update(t for t in toks if t in frequent_tags)
        if "?" in tweet.text:
            labels.add(f"?-{var}")
        for category in {EMOTICON_CATEGORIES[t] for t in toks if t in EMOTICON_CATEGORIES}:
            glyph = CATEGORY_GLYPHS[category]
            if category in VARIED_CATEGORIES:
                labels.add(f"{glyph}-{var}")
            else:
                labels.add(glyph)
        if toks and toks[0].startswith("@") and len(toks[0]) > 1:
            labels.add(f"@user-{var}")
        if labels:
            per_doc[tweet.id] = frozenset(labels)
            seen.update(labels)
    return LabelSet(labels=frozenset(seen), per_doc=per_doc)

"""Pooling schemes that fight short-text sparsity by aggregating tweets into
pseudo-documents, plus biterm extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import tokenize

POOLING_SCHEMES = ("none", "user", "hashtag")


@dataclass
class PooledCorpus:
    """Token documents fed to a topic model.

    none: one document per tweet. user: one document per author. hashtag: one
    document per hashtag (a tweet with k hashtags contributes its tokens to
    all k) plus one document per hashtag-less tweet. ``provenance`` records
    the contributing tweet ids per document.
    """

    scheme: str
    docs: list[list[str]] = field(default_factory=list)
    provenance: list[list[str]] = field(default_factory=list)
    doc_keys: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.docs)

    def vocabulary(self) -> dict[str, int]:
        """Stable token -> column index map (sorted tokens)."""
        seen = set()
        for doc in self.docs:
            seen.update(doc)
        return {tok: i for i, tok in enumerate(sorted(seen))}


def pool(tweets, scheme: str, stoplist=frozenset()) -> PooledCorpus:
    """Aggregate tokenized tweets into pseudo-documents.

    The hashtag token itself stays inside the document unless it is on the
    stoplist; stoplisted tokens are dropped everywhere.
    """
    if scheme not in POOLING_SCHEMES:
        raise ValueError(f"unknown pooling scheme {scheme!r}")
    tweets = list(tweets)
    tokenized = [[t for t in tokenize(tw.text) if t not in stoplist] for tw in tweets]

    pooled = PooledCorpus(scheme=scheme)
    if scheme == "none":
        for tw, toks in zip(tweets, tokenized):
            pooled.docs.append(toks)
            pooled.provenance.append([tw.id])
            pooled.doc_keys.append(f"tweet:{tw.id}")
        return pooled

    if scheme == "user":
        by_user: dict[str, tuple[list[str], list[str]]] = {}
        for tw, toks in zip(tweets, tokenized):
            doc, prov = by_user.setdefault(tw.author, ([], []))
            doc.extend(toks)
            prov.append(tw.id)
        for user in sorted(by_user):
            doc, prov = by_user[user]
            pooled.docs.append(doc)
            pooled.provenance.append(prov)
            pooled.doc_keys.append(f"user:{user}")
        return pooled

    # hashtag pooling
    by_tag: dict[str, tuple[list[str], list[str]]] = {}
    untagged: list[tuple[str, list[str]]] = []
    for tw, toks in zip(tweets, tokenized):
        tags = sorted({t for t in tokenize(tw.text) if t.startswith("#") and len(t) > 1})
        if not tags:
            untagged.append((tw.id, toks))
            continue
        for tag in tags:
            doc, prov = by_tag.setdefault(tag, ([], []))
            doc.extend(toks)
            prov.append(tw.id)
    for tag in sorted(by_tag):
        doc, prov = by_tag[tag]
        pooled.docs.append(doc)
        pooled.provenance.append(prov)
        pooled.doc_keys.append(f"hashtag:{tag}")
    for tweet_id, toks in untagged:
        pooled.docs.append(toks)
        pooled.provenance.append([tweet_id])
        pooled.doc_keys.append(f"tweet:{tweet_id}")
    return pooled


def extract_biterms(tokens, window=None) -> list[tuple[str, str]]:
    """Unordered word pairs from distinct token positions.

    window=None pairs every position with every later one (whole-document
    mode); an integer window r >= 2 pairs positions i < j with j - i < r.
    Pairs are value-canonicalized, duplicates retained.
    """
    if window is not None and window < 2:
        raise ValueError(f"biterm window must be >= 2, got {window}")
    tokens = list(tokens)
    out: list[tuple[str, str]] = []
    for i, a in enumerate(tokens):
        stop = len(tokens) if window is None else min(len(tokens), i + window)
        for j in range(i + 1, stop):
            b = tokens[j]
            out.append((a, b) if a <= b else (b, a))
    return out

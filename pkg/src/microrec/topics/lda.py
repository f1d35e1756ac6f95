"""Collapsed Gibbs samplers for latent Dirichlet allocation and its
label-restricted variant.

Both run the same sweep kernel; the label-restricted sampler simply narrows
each document's candidate topic list to its observed labels plus the shared
latent topics. With no labels and the same seed the two produce bitwise
identical states.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .labels import LabelSet
from .pooling import PooledCorpus
from .state import TopicState


def _token_arrays(pooled: PooledCorpus, vocab: dict[str, int]):
    doc_of = []
    word_of = []
    for d, doc in enumerate(pooled.docs):
        for tok in doc:
            doc_of.append(d)
            word_of.append(vocab[tok])
    return (
        np.asarray(doc_of, dtype=np.int64),
        np.asarray(word_of, dtype=np.int64),
    )


def _train_restricted(
    pooled: PooledCorpus,
    topic_ids: list[str],
    candidates: list[list[int]],
    alpha: float,
    beta: float,
    iterations: int,
    seed: int,
    family: str,
    hyper: dict,
) -> TopicState:
    """Run the collapsed sampler with per-document candidate topic lists and
    return estimators from the final sample."""
    vocab = pooled.vocabulary()
    if not vocab:
        raise ValueError("empty corpus: no vocabulary to model")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    K = len(topic_ids)
    V = len(vocab)
    n_docs = len(pooled)
    for d, cand in enumerate(candidates):
        if not cand:
            raise ValueError(f"document {d} has an empty candidate topic set")

    doc_of, word_of = _token_arrays(pooled, vocab)
    n_tokens = doc_of.shape[0]
    cand_off = np.zeros(n_docs + 1, dtype=np.int64)
    for d, cand in enumerate(candidates):
        cand_off[d + 1] = cand_off[d] + len(cand)
    cand_flat = np.asarray([k for cand in candidates for k in cand], dtype=np.int64)
    widths = np.diff(cand_off)

    rng = np.random.default_rng(seed)
    z = np.empty(n_tokens, dtype=np.int64)
    for t in range(n_tokens):
        d = doc_of[t]
        z[t] = cand_flat[cand_off[d] + rng.integers(widths[d])]

    n_dk = np.zeros((n_docs, K), dtype=np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    n_k = np.zeros(K, dtype=np.int64)
    np.add.at(n_dk, (doc_of, z), 1)
    np.add.at(n_kw, (z, word_of), 1)
    np.add.at(n_k, z, 1)

    probs = np.empty(int(widths.max()), dtype=np.float64)
    sweep = kernels.active().sweep_topic_assignments
    for _ in range(iterations):
        uniforms = rng.random(n_tokens)
        sweep(
            doc_of, word_of, z, cand_flat, cand_off,
            n_dk, n_kw, n_k, alpha, beta, uniforms, probs,
        )

    theta = np.zeros((n_docs, K))
    doc_len = n_dk.sum(axis=1)
    for d, cand in enumerate(candidates):
        idx = np.asarray(cand, dtype=np.int64)
        theta[d, idx] = (n_dk[d, idx] + alpha) / (doc_len[d] + len(cand) * alpha)
    phi = (n_kw + beta) / (n_k + V * beta)[:, None]

    return TopicState(
        family=family,
        vocab=vocab,
        topic_ids=list(topic_ids),
        phi=phi,
        theta=theta,
        hyper=hyper,
        rng_seed=seed,
        assignments={"z": z, "doc_of": doc_of, "word_of": word_of, "n_dk": n_dk},
    )


def train_lda(
    pooled: PooledCorpus,
    num_topics: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicState:
    """Collapsed Gibbs LDA; alpha defaults to 50 / num_topics."""
    if num_topics < 1:
        raise ValueError("num_topics must be >= 1")
    if alpha is None:
        alpha = 50.0 / num_topics
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    topic_ids = [f"topic-{k}" for k in range(num_topics)]
    full = list(range(num_topics))
    candidates = [full for _ in range(len(pooled))]
    hyper = {
        "alpha": alpha,
        "beta": beta,
        "num_topics": num_topics,
        "iterations": iterations,
    }
    return _train_restricted(
        pooled, topic_ids, candidates, alpha, beta, iterations, seed, "lda", hyper
    )


def train_llda(
    pooled: PooledCorpus,
    labels: LabelSet,
    num_latent_topics: int,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicState:
    """Label-restricted collapsed Gibbs sampler.

    Each document may assign its tokens only to its observed labels (resolved
    through pooled provenance) plus ``num_latent_topics`` shared latent
    topics. alpha defaults to 50 / num_latent_topics when there are latent
    topics, else 1.0.
    """
    if num_latent_topics < 0:
        raise ValueError("num_latent_topics must be >= 0")
    doc_labels = [labels.labels_for_tweets(prov) for prov in pooled.provenance]
    used = sorted(set().union(frozenset(), *doc_labels))
    topic_ids = used + [f"latent-{i}" for i in range(num_latent_topics)]
    if not topic_ids:
        raise ValueError("no labels and no latent topics: nothing to sample")
    index = {tid: k for k, tid in enumerate(topic_ids)}
    latent = list(range(len(used), len(topic_ids)))
    candidates = []
    for lab in doc_labels:
        cand = sorted(index[name] for name in lab) + latent
        candidates.append(cand)
    if alpha is None:
        alpha = 50.0 / num_latent_topics if num_latent_topics > 0 else 1.0
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    hyper = {
        "alpha": alpha,
        "beta": beta,
        "num_latent_topics": num_latent_topics,
        "iterations": iterations,
    }
    return _train_restricted(
        pooled, topic_ids, candidates, alpha, beta, iterations, seed, "llda", hyper
    )

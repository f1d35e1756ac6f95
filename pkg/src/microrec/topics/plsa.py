"""Probabilistic latent semantic analysis trained with EM.

Kept out of the default configuration grid (its per-document parameter table
is the memory hog that disqualified it from large-scale use) but fully
functional for small corpora.
"""

from __future__ import annotations

import numpy as np

from .pooling import PooledCorpus
from .state import TopicState


def _doc_term_entries(pooled: PooledCorpus, vocab: dict[str, int]):
    rows = []
    cols = []
    vals = []
    for d, doc in enumerate(pooled.docs):
        counts: dict[int, int] = {}
        for tok in doc:
            w = vocab[tok]
            counts[w] = counts.get(w, 0) + 1
        for w in sorted(counts):
            rows.append(d)
            cols.append(w)
            vals.append(counts[w])
    return (
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=np.float64),
    )


def train_plsa(
    pooled: PooledCorpus,
    num_topics: int,
    iterations: int = 100,
    seed: int = 0,
) -> TopicState:
    """EM fixed point for P(z|d), P(w|z); the training log likelihood is
    recorded per iteration and is non-decreasing."""
    if num_topics < 1:
        raise ValueError("num_topics must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    vocab = pooled.vocabulary()
    if not vocab:
        raise ValueError("empty corpus: no vocabulary to model")
    K = num_topics
    V = len(vocab)
    n_docs = len(pooled)

    rows, cols, vals = _doc_term_entries(pooled, vocab)
    rng = np.random.default_rng(seed)
    theta = rng.random((n_docs, K)) + 0.1
    theta /= theta.sum(axis=1, keepdims=True)
    phi = rng.random((K, V)) + 0.1
    phi /= phi.sum(axis=1, keepdims=True)

    log_likelihood = []
    for _ in range(iterations):
        # responsibilities per nonzero (d, w) cell
        q = theta[rows] * phi[:, cols].T
        totals = q.sum(axis=1)
        log_likelihood.append(float(np.dot(vals, np.log(totals))))
        q *= (vals / totals)[:, None]

        theta_new = np.zeros_like(theta)
        np.add.at(theta_new, rows, q)
        doc_mass = theta_new.sum(axis=1, keepdims=True)
        empty_docs = doc_mass[:, 0] == 0.0
        doc_mass[empty_docs] = 1.0
        theta = theta_new / doc_mass
        theta[empty_docs] = 1.0 / K  # tokenless documents carry no evidence

        phi_new = np.zeros_like(phi)
        np.add.at(phi_new.T, cols, q)
        topic_mass = phi_new.sum(axis=1, keepdims=True)
        starved = topic_mass[:, 0] == 0.0
        topic_mass[starved] = 1.0
        phi = phi_new / topic_mass
        phi[starved] = 1.0 / V

    return TopicState(
        family="plsa",
        vocab=vocab,
        topic_ids=[f"topic-{k}" for k in range(K)],
        phi=phi,
        theta=theta,
        hyper={"num_topics": K, "iterations": iterations},
        rng_seed=seed,
        diagnostics={"log_likelihood": log_likelihood},
    )

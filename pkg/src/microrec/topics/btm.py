"""Biterm topic model: Gibbs sampling over word-pair topic assignments drawn
from a single corpus-level topic mixture."""

from __future__ import annotations

import numpy as np

from . import kernels
from .pooling import PooledCorpus, extract_biterms
from .state import TopicState


def train_btm(
    pooled: PooledCorpus,
    num_topics: int,
    alpha: float | None = None,
    beta: float = 0.01,
    window: int | None = None,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicState:
    """Train on the biterm multiset of the pooled corpus.

    window=None pairs all token positions of a document (the right mode for
    unpooled tweets); an integer window r pairs positions closer than r.
    theta is the single corpus-level topic mixture, stored as one row.
    """
    if num_topics < 1:
        raise ValueError("num_topics must be >= 1")
    if alpha is None:
        alpha = 50.0 / num_topics
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    vocab = pooled.vocabulary()
    if not vocab:
        raise ValueError("empty corpus: no vocabulary to model")

    w1 = []
    w2 = []
    for doc in pooled.docs:
        for a, b in extract_biterms(doc, window):
            w1.append(vocab[a])
            w2.append(vocab[b])
    if not w1:
        raise ValueError("no biterms: every document has fewer than 2 tokens")
    w1 = np.asarray(w1, dtype=np.int64)
    w2 = np.asarray(w2, dtype=np.int64)
    n_biterms = w1.shape[0]
    K = num_topics
    V = len(vocab)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=n_biterms)
    n_z = np.bincount(z, minlength=K).astype(np.int64)
    n_zw = np.zeros((K, V), dtype=np.int64)
    np.add.at(n_zw, (z, w1), 1)
    np.add.at(n_zw, (z, w2), 1)

    probs = np.empty(K, dtype=np.float64)
    sweep = kernels.active().sweep_biterm_assignments
    for _ in range(iterations):
        uniforms = rng.random(n_biterms)
        sweep(w1, w2, z, n_z, n_zw, alpha, beta, uniforms, probs)

    theta = (n_z + alpha) / (n_biterms + K * alpha)
    phi = (n_zw + beta) / (2 * n_z + V * beta)[:, None]
    return TopicState(
        family="btm",
        vocab=vocab,
        topic_ids=[f"topic-{k}" for k in range(K)],
        phi=phi,
        theta=theta[None, :],
        hyper={
            "alpha": alpha,
            "beta": beta,
            "num_topics": K,
            "iterations": iterations,
            "window": window,
        },
        rng_seed=seed,
        assignments={"z": z, "w1": w1, "w2": w2},
    )

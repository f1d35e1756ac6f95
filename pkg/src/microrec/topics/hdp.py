"""Hierarchical Dirichlet process topic model.

Direct-assignment Chinese-restaurant-franchise Gibbs sampler: tokens are
assigned straight to global dishes (topics), per-restaurant table counts are
resampled from the Chinese restaurant table distribution, and the global
dish weights get a Dirichlet update. The topic count grows and shrinks with
the data. Dynamic shapes keep this off the JIT path; plain numpy is fast
enough at the corpus sizes the harness runs.
"""

from __future__ import annotations

import numpy as np

from .pooling import PooledCorpus
from .state import TopicState


def _sample_index(rng, weights: np.ndarray) -> int:
    total = weights.sum()
    r = rng.random() * total
    return int(np.searchsorted(np.cumsum(weights), r, side="right").clip(0, len(weights) - 1))


def _crt_tables(rng, count: int, concentration: float) -> int:
    """Number of tables from a Chinese restaurant table distribution with
    ``count`` customers and the given concentration."""
    if count <= 0:
        return 0
    tables = 1
    for i in range(1, count):
        if rng.random() < concentration / (concentration + i):
            tables += 1
    return tables


def train_hdp(
    pooled: PooledCorpus,
    alpha: float = 1.0,
    gamma: float = 1.0,
    beta: float = 0.1,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicState:
    """Infer topics with an unbounded topic count.

    alpha concentrates the per-document draws, gamma the corpus-level draw,
    beta is the symmetric prior on topic-word distributions. Estimators
    follow the LDA form over the realized topic set.
    """
    if alpha <= 0 or gamma <= 0 or beta <= 0:
        raise ValueError("alpha, gamma and beta must be positive")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    vocab = pooled.vocabulary()
    if not vocab:
        raise ValueError("empty corpus: no vocabulary to model")
    V = len(vocab)
    docs = [np.asarray([vocab[t] for t in doc], dtype=np.int64) for doc in pooled.docs]
    n_docs = len(docs)
    rng = np.random.default_rng(seed)

    # start from one shared topic; the sampler grows the set as needed
    K = 1
    z = [np.zeros(len(doc), dtype=np.int64) for doc in docs]
    n_dk = np.zeros((n_docs, K), dtype=np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    n_k = np.zeros(K, dtype=np.int64)
    for d, doc in enumerate(docs):
        n_dk[d, 0] = len(doc)
        np.add.at(n_kw[0], doc, 1)
        n_k[0] += len(doc)

    def resample_global_weights():
        nonlocal weights, new_mass
        tables = np.zeros(K, dtype=np.int64)
        for d in range(n_docs):
            for k in range(K):
                if n_dk[d, k] > 0:
                    tables[k] += _crt_tables(rng, int(n_dk[d, k]), alpha * weights[k])
        draw = rng.dirichlet(np.concatenate([tables + 1e-12, [gamma]]))
        weights = draw[:K]
        new_mass = draw[K]

    weights = np.array([1.0])
    new_mass = 1.0
    resample_global_weights()

    for _ in range(iterations):
        for d, doc in enumerate(docs):
            zs = z[d]
            for t in range(len(doc)):
                w = doc[t]
                k_old = zs[t]
                n_dk[d, k_old] -= 1
                n_kw[k_old, w] -= 1
                n_k[k_old] -= 1

                p = (n_dk[d] + alpha * weights) * (n_kw[:, w] + beta) / (n_k + V * beta)
                p_new = alpha * new_mass / V
                probs = np.append(p, p_new)
                k = _sample_index(rng, probs)
                if k == K:
                    # new dish: grow counts, split the leftover stick mass
                    n_dk = np.hstack([n_dk, np.zeros((n_docs, 1), dtype=np.int64)])
                    n_kw = np.vstack([n_kw, np.zeros((1, V), dtype=np.int64)])
                    n_k = np.append(n_k, 0)
                    cut = rng.beta(1.0, gamma)
                    weights = np.append(weights, cut * new_mass)
                    new_mass *= 1.0 - cut
                    K += 1
                zs[t] = k
                n_dk[d, k] += 1
                n_kw[k, w] += 1
                n_k[k] += 1

        # drop empty topics before the global weight update
        alive = n_k > 0
        if not alive.all():
            remap = -np.ones(K, dtype=np.int64)
            remap[alive] = np.arange(int(alive.sum()))
            for zs in z:
                zs[:] = remap[zs]
            n_dk = n_dk[:, alive]
            n_kw = n_kw[alive]
            n_k = n_k[alive]
            new_mass += weights[~alive].sum()
            weights = weights[alive]
            K = int(alive.sum())
        resample_global_weights()

    theta = (n_dk + alpha) / (n_dk.sum(axis=1, keepdims=True) + K * alpha)
    phi = (n_kw + beta) / (n_k + V * beta)[:, None]
    return TopicState(
        family="hdp",
        vocab=vocab,
        topic_ids=[f"topic-{k}" for k in range(K)],
        phi=phi,
        theta=theta,
        hyper={
            "alpha": alpha,
            "gamma": gamma,
            "beta": beta,
            "iterations": iterations,
        },
        rng_seed=seed,
        assignments={"z": z, "n_dk": n_dk},
        extra={"global_weights": [float(x) for x in weights], "new_mass": float(new_mass)},
    )

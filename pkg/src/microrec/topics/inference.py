"""Held-out document inference against a trained topic state.

Gibbs-trained families use fold-in sampling (topic-word rows frozen, token
assignments resampled, estimates averaged over recorded sweeps); plsa uses
an EM fold-in; btm has its closed biterm mixture form. Out-of-vocabulary
tokens are skipped; a document with no usable evidence yields the uniform
distribution and a warning.
"""

from __future__ import annotations

import warnings
from collections import Counter

import numpy as np

from . import kernels
from .pooling import extract_biterms
from .state import TopicState


def _uniform(state: TopicState, reason: str) -> np.ndarray:
    warnings.warn(f"falling back to uniform topic distribution: {reason}", RuntimeWarning)
    K = state.num_topics
    return np.full(K, 1.0 / K)


def _foldin_gibbs(state, word_ids, alpha, seed, burn_in, samples) -> np.ndarray:
    K = state.num_topics
    word_of = np.asarray(word_ids, dtype=np.int64)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=word_of.shape[0])
    n_kdoc = np.bincount(z, minlength=K).astype(np.int64)
    probs = np.empty(K, dtype=np.float64)
    sweep = kernels.active().sweep_foldin
    phi = state.phi
    acc = np.zeros(K)
    for it in range(burn_in + samples):
        uniforms = rng.random(word_of.shape[0])
        sweep(word_of, z, n_kdoc, phi, alpha, uniforms, probs)
        if it >= burn_in:
            acc += (n_kdoc + alpha) / (word_of.shape[0] + K * alpha)
    theta = acc / samples
    return theta / theta.sum()


def _infer_plsa(state, word_ids, iterations=50) -> np.ndarray:
    counts = Counter(word_ids)
    words = np.fromiter(counts.keys(), dtype=np.int64)
    freq = np.fromiter(counts.values(), dtype=np.float64)
    K = state.num_topics
    theta = np.full(K, 1.0 / K)
    cols = state.phi[:, words]  # (K, distinct words)
    for _ in range(iterations):
        q = theta[:, None] * cols
        q /= q.sum(axis=0, keepdims=True)
        theta = (q * freq).sum(axis=1)
        theta /= theta.sum()
    return theta


def _infer_btm(state, word_ids) -> np.ndarray:
    window = state.hyper.get("window")
    biterms = extract_biterms([int(w) for w in word_ids], window)
    if not biterms:
        return _uniform(state, "document yields no in-vocabulary biterms")
    counts = Counter(biterms)
    total = sum(counts.values())
    theta_corpus = state.theta[0]
    out = np.zeros(state.num_topics)
    for (w1, w2), c in counts.items():
        p_z = theta_corpus * state.phi[:, w1] * state.phi[:, w2]
        mass = p_z.sum()
        if mass <= 0.0:
            continue
        out += (c / total) * (p_z / mass)
    s = out.sum()
    if s <= 0.0:
        return _uniform(state, "no biterm carried probability mass")
    return out / s


def _infer_hlda(state, word_ids, seed, burn_in, samples) -> np.ndarray:
    tree = state.extra["tree"]
    levels = int(tree["levels"])
    alpha = float(state.hyper["alpha"])
    parents = {int(k): int(v) for k, v in tree["parents"].items()}
    node_level = {int(k): int(v) for k, v in tree["node_levels"].items()}
    ndocs = {int(k): float(v) for k, v in tree["ndocs"].items()}
    gamma = float(state.hyper["gamma"])
    row_of = {int(tid.split("-")[1]): i for i, tid in enumerate(state.topic_ids)}

    # existing root-to-leaf paths plus their CRP prior weights
    leaves = [nid for nid in parents if node_level[nid] == levels - 1]
    if not leaves:
        return _uniform(state, "trained tree has no full paths")
    paths = []
    priors = []
    for leaf in sorted(leaves):
        path = [leaf]
        while parents[path[-1]] != -1:
            path.append(parents[path[-1]])
        path.reverse()
        log_prior = 0.0
        for parent, child in zip(path, path[1:]):
            log_prior += np.log(ndocs[child] / (ndocs[parent] + gamma))
        paths.append(path)
        priors.append(log_prior)
    priors = np.asarray(priors)
    phi_rows = np.asarray([[row_of[nid] for nid in path] for path in paths])

    word_of = np.asarray(word_ids, dtype=np.int64)
    n = word_of.shape[0]
    rng = np.random.default_rng(seed)
    lvl = rng.integers(0, levels, size=n)
    p_idx = int(rng.integers(len(paths)))
    acc = np.zeros(state.num_topics)
    # log phi per (path, level, token): small enough to precompute per path
    log_phi = np.log(np.maximum(state.phi, 1e-300))

    for it in range(burn_in + samples):
        rows = phi_rows[p_idx]
        n_dl = np.bincount(lvl, minlength=levels).astype(np.float64)
        for t in range(n):
            n_dl[lvl[t]] -= 1
            p = (n_dl + alpha) * state.phi[rows, word_of[t]]
            r = rng.random() * p.sum()
            lvl[t] = int(np.searchsorted(np.cumsum(p), r, side="right").clip(0, levels - 1))
            n_dl[lvl[t]] += 1
        # path posterior under fixed level assignments
        logw = priors.copy()
        for pi in range(len(paths)):
            logw[pi] += log_phi[phi_rows[pi][lvl], word_of].sum()
        probs = np.exp(logw - logw.max())
        r = rng.random() * probs.sum()
        p_idx = int(np.searchsorted(np.cumsum(probs), r, side="right").clip(0, len(paths) - 1))
        if it >= burn_in:
            est = (np.bincount(lvl, minlength=levels) + alpha) / (n + levels * alpha)
            for level in range(levels):
                acc[phi_rows[p_idx][level]] += est[level]
    theta = acc / samples
    return theta / theta.sum()


def infer_theta(
    state: TopicState,
    tokens,
    seed: int = 0,
    burn_in: int = 10,
    samples: int = 20,
) -> np.ndarray:
    """Distribution of one tokenized document over the trained topics.

    Deterministic for a given (state, tokens, seed); returns an array aligned
    with state.topic_ids that sums to 1.
    """
    word_ids = state.tokens_to_ids(tokens)
    if not word_ids:
        return _uniform(state, "all tokens out of vocabulary")
    family = state.family
    if family == "btm":
        return _infer_btm(state, word_ids)
    if family == "plsa":
        return _infer_plsa(state, word_ids)
    if family == "hlda":
        return _infer_hlda(state, word_ids, seed, burn_in, samples)
    if family in ("lda", "llda", "hdp"):
        alpha = float(state.hyper["alpha"])
        return _foldin_gibbs(state, word_ids, alpha, seed, burn_in, samples)
    raise ValueError(f"unknown topic family {family!r}")

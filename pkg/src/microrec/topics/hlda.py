"""Hierarchical LDA: topics live on the nodes of a tree grown by a nested
Chinese restaurant process.

Every document owns one root-to-leaf path of fixed depth and a per-token
level assignment. Gibbs sampling alternates (i) resampling the document's
path from the CRP prior times the collapsed word likelihood and (ii)
resampling token levels against the path's node-word counts. Tree surgery
makes the shapes dynamic, so this sampler stays on the plain numpy path.
"""

from __future__ import annotations

from collections import Counter

import numpy as np
from scipy.special import gammaln

from .pooling import PooledCorpus
from .state import TopicState


class _Node:
    __slots__ = ("id", "parent", "level", "children", "ndocs", "word_counts", "total")

    def __init__(self, node_id: int, parent: "_Node | None", level: int, vocab_size: int):
        self.id = node_id
        self.parent = parent
        self.level = level
        self.children: dict[int, _Node] = {}
        self.ndocs = 0
        self.word_counts = np.zeros(vocab_size, dtype=np.int64)
        self.total = 0


class _Tree:
    def __init__(self, vocab_size: int):
        self._vocab_size = vocab_size
        self._next_id = 0
        self.nodes: dict[int, _Node] = {}
        self.root = self.new_node(None, 0)

    def new_node(self, parent: _Node | None, level: int) -> _Node:
        node = _Node(self._next_id, parent, level, self._vocab_size)
        self._next_id += 1
        if parent is not None:
            parent.children[node.id] = node
        self.nodes[node.id] = node
        return node

    def prune_upwards(self, node: _Node) -> None:
        """Remove nodes left without documents, walking toward the root."""
        while node.parent is not None and node.ndocs == 0:
            del node.parent.children[node.id]
            del self.nodes[node.id]
            node = node.parent


def _candidate_paths(tree: _Tree, depth: int, gamma: float):
    """All paths a document may take: existing branches plus a fresh branch
    below every node. Entries are (nodes, log_prior) where a None node marks
    a branch to be materialized; once a path goes new it stays new, with
    conditional probability 1 at the deeper levels."""
    out = []

    def walk(node: _Node, acc: list, log_prior: float):
        if node.level == depth - 1:
            out.append((acc + [node], log_prior))
            return
        denom = node.ndocs + gamma
        for child_id in sorted(node.children):
            child = node.children[child_id]
            walk(child, acc + [node], log_prior + np.log(child.ndocs / denom))
        new_tail = [None] * (depth - 1 - node.level)
        out.append((acc + [node] + new_tail, log_prior + np.log(gamma / denom)))

    walk(tree.root, [], 0.0)
    return out


def _path_log_likelihood(path, level_word_counts, beta: float, vocab_size: int) -> float:
    """Collapsed Dirichlet-multinomial score of dropping the document's
    per-level word counts onto the path's nodes (None = fresh node)."""
    score = 0.0
    for level, counts in enumerate(level_word_counts):
        if not counts:
            continue
        node = path[level]
        c_total = sum(counts.values())
        words = np.fromiter(counts.keys(), dtype=np.int64)
        added = np.fromiter(counts.values(), dtype=np.float64)
        if node is None:
            base = np.zeros(len(words))
            node_total = 0.0
        else:
            base = node.word_counts[words].astype(np.float64)
            node_total = float(node.total)
        score += float(np.sum(gammaln(base + added + beta) - gammaln(base + beta)))
        score += gammaln(node_total + vocab_size * beta)
        score -= gammaln(node_total + c_total + vocab_size * beta)
    return score


def train_hlda(
    pooled: PooledCorpus,
    levels: int = 3,
    alpha: float = 10.0,
    beta: float = 0.1,
    gamma: float = 1.0,
    iterations: int = 1000,
    seed: int = 0,
) -> TopicState:
    """Nested-CRP Gibbs sampling with a fixed tree depth.

    alpha smooths the per-document level mixture, beta the node-word
    distributions, gamma governs branching: as gamma approaches 0 all
    documents collapse onto a single path.
    """
    if levels < 2:
        raise ValueError("levels must be >= 2")
    if alpha <= 0 or beta <= 0 or gamma <= 0:
        raise ValueError("alpha, beta and gamma must be positive")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    vocab = pooled.vocabulary()
    if not vocab:
        raise ValueError("empty corpus: no vocabulary to model")
    V = len(vocab)
    docs = [np.asarray([vocab[t] for t in doc], dtype=np.int64) for doc in pooled.docs]
    n_docs = len(docs)
    rng = np.random.default_rng(seed)

    tree = _Tree(V)
    paths: list[list[_Node]] = []
    level_of: list[np.ndarray] = []

    def add_doc(d: int, path: list[_Node]) -> None:
        for node in path:
            node.ndocs += 1
        for w, lvl in zip(docs[d], level_of[d]):
            node = path[lvl]
            node.word_counts[w] += 1
            node.total += 1

    def remove_doc(d: int) -> None:
        path = paths[d]
        for w, lvl in zip(docs[d], level_of[d]):
            node = path[lvl]
            node.word_counts[w] -= 1
            node.total -= 1
        for node in path:
            node.ndocs -= 1
        tree.prune_upwards(path[-1])

    def materialize(path_spec) -> list[_Node]:
        path = []
        for level, node in enumerate(path_spec):
            if node is None:
                node = tree.new_node(path[-1], level)
            path.append(node)
        return path

    def sample_path(d: int) -> list[_Node]:
        counts_per_level = [Counter() for _ in range(levels)]
        for w, lvl in zip(docs[d], level_of[d]):
            counts_per_level[lvl][int(w)] += 1
        cands = _candidate_paths(tree, levels, gamma)
        logw = np.array(
            [
                prior + _path_log_likelihood(path, counts_per_level, beta, V)
                for path, prior in cands
            ]
        )
        probs = np.exp(logw - logw.max())
        r = rng.random() * probs.sum()
        idx = int(np.searchsorted(np.cumsum(probs), r, side="right").clip(0, len(cands) - 1))
        return materialize(cands[idx][0])

    def resample_levels(d: int) -> None:
        path = paths[d]
        zs = level_of[d]
        n_dl = np.bincount(zs, minlength=levels).astype(np.float64)
        for t in range(len(docs[d])):
            w = docs[d][t]
            old = zs[t]
            n_dl[old] -= 1
            node_old = path[old]
            node_old.word_counts[w] -= 1
            node_old.total -= 1
            wc = np.array([node.word_counts[w] for node in path], dtype=np.float64)
            totals = np.array([node.total for node in path], dtype=np.float64)
            p = (n_dl + alpha) * (wc + beta) / (totals + V * beta)
            r = rng.random() * p.sum()
            new = int(np.searchsorted(np.cumsum(p), r, side="right").clip(0, levels - 1))
            zs[t] = new
            n_dl[new] += 1
            node_new = path[new]
            node_new.word_counts[w] += 1
            node_new.total += 1

    # init: nCRP prior draws the paths, levels start uniform
    for d in range(n_docs):
        level_of.append(rng.integers(0, levels, size=len(docs[d])))
        cands = _candidate_paths(tree, levels, gamma)
        prior = np.exp(np.array([p for _, p in cands]))
        r = rng.random() * prior.sum()
        idx = int(np.searchsorted(np.cumsum(prior), r, side="right").clip(0, len(cands) - 1))
        paths.append(materialize(cands[idx][0]))
        add_doc(d, paths[d])

    for _ in range(iterations):
        for d in range(n_docs):
            remove_doc(d)
            paths[d] = sample_path(d)
            add_doc(d, paths[d])
            resample_levels(d)

    node_ids = sorted(tree.nodes)
    row_of = {nid: i for i, nid in enumerate(node_ids)}
    K = len(node_ids)
    phi = np.zeros((K, V))
    for nid in node_ids:
        node = tree.nodes[nid]
        phi[row_of[nid]] = (node.word_counts + beta) / (node.total + V * beta)
    theta = np.zeros((n_docs, K))
    for d in range(n_docs):
        n_dl = np.bincount(level_of[d], minlength=levels).astype(np.float64)
        est = (n_dl + alpha) / (len(docs[d]) + levels * alpha)
        for lvl, node in enumerate(paths[d]):
            theta[d, row_of[node.id]] += est[lvl]

    tree_spec = {
        "levels": levels,
        "parents": {str(nid): (-1 if tree.nodes[nid].parent is None else tree.nodes[nid].parent.id) for nid in node_ids},
        "node_levels": {str(nid): tree.nodes[nid].level for nid in node_ids},
        "ndocs": {str(nid): tree.nodes[nid].ndocs for nid in node_ids},
    }
    return TopicState(
        family="hlda",
        vocab=vocab,
        topic_ids=[f"node-{nid}" for nid in node_ids],
        phi=phi,
        theta=theta,
        hyper={
            "alpha": alpha,
            "beta": beta,
            "gamma": gamma,
            "levels": levels,
            "iterations": iterations,
        },
        rng_seed=seed,
        assignments={
            "paths": [[node.id for node in path] for path in paths],
            "levels": level_of,
        },
        extra={"tree": tree_spec},
    )

"""Trained topic-model state and its text serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

FAMILIES = ("plsa", "lda", "llda", "hdp", "hlda", "btm")


@dataclass
class TopicState:
    """Frozen outcome of one topic-model training run.

    phi rows are topic-over-vocabulary distributions, one per entry of
    ``topic_ids``; theta rows are document-over-topic distributions in pooled
    document order (btm keeps a single corpus-level row). ``assignments``
    holds the family-specific latent record from the final sweep;
    ``extra`` carries whatever structure inference additionally needs
    (e.g. the hlda tree) in JSON-serializable form.
    """

    family: str
    vocab: dict[str, int]
    topic_ids: list[str]
    phi: np.ndarray
    theta: np.ndarray
    hyper: dict
    rng_seed: int
    assignments: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def num_topics(self) -> int:
        return len(self.topic_ids)

    def tokens_to_ids(self, tokens) -> list[int]:
        """Vocabulary lookup; out-of-vocabulary tokens are skipped."""
        return [self.vocab[t] for t in tokens if t in self.vocab]


def _write_sparse(fh, tag: str, matrix: np.ndarray) -> None:
    fh.write(f"{tag} {matrix.shape[0]} {matrix.shape[1]}\n")
    for i, row in enumerate(matrix):
        (nz,) = np.nonzero(row)
        cells = " ".join(f"{j} {float(row[j])!r}" for j in nz)
        fh.write(f"{i} {cells}\n")


def _read_sparse(lines, tag: str) -> np.ndarray:
    header = next(lines).split()
    if header[0] != tag:
        raise ValueError(f"expected {tag} section, found {header[0]!r}")
    rows, cols = int(header[1]), int(header[2])
    matrix = np.zeros((rows, cols))
    for _ in range(rows):
        parts = next(lines).split()
        i = int(parts[0])
        for j, value in zip(parts[1::2], parts[2::2]):
            matrix[i, int(j)] = float(value)
    return matrix


def save_topic_state(state: TopicState, path) -> None:
    """Write the inference-relevant state (family, hyper, seed, vocabulary,
    topic ids, phi, theta, extra) as a plain-text file.

    Training-internal assignment arrays are not persisted; a reloaded state
    supports document inference but not resumed training.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("microrec-topicstate 1\n")
        fh.write(f"family {state.family}\n")
        fh.write(f"seed {state.rng_seed}\n")
        fh.write("hyper " + json.dumps(state.hyper, sort_keys=True) + "\n")
        fh.write("extra " + json.dumps(state.extra, sort_keys=True) + "\n")
        fh.write(f"topics {len(state.topic_ids)}\n")
        for tid in state.topic_ids:
            fh.write(tid + "\n")
        tokens = sorted(state.vocab, key=state.vocab.get)
        fh.write(f"vocab {len(tokens)}\n")
        for tok in tokens:
            fh.write(tok + "\n")
        _write_sparse(fh, "phi", state.phi)
        _write_sparse(fh, "theta", state.theta)


def load_topic_state(path) -> TopicState:
    with open(path, encoding="utf-8") as fh:
        lines = iter(fh.read().splitlines())
    magic = next(lines)
    if magic != "microrec-topicstate 1":
        raise ValueError(f"not a topic-state file: {magic!r}")
    family = next(lines).split(" ", 1)[1]
    seed = int(next(lines).split(" ", 1)[1])
    hyper = json.loads(next(lines).split(" ", 1)[1])
    extra = json.loads(next(lines).split(" ", 1)[1])
    n_topics = int(next(lines).split(" ", 1)[1])
    topic_ids = [next(lines) for _ in range(n_topics)]
    n_vocab = int(next(lines).split(" ", 1)[1])
    vocab = {next(lines): i for i in range(n_vocab)}
    phi = _read_sparse(lines, "phi")
    theta = _read_sparse(lines, "theta")
    return TopicState(
        family=family,
        vocab=vocab,
        topic_ids=topic_ids,
        phi=phi,
        theta=theta,
        hyper=hyper,
        rng_seed=seed,
        extra=extra,
    )

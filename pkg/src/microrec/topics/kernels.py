"""Hot Gibbs-sampling inner loops.

The sweeps below dominate training time, so they are compiled with numba by
default. Set MICROREC_BACKEND=python to force the plain interpreter path
(same source, no JIT); MICROREC_BACKEND=numba insists on compilation. The
two paths consume identical pre-drawn uniforms, so they produce bitwise
identical sampler trajectories. ``microrec bench`` compares them.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from types import SimpleNamespace

ENV_FLAG = "MICROREC_BACKEND"


def sweep_topic_assignments(
    doc_of, word_of, z, cand_flat, cand_off, n_dk, n_kw, n_k, alpha, beta, uniforms, probs
):
    """One collapsed-Gibbs sweep over token-topic assignments.

    Candidate topics per document live in cand_flat[cand_off[d]:cand_off[d+1]];
    an unrestricted sampler simply lists every topic for every document.
    uniforms holds one pre-drawn U(0,1) per token; probs is scratch space at
    least as long as the widest candidate list.
    """
    V = n_kw.shape[1]
    for t in range(doc_of.shape[0]):
        d = doc_of[t]
        w = word_of[t]
        k_old = z[t]
        n_dk[d, k_old] -= 1
        n_kw[k_old, w] -= 1
        n_k[k_old] -= 1
        lo = cand_off[d]
        hi = cand_off[d + 1]
        total = 0.0
        for i in range(lo, hi):
            k = cand_flat[i]
            p = (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + V * beta)
            probs[i - lo] = p
            total += p
        r = uniforms[t] * total
        acc = 0.0
        k_new = cand_flat[hi - 1]
        for i in range(lo, hi):
            acc += probs[i - lo]
            if acc >= r:
                k_new = cand_flat[i]
                break
        z[t] = k_new
        n_dk[d, k_new] += 1
        n_kw[k_new, w] += 1
        n_k[k_new] += 1


def sweep_biterm_assignments(w1, w2, z, n_z, n_zw, alpha, beta, uniforms, probs):
    """One Gibbs sweep over biterm-topic assignments.

    Each biterm contributes both of its words to its topic, so the word-count
    normalizer of topic k is 2 * n_z[k].
    """
    K = n_z.shape[0]
    V = n_zw.shape[1]
    for b in range(w1.shape[0]):
        k_old = z[b]
        n_z[k_old] -= 1
        n_zw[k_old, w1[b]] -= 1
        n_zw[k_old, w2[b]] -= 1
        total = 0.0
        for k in range(K):
            denom = 2.0 * n_z[k] + V * beta
            p = (
                (n_z[k] + alpha)
                * (n_zw[k, w1[b]] + beta)
                * (n_zw[k, w2[b]] + beta)
                / (denom * (denom + 1.0))
            )
            probs[k] = p
            total += p
        r = uniforms[b] * total
        acc = 0.0
        k_new = K - 1
        for k in range(K):
            acc += probs[k]
            if acc >= r:
                k_new = k
                break
        z[b] = k_new
        n_z[k_new] += 1
        n_zw[k_new, w1[b]] += 1
        n_zw[k_new, w2[b]] += 1


def sweep_foldin(word_of, z, n_kdoc, phi, alpha, uniforms, probs):
    """One fold-in sweep for a held-out document with frozen topic-word rows."""
    K = n_kdoc.shape[0]
    for t in range(word_of.shape[0]):
        k_old = z[t]
        n_kdoc[k_old] -= 1
        total = 0.0
        for k in range(K):
            p = (n_kdoc[k] + alpha) * phi[k, word_of[t]]
            probs[k] = p
            total += p
        r = uniforms[t] * total
        acc = 0.0
        k_new = K - 1
        for k in range(K):
            acc += probs[k]
            if acc >= r:
                k_new = k
                break
        z[t] = k_new
        n_kdoc[k_new] += 1


_KERNEL_NAMES = ("sweep_topic_assignments", "sweep_biterm_assignments", "sweep_foldin")

_PYTHON = SimpleNamespace(
    name="python",
    sweep_topic_assignments=sweep_topic_assignments,
    sweep_biterm_assignments=sweep_biterm_assignments,
    sweep_foldin=sweep_foldin,
)

_COMPILED: SimpleNamespace | None = None


def _compiled() -> SimpleNamespace:
    global _COMPILED
    if _COMPILED is None:
        from numba import njit

        jitted = {
            name: njit(nogil=True)(getattr(_PYTHON, name)) for name in _KERNEL_NAMES
        }
        _COMPILED = SimpleNamespace(name="numba", **jitted)
    return _COMPILED


def get_backend(name: str) -> SimpleNamespace:
    if name == "python":
        return _PYTHON
    if name == "numba":
        return _compiled()
    raise ValueError(f"unknown kernel backend {name!r} (use 'numba' or 'python')")


def default_backend_name() -> str:
    choice = os.environ.get(ENV_FLAG, "auto").strip().lower()
    if choice in ("", "auto"):
        try:
            import numba  # noqa: F401
        except ImportError:
            return "python"
        return "numba"
    if choice in ("numba", "python"):
        return choice
    raise ValueError(f"{ENV_FLAG} must be 'auto', 'numba' or 'python', got {choice!r}")


_active_name: str | None = None


def active() -> SimpleNamespace:
    """The backend the samplers use; resolved once, overridable via
    use_backend()."""
    global _active_name
    if _active_name is None:
        _active_name = default_backend_name()
    return get_backend(_active_name)


def active_name() -> str:
    return active().name


@contextmanager
def use_backend(name: str):
    """Temporarily force a kernel backend (tests and benchmarks)."""
    global _active_name
    backend = get_backend(name)
    previous = _active_name
    _active_name = name
    try:
        yield backend
    finally:
        _active_name = previous

"""Configuration grid expansion.

The default grid enumerates every meaningful configuration per model and
drops the combinations that make no sense: jaccard pairs only with binary
weights, generalized jaccard only with tf/tf-idf, character vectors never
take tf-idf, binary weights only aggregate by sum, and rocchio runs only
with cosine over tf/tf-idf. The resulting per-model counts are fixed
(bow-token 36, bow-char 21, graph-token 9, graph-char 9, lda 48, llda 48,
btm 24, hdp 12, hlda 16; 223 in total) and guarded by the acceptance suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..config import Config

EXPECTED_COUNTS = {
    "bow-token": 36,
    "bow-char": 21,
    "graph-token": 9,
    "graph-char": 9,
    "lda": 48,
    "llda": 48,
    "btm": 24,
    "hdp": 12,
    "hlda": 16,
}
EXPECTED_TOTAL = 223

# Free parameters per model, in expansion order.
_MODEL_PARAMS = {
    "bow-token": ("n", "weighting", "aggregation", "similarity"),
    "bow-char": ("n", "weighting", "aggregation", "similarity"),
    "graph-token": ("n", "similarity"),
    "graph-char": ("n", "similarity"),
    "lda": ("topics", "iterations", "pooling", "aggregation"),
    "llda": ("topics", "iterations", "pooling", "aggregation"),
    "btm": ("topics", "iterations", "pooling", "aggregation", "window"),
    "plsa": ("topics", "iterations", "pooling", "aggregation"),
    "hdp": ("alpha", "gamma", "beta", "iterations", "pooling", "aggregation"),
    "hlda": (
        "alpha", "beta", "gamma", "levels", "iterations", "pooling", "aggregation",
    ),
}
_OPTIONAL_PARAMS = {"btm": {"window"}}

_INT_KEYS = {"n", "topics", "iterations", "levels", "window"}
_FLOAT_KEYS = {"alpha", "beta", "gamma"}


def default_grid_spec() -> dict:
    """Parameter ranges per model mirroring the benchmark's two tables."""
    bag_common = {
        "aggregation": ["sum", "centroid", "rocchio"],
        "similarity": ["cosine", "jaccard", "generalized_jaccard"],
    }
    topic_common = {
        "pooling": ["none", "user", "hashtag"],
        "aggregation": ["centroid", "rocchio"],
    }
    return {
        "bow-token": {
            "n": [1, 2, 3],
            "weighting": ["binary", "tf", "tfidf"],
            **bag_common,
        },
        "bow-char": {
            "n": [2, 3, 4],
            "weighting": ["binary", "tf"],
            **bag_common,
        },
        "graph-token": {
            "n": [1, 2, 3],
            "similarity": ["containment", "value", "normalized_value"],
        },
        "graph-char": {
            "n": [2, 3, 4],
            "similarity": ["containment", "value", "normalized_value"],
        },
        "lda": {
            "topics": [50, 100, 150, 200],
            "iterations": [1000, 2000],
            **topic_common,
        },
        "llda": {
            "topics": [50, 100, 150, 200],
            "iterations": [1000, 2000],
            **topic_common,
        },
        "btm": {
            "topics": [50, 100, 150, 200],
            "iterations": [1000],
            **topic_common,
        },
        "hdp": {
            "alpha": [1.0],
            "gamma": [1.0],
            "beta": [0.1, 0.5],
            "iterations": [1000],
            **topic_common,
        },
        "hlda": {
            "alpha": [10.0, 20.0],
            "beta": [0.1, 0.5],
            "gamma": [0.5, 1.0],
            "levels": [3],
            "iterations": [1000],
            "pooling": ["user"],
            "aggregation": ["centroid", "rocchio"],
        },
    }


def smoke_grid_spec() -> dict:
    """One quick configuration per model family, for smoke and pipeline runs."""
    return {
        "bow-token": {
            "n": [1], "weighting": ["tf"], "aggregation": ["centroid"],
            "similarity": ["cosine"],
        },
        "bow-char": {
            "n": [3], "weighting": ["tf"], "aggregation": ["centroid"],
            "similarity": ["cosine"],
        },
        "graph-token": {"n": [1], "similarity": ["value"]},
        "graph-char": {"n": [3], "similarity": ["containment"]},
        "lda": {
            "topics": [8], "iterations": [200], "pooling": ["user"],
            "aggregation": ["centroid"],
        },
        "llda": {
            "topics": [6], "iterations": [200], "pooling": ["user"],
            "aggregation": ["centroid"],
        },
        "btm": {
            "topics": [8], "iterations": [200], "pooling": ["none"],
            "aggregation": ["centroid"],
        },
        "hdp": {
            "alpha": [1.0], "gamma": [1.0], "beta": [0.1],
            "iterations": [120], "pooling": ["user"], "aggregation": ["centroid"],
        },
        "hlda": {
            "alpha": [10.0], "beta": [0.5], "gamma": [0.5], "levels": [3],
            "iterations": [80], "pooling": ["user"], "aggregation": ["centroid"],
        },
    }


def _bag_combo_valid(weighting: str, aggregation: str, similarity: str) -> bool:
    if similarity == "jaccard" and weighting != "binary":
        return False
    if similarity == "generalized_jaccard" and weighting not in ("tf", "tfidf"):
        return False
    if weighting == "binary" and aggregation != "sum":
        return False
    if aggregation == "rocchio" and (
        similarity != "cosine" or weighting not in ("tf", "tfidf")
    ):
        return False
    return True


@dataclass
class ConfigGrid:
    entries: list[Config] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for cfg in self.entries:
            out[cfg.model] = out.get(cfg.model, 0) + 1
        return out

    @property
    def total(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_id(self, config_id: str) -> Config:
        for cfg in self.entries:
            if cfg.config_id == config_id:
                return cfg
        raise KeyError(f"no configuration {config_id!r} in grid")


def expand_grid(spec: dict | None = None) -> ConfigGrid:
    """Cartesian product of each model's parameter ranges minus the invalid
    combinations; entries come out in a deterministic order."""
    if spec is None:
        spec = default_grid_spec()
    entries: list[Config] = []
    for model in sorted(spec):
        if model not in _MODEL_PARAMS:
            raise ValueError(f"unknown model {model!r} in grid spec")
        params = spec[model]
        allowed = set(_MODEL_PARAMS[model])
        unknown = set(params) - allowed
        if unknown:
            raise ValueError(
                f"unknown grid parameter(s) for {model}: {sorted(unknown)}"
            )
        required = allowed - _OPTIONAL_PARAMS.get(model, set())
        missing = required - set(params)
        if missing:
            raise ValueError(f"grid for {model} misses parameter(s): {sorted(missing)}")

        names = [p for p in _MODEL_PARAMS[model] if p in params]
        for values in itertools.product(*(params[p] for p in names)):
            kw = dict(zip(names, values))
            if model in ("bow-token", "bow-char") and not _bag_combo_valid(
                kw["weighting"], kw["aggregation"], kw["similarity"]
            ):
                continue
            if model not in ("bow-token", "bow-char", "graph-token", "graph-char"):
                kw["similarity"] = "cosine"
            if model == "btm" and "window" not in kw:
                # unpooled tweets pair words across the whole post; the long
                # pseudo-documents of user/hashtag pooling use a bounded window
                kw["window"] = None if kw["pooling"] == "none" else 30
            entries.append(Config(model=model, **kw))
    return ConfigGrid(entries=entries)


def parse_grid_file(path) -> dict:
    """Read a flat key=value grid description.

    Lines look like "bow-token.n = 1,2,3"; '#' starts a comment. Values are
    comma lists, typed per parameter ("whole" marks the whole-document biterm
    window). Models absent from the file are absent from the grid.
    """
    spec: dict[str, dict] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            model, dot, param = key.strip().partition(".")
            if not eq or not dot:
                raise ValueError(f"{path}:{lineno}: expected 'model.param = v1,v2'")
            param = param.strip()
            items = [v.strip() for v in value.split(",") if v.strip()]
            if not items:
                raise ValueError(f"{path}:{lineno}: no values given")
            if param in _INT_KEYS:
                typed = [None if v == "whole" else int(v) for v in items]
            elif param in _FLOAT_KEYS:
                typed = [float(v) for v in items]
            else:
                typed = items
            spec.setdefault(model.strip(), {})[param] = typed
    return spec

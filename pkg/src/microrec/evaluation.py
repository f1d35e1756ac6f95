"""Effectiveness (AP / MAP), robustness (MAP deviation) and wall-clock timing
accumulators."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


def average_precision(ranked) -> float:
    """Average precision of a ranked list.

    Sums precision-at-n over the positions of relevant entries and divides by
    the number of relevant entries. Raises when the list holds none, which in
    this pipeline signals a corrupted split rather than a legal input.
    """
    entries = list(ranked.entries) if hasattr(ranked, "entries") else list(ranked)
    total_relevant = sum(1 for e in entries if e.relevant)
    if total_relevant == 0:
        raise ValueError("no relevant items in ranking")
    hits = 0
    ap = 0.0
    for n, entry in enumerate(entries, start=1):
        if entry.relevant:
            hits += 1
            ap += hits / n
    return ap / total_relevant


def mean_average_precision(aps) -> float:
    aps = list(aps)
    if not aps:
        raise ValueError("cannot average an empty AP list")
    return sum(aps) / len(aps)


def map_deviation(maps_over_configs) -> float:
    """Max minus min MAP across configurations: the robustness measure."""
    values = list(maps_over_configs)
    if not values:
        raise ValueError("cannot compute deviation of an empty MAP list")
    return max(values) - min(values)


class TimingBuckets:
    """Accumulates wall-clock time into a train and a test bucket.

    Buckets belong to one run cell; parallel sections keep their own buckets
    and merge afterwards, so there is no shared mutable clock state.
    """

    SECTIONS = ("train", "test")

    def __init__(self):
        self._ns = {"train": 0, "test": 0}

    def add_ns(self, section: str, elapsed_ns: int) -> None:
        self._ns[section] += elapsed_ns

    def merge(self, other: "TimingBuckets") -> None:
        for section, ns in other._ns.items():
            self._ns[section] += ns

    @property
    def ttime_ms(self) -> int:
        return self._ns["train"] // 1_000_000

    @property
    def etime_ms(self) -> int:
        return self._ns["test"] // 1_000_000


def timed(section: str, thunk, buckets: TimingBuckets | None = None):
    """Run ``thunk`` and accumulate its monotonic wall-clock time.

    Returns (result, elapsed_ms). ``section`` is "train" for model building,
    "test" for scoring/ranking.
    """
    if section not in TimingBuckets.SECTIONS:
        raise ValueError(f"unknown timing section {section!r}")
    start = time.perf_counter_ns()
    result = thunk()
    elapsed_ns = time.perf_counter_ns() - start
    if buckets is not None:
        buckets.add_ns(section, elapsed_ns)
    return result, elapsed_ns / 1_000_000


@dataclass
class EvalResult:
    """Aggregated evaluation output for a group of users."""

    ap_per_user: dict[str, float] = field(default_factory=dict)
    map_per_group: dict[str, float] = field(default_factory=dict)
    map_deviation: dict[tuple[str, str], float] = field(default_factory=dict)
    ttime_ms: int = 0
    etime_ms: int = 0

"""Experiment orchestration: splits, shared statistics, cell execution,
baselines and report assembly.

A cell is one (configuration, source) pair evaluated for every user; group
rows are aggregated afterwards so shared work (topic-model training) happens
once. Per-cell failures are logged as missing cells and the run continues.
Seeding is counter-based: every random decision derives from
SeedSequence([master_seed, stream_tag, index]), which keeps runs
reproducible no matter how many workers execute the cells.
"""

from __future__ import annotations

import multiprocessing
import time
import traceback
from dataclasses import dataclass, field

import numpy as np
import psutil

from .. import bag
from ..config import Config
from ..corpus import (
    ALL_SOURCES,
    Corpus,
    Source,
    posting_ratio,
    compute_stoplist,
    split_train_test,
)
from ..evaluation import EvalResult, average_precision, mean_average_precision, timed
from ..recommend import baseline_chr, baseline_ran, build_user_model, doc_ngrams, rank
from ..topics import (
    extract_llda_labels,
    pool,
    train_btm,
    train_hdp,
    train_hlda,
    train_lda,
    train_llda,
    train_plsa,
)
from .grid import ConfigGrid
from .report import ReportRow, write_report_files

# stream tags for the counter-based seed derivation
_STREAM_SPLIT = 0
_STREAM_CELL = 1
_STREAM_RAN = 2


class CellResourceError(RuntimeError):
    """A cell ran past its time or memory ceiling."""


@dataclass
class RunSettings:
    seed: int = 0
    workers: int = 1
    time_limit_s: float | None = None
    mem_limit_mb: float | None = None
    negative_ratio: int = 4
    stoplist_k: int = 100
    ran_iterations: int = 1000
    llda_hashtag_min_count: int = 30
    deterministic_timing: bool = False
    min_retweets: int = 5


@dataclass
class RunResult:
    rows: list[ReportRow] = field(default_factory=list)
    missing: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    cell_evals: dict[str, EvalResult] = field(default_factory=dict)

    def files(self, out_dir, formats=("csv", "markdown")) -> list[str]:
        return write_report_files(self, out_dir, formats)

    def deviations(self) -> dict[tuple[str, str], float]:
        """(group, model) -> max-min MAP spread across configurations."""
        maps: dict[tuple[str, str], list[float]] = {}
        for row in self.rows:
            if row.model in ("chr", "ran"):
                continue
            maps.setdefault((row.group, row.model), []).append(row.mean_map)
        return {key: max(v) - min(v) for key, v in maps.items()}


def _derive_seed(master: int, stream: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master, stream, index])


def derive_groups(corpus: Corpus, users) -> dict[str, list[str]]:
    """Default user groups by posting-ratio category, plus the union group."""
    groups: dict[str, list[str]] = {"IS": [], "BU": [], "IP": [], "All": []}
    for user in sorted(users):
        cat = posting_ratio(corpus, user).category
        groups[cat].append(user)
        groups["All"].append(user)
    return {name: members for name, members in groups.items() if members}


def eligible_users(corpus: Corpus, settings: RunSettings) -> list[str]:
    """Users with enough retweets to split and a nonempty incoming feed."""
    out = []
    for user in corpus.users():
        if len(corpus.retweets(user)) < settings.min_retweets:
            continue
        if not corpus.graph.followees_of(user):
            continue
        out.append(user)
    return sorted(out)


def parse_groups_file(path) -> dict[str, list[str]]:
    groups: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'group<TAB>user'")
            groups.setdefault(parts[0], []).append(parts[1])
    return groups


class _ResourceGuard:
    """Cooperative per-cell ceilings, checked between units of work."""

    def __init__(self, settings: RunSettings):
        self.deadline = (
            None if settings.time_limit_s is None
            else time.monotonic() + settings.time_limit_s
        )
        self.rss_limit = (
            None if settings.mem_limit_mb is None
            else settings.mem_limit_mb * 1024 * 1024
        )
        self._process = psutil.Process() if self.rss_limit is not None else None

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise CellResourceError("cell exceeded its time ceiling")
        if self.rss_limit is not None and self._process.memory_info().rss > self.rss_limit:
            raise CellResourceError("cell exceeded its memory ceiling")


def _train_topic_state(config: Config, pooled, labels, seed: int):
    if config.model == "lda":
        return train_lda(
            pooled, config.topics, iterations=config.iterations, seed=seed
        )
    if config.model == "llda":
        return train_llda(
            pooled, labels, config.topics, iterations=config.iterations, seed=seed
        )
    if config.model == "btm":
        return train_btm(
            pooled, config.topics, window=config.window,
            iterations=config.iterations, seed=seed,
        )
    if config.model == "hdp":
        return train_hdp(
            pooled, alpha=config.alpha, gamma=config.gamma, beta=config.beta,
            iterations=config.iterations, seed=seed,
        )
    if config.model == "hlda":
        return train_hlda(
            pooled, levels=config.levels, alpha=config.alpha, beta=config.beta,
            gamma=config.gamma, iterations=config.iterations, seed=seed,
        )
    if config.model == "plsa":
        return train_plsa(pooled, config.topics, iterations=config.iterations, seed=seed)
    raise ValueError(f"not a topic model: {config.model}")


@dataclass
class _CellOutcome:
    index: int
    ap_per_user: dict[str, float] = field(default_factory=dict)
    build_ms: dict[str, float] = field(default_factory=dict)
    rank_ms: dict[str, float] = field(default_factory=dict)
    shared_train_ms: float = 0.0
    skipped_users: list[str] = field(default_factory=list)
    error: str | None = None
    traceback: str | None = None


class _RunContext:
    """Everything a cell needs; built once, shared read-only with workers."""

    def __init__(self, corpus, users, splits, stoplist, stats, settings):
        self.corpus = corpus
        self.users = users
        self.splits = splits
        self.stoplist = stoplist
        self.stats = stats
        self.settings = settings

    def doc_labels_for(self, user: str) -> dict[str, str]:
        endorsed = self.corpus.endorsed_ids(user)
        labels = {}
        for src_docs in self.splits[user].train_docs.values():
            for t in src_docs:
                if t.id in labels:
                    continue
                positive = t.author == user or t.id in endorsed
                labels[t.id] = "positive" if positive else "negative"
        return labels


def _union_train_tweets(ctx: _RunContext, source: Source) -> list:
    seen = {}
    for user in ctx.users:
        for t in ctx.splits[user].train_docs[source]:
            seen.setdefault(t.id, t)
    return sorted(seen.values(), key=lambda t: (t.timestamp, t.id))


def _run_cell(ctx: _RunContext, index: int, config: Config, source: Source) -> _CellOutcome:
    outcome = _CellOutcome(index=index)
    guard = _ResourceGuard(ctx.settings)
    cell_seed = int(_derive_seed(ctx.settings.seed, _STREAM_CELL, index).generate_state(1)[0])
    try:
        topic_state = None
        labels = None
        if config.family == "topic":
            train_tweets = _union_train_tweets(ctx, source)
            if config.model == "llda":
                labels = extract_llda_labels(
                    train_tweets, ctx.settings.llda_hashtag_min_count
                )
            pooled = pool(train_tweets, config.pooling, ctx.stoplist)
            guard.check()
            topic_state, shared_ms = timed(
                "train", lambda: _train_topic_state(config, pooled, labels, cell_seed)
            )
            outcome.shared_train_ms = shared_ms
            guard.check()

        stats = None
        if config.weighting == "tfidf":
            stats = ctx.stats[(source, config.unit, config.n)]

        for user in ctx.users:
            guard.check()
            split = ctx.splits[user]
            train_docs = split.train_docs[source]
            doc_labels = (
                ctx.doc_labels_for(user) if config.aggregation == "rocchio" else None
            )
            try:
                model, build_ms = timed(
                    "train",
                    lambda: build_user_model(
                        train_docs, config, source,
                        topic_state=topic_state, stats=stats,
                        stoplist=ctx.stoplist, doc_labels=doc_labels,
                    ),
                )
                ranked, rank_ms = timed(
                    "test",
                    lambda: rank(
                        model, split.test_docs, config,
                        topic_state=topic_state, stats=stats, stoplist=ctx.stoplist,
                    ),
                )
            except ValueError as exc:
                outcome.skipped_users.append(f"{user}: {exc}")
                continue
            outcome.ap_per_user[user] = average_precision(ranked)
            outcome.build_ms[user] = build_ms
            outcome.rank_ms[user] = rank_ms
        if not outcome.ap_per_user:
            outcome.error = "no user could be evaluated"
    except CellResourceError as exc:
        outcome.error = str(exc)
    except Exception as exc:  # isolated cell failure: log and continue the run
        outcome.error = f"{type(exc).__name__}: {exc}"
        outcome.traceback = traceback.format_exc()
    return outcome


_WORKER_CTX: dict = {}


def _worker_init(ctx, tasks):
    _WORKER_CTX["ctx"] = ctx
    _WORKER_CTX["tasks"] = tasks


def _worker_run(index: int) -> _CellOutcome:
    config, source = _WORKER_CTX["tasks"][index]
    return _run_cell(_WORKER_CTX["ctx"], index, config, source)


def _fmt_ms(ms: float, settings: RunSettings) -> int:
    return 0 if settings.deterministic_timing else int(round(ms))


def run_experiment(
    corpus: Corpus,
    grid: ConfigGrid,
    sources=ALL_SOURCES,
    groups: dict[str, list[str]] | None = None,
    out_dir=None,
    settings: RunSettings | None = None,
) -> RunResult:
    """Evaluate every applicable (configuration, source) cell for every group.

    Returns the assembled rows; when out_dir is given the report files are
    written there as well.
    """
    settings = settings or RunSettings()
    sources = [Source(s) if not isinstance(s, Source) else s for s in sources]
    result = RunResult()

    if groups is None:
        groups = derive_groups(corpus, eligible_users(corpus, settings))
    if not groups:
        raise ValueError("no user groups to evaluate")
    users = sorted({u for members in groups.values() for u in members})

    splits = {}
    for uidx, user in enumerate(users):
        seed = int(_derive_seed(settings.seed, _STREAM_SPLIT, uidx).generate_state(1)[0])
        splits[user] = split_train_test(
            corpus, user, negative_ratio=settings.negative_ratio,
            rng_seed=seed, sources=sources,
        )
        result.warnings.extend(splits[user].warnings)

    # stoplist from every training-phase document of the run
    stop_pool = {}
    for user in users:
        for src in splits[user].train_docs:
            for t in splits[user].train_docs[src]:
                stop_pool.setdefault(t.id, t)
    train_tweets = sorted(stop_pool.values(), key=lambda t: t.id)
    stoplist = frozenset(compute_stoplist(train_tweets, settings.stoplist_k))
    # attach run-level preprocessing artifacts for downstream inspection
    corpus.stoplist = stoplist
    corpus.vocab_stats = bag.CorpusStats.from_documents(
        doc_ngrams(t.text, "token", 1) for t in train_tweets
    )

    # idf statistics per (source, unit, n), fitted on training documents only
    stats: dict[tuple, bag.CorpusStats] = {}
    tasks: list[tuple[Config, Source]] = []
    for config in sorted(grid.entries, key=lambda c: c.config_id):
        for source in sources:
            if config.applies_to_source(source):
                tasks.append((config, source))
                if config.weighting == "tfidf":
                    key = (source, config.unit, config.n)
                    stats.setdefault(key, None)
    ctx = _RunContext(corpus, users, splits, stoplist, stats, settings)
    for source, unit, n in list(stats):
        docs = [
            doc_ngrams(t.text, unit, n, stoplist)
            for t in _union_train_tweets(ctx, source)
        ]
        stats[(source, unit, n)] = bag.CorpusStats.from_documents(docs)

    if settings.workers > 1:
        mp = multiprocessing.get_context("fork")
        with mp.Pool(
            settings.workers, initializer=_worker_init, initargs=(ctx, tasks)
        ) as pool_:
            outcomes = pool_.map(_worker_run, range(len(tasks)))
    else:
        outcomes = [
            _run_cell(ctx, index, config, source)
            for index, (config, source) in enumerate(tasks)
        ]

    for outcome, (config, source) in zip(outcomes, tasks):
        key = f"{config.config_id}/{source.value}"
        if outcome.error is not None:
            result.missing.append((key, outcome.error))
            continue
        result.warnings.extend(
            f"{key}: skipped {entry}" for entry in outcome.skipped_users
        )
        cell_eval = EvalResult(
            ap_per_user=dict(outcome.ap_per_user),
            ttime_ms=_fmt_ms(
                outcome.shared_train_ms + sum(outcome.build_ms.values()), settings
            ),
            etime_ms=_fmt_ms(sum(outcome.rank_ms.values()), settings),
        )
        result.cell_evals[key] = cell_eval
        for group_name in sorted(groups):
            members = [u for u in groups[group_name] if u in outcome.ap_per_user]
            if not members:
                result.missing.append((f"{key}@{group_name}", "no evaluable users"))
                continue
            group_map = mean_average_precision(
                [outcome.ap_per_user[u] for u in members]
            )
            cell_eval.map_per_group[group_name] = group_map
            ttime = outcome.shared_train_ms + sum(outcome.build_ms[u] for u in members)
            etime = sum(outcome.rank_ms[u] for u in members)
            result.rows.append(ReportRow(
                group=group_name,
                source=source.value,
                model=config.model,
                config_id=config.config_id,
                min_map=group_map,
                mean_map=group_map,
                max_map=group_map,
                map_dev=0.0,
                ttime_ms=_fmt_ms(ttime, settings),
                etime_ms=_fmt_ms(etime, settings),
            ))

    _append_baseline_rows(result, splits, groups, settings)

    result.rows.sort(key=lambda r: (r.group, r.source, r.model, r.config_id))
    if out_dir is not None:
        result.files(out_dir)
    return result


def _append_baseline_rows(result, splits, groups, settings) -> None:
    users = sorted(splits)
    chr_ap = {}
    ran_ap: dict[str, np.ndarray] = {}
    for uidx, user in enumerate(users):
        test_docs = splits[user].test_docs
        chr_ap[user] = average_precision(baseline_chr(test_docs))
        seeds = _derive_seed(settings.seed, _STREAM_RAN, uidx).generate_state(
            settings.ran_iterations
        )
        aps = np.empty(settings.ran_iterations)
        for i, s in enumerate(seeds):
            aps[i] = average_precision(baseline_ran(test_docs, int(s)))
        ran_ap[user] = aps

    for group_name in sorted(groups):
        members = [u for u in groups[group_name] if u in chr_ap]
        if not members:
            continue
        chr_map = mean_average_precision([chr_ap[u] for u in members])
        result.rows.append(ReportRow(
            group=group_name, source="-", model="chr", config_id="chr",
            min_map=chr_map, mean_map=chr_map, max_map=chr_map, map_dev=0.0,
            ttime_ms=0, etime_ms=0,
        ))
        iter_maps = np.mean(np.stack([ran_ap[u] for u in members]), axis=0)
        result.rows.append(ReportRow(
            group=group_name, source="-", model="ran",
            config_id=f"ran-{settings.ran_iterations}",
            min_map=float(iter_maps.min()),
            mean_map=float(iter_maps.mean()),
            max_map=float(iter_maps.max()),
            map_dev=float(iter_maps.max() - iter_maps.min()),
            ttime_ms=0, etime_ms=0,
        ))

"""Command-line interface.

Subcommands: ingest (validate corpus files), synth (generate a synthetic
corpus), grid (inspect the configuration grid), run (full experiment),
rank (single user/config debug), report (re-emit formats from report.csv)
and bench (compare the numba and python kernel backends).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from ..corpus import (
    ALL_SOURCES,
    Corpus,
    Source,
    load_graph_tsv,
    load_tweets_jsonl,
    save_graph_tsv,
    save_tweets_jsonl,
)
from ..topics import kernels, pool, train_btm, train_lda
from . import report as report_mod
from .grid import default_grid_spec, expand_grid, parse_grid_file, smoke_grid_spec
from .runner import (
    RunSettings,
    derive_groups,
    eligible_users,
    parse_groups_file,
    run_experiment,
)
from .synth import SynthSpec, generate_synthetic, parse_synth_spec


def _load_corpus(args) -> Corpus:
    if getattr(args, "synth_dir", None):
        tweets = load_tweets_jsonl(os.path.join(args.synth_dir, "tweets.jsonl"))
        graph = load_graph_tsv(os.path.join(args.synth_dir, "graph.tsv"))
        return Corpus(tweets, graph)
    if not args.tweets or not args.graph:
        raise SystemExit("need --tweets and --graph (or --synth-dir)")
    return Corpus(load_tweets_jsonl(args.tweets), load_graph_tsv(args.graph))


def _grid_from_args(args):
    if args.grid == "smoke":
        return expand_grid(smoke_grid_spec())
    if args.grid == "default":
        return expand_grid(default_grid_spec())
    return expand_grid(parse_grid_file(args.grid))


def _sources_from_args(args):
    if not args.sources:
        return ALL_SOURCES
    return tuple(Source(token.strip()) for token in args.sources.split(","))


def cmd_ingest(args) -> int:
    corpus = _load_corpus(args)
    summary = {
        "tweets": len(corpus.tweets),
        "retweets": sum(1 for t in corpus.tweets if t.is_retweet),
        "users_with_posts": len(corpus.by_author),
        "graph_edges": len(corpus.graph),
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_synth(args) -> int:
    spec = parse_synth_spec(args.spec) if args.spec else SynthSpec()
    if args.seed is not None:
        spec.seed = args.seed
    corpus, _ = generate_synthetic(spec)
    os.makedirs(args.out, exist_ok=True)
    save_tweets_jsonl(corpus.tweets, os.path.join(args.out, "tweets.jsonl"))
    save_graph_tsv(corpus.graph, os.path.join(args.out, "graph.tsv"))
    print(f"wrote {len(corpus.tweets)} tweets to {args.out}")
    return 0


def cmd_grid(args) -> int:
    grid = _grid_from_args(args)
    counts = grid.counts
    for model in sorted(counts):
        print(f"{model}\t{counts[model]}")
    print(f"total\t{grid.total}")
    if args.list:
        for cfg in grid.entries:
            print(cfg.config_id)
    return 0


def cmd_run(args) -> int:
    corpus = _load_corpus(args)
    grid = _grid_from_args(args)
    sources = _sources_from_args(args)
    settings = RunSettings(
        seed=args.seed,
        workers=args.workers,
        time_limit_s=args.time_limit_s,
        mem_limit_mb=args.mem_limit_mb,
        negative_ratio=args.negative_ratio,
        stoplist_k=args.stoplist_k,
        ran_iterations=args.ran_iterations,
        deterministic_timing=args.deterministic_timing,
    )
    groups = parse_groups_file(args.groups) if args.groups else None
    result = run_experiment(
        corpus, grid, sources=sources, groups=groups,
        out_dir=args.out, settings=settings,
    )
    print(f"rows: {len(result.rows)}  missing: {len(result.missing)}  out: {args.out}")
    return 0 if result.rows else 1


def cmd_rank(args) -> int:
    corpus = _load_corpus(args)
    grid = _grid_from_args(args)
    config = grid.by_id(args.config_id)
    source = Source(args.source)
    settings = RunSettings(seed=args.seed)
    from .runner import _RunContext, _run_cell  # single-cell debug path
    from ..corpus import split_train_test, compute_stoplist

    users = [args.user]
    splits = {
        args.user: split_train_test(
            corpus, args.user, settings.negative_ratio, rng_seed=settings.seed
        )
    }
    stop_pool = [
        t for docs in splits[args.user].train_docs.values() for t in docs
    ]
    stoplist = frozenset(compute_stoplist(stop_pool, settings.stoplist_k))
    ctx = _RunContext(corpus, users, splits, stoplist, {}, settings)
    if config.weighting == "tfidf":
        from ..bag import CorpusStats
        from ..recommend import doc_ngrams

        docs = [
            doc_ngrams(t.text, config.unit, config.n, stoplist)
            for t in splits[args.user].train_docs[source]
        ]
        ctx.stats[(source, config.unit, config.n)] = CorpusStats.from_documents(docs)
    outcome = _run_cell(ctx, 0, config, source)
    if outcome.error:
        raise SystemExit(f"cell failed: {outcome.error}")
    ap = outcome.ap_per_user[args.user]
    print(f"user={args.user} config={config.config_id} source={source.value} ap={ap:.6f}")
    return 0


def cmd_report(args) -> int:
    rows = report_mod.read_report_csv(args.cells)
    written = report_mod.emit_report(rows, args.out, formats=tuple(args.formats.split(",")))
    for path in written:
        print(path)
    return 0


def _bench_corpus(n_docs: int, doc_len: int, vocab: int, seed: int):
    from ..corpus import Tweet

    rng = np.random.default_rng(seed)
    tweets = [
        Tweet(
            id=f"t{i}",
            author=f"u{i % 10}",
            timestamp=i,
            text=" ".join(f"w{int(w)}" for w in rng.integers(0, vocab, size=doc_len)),
        )
        for i in range(n_docs)
    ]
    return pool(tweets, "none")


def cmd_bench(args) -> int:
    """Train identical models on both kernel backends and report timings."""
    pooled = _bench_corpus(args.docs, args.doc_len, args.vocab, args.seed)
    jobs = [
        ("lda", lambda: train_lda(pooled, args.topics, iterations=args.iterations, seed=args.seed)),
        ("btm", lambda: train_btm(pooled, args.topics, window=None, iterations=args.iterations, seed=args.seed)),
    ]
    print(f"docs={args.docs} doc_len={args.doc_len} vocab={args.vocab} "
          f"topics={args.topics} iterations={args.iterations}")
    print("model\tbackend\tseconds")
    states = {}
    for model_name, job in jobs:
        for backend in ("numba", "python"):
            try:
                with kernels.use_backend(backend):
                    if backend == "numba":
                        job()  # warm-up absorbs JIT compilation
                    start = time.perf_counter()
                    state = job()
                    elapsed = time.perf_counter() - start
            except (ValueError, ImportError) as exc:
                print(f"{model_name}\t{backend}\tunavailable ({exc})")
                continue
            states[(model_name, backend)] = state
            print(f"{model_name}\t{backend}\t{elapsed:.3f}")
        a = states.get((model_name, "numba"))
        b = states.get((model_name, "python"))
        if a is not None and b is not None:
            match = np.array_equal(a.phi, b.phi) and np.array_equal(a.theta, b.theta)
            print(f"{model_name}\tbackends-identical\t{match}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microrec",
        description="Representation-model benchmark for microblog recommendation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus_args(p):
        p.add_argument("--tweets", help="tweets JSONL path")
        p.add_argument("--graph", help="graph TSV path")
        p.add_argument("--synth-dir", help="directory with tweets.jsonl + graph.tsv")

    p = sub.add_parser("ingest", help="load and summarize a corpus")
    add_corpus_args(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--spec", help="synth spec file (key = value lines)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("grid", help="print configuration-grid counts")
    p.add_argument("--grid", default="default", help="default | smoke | grid file path")
    p.add_argument("--list", action="store_true", help="also list config ids")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("run", help="run an experiment")
    add_corpus_args(p)
    p.add_argument("--grid", default="default", help="default | smoke | grid file path")
    p.add_argument("--sources", help="comma list, e.g. T,R,TR (default: all 13)")
    p.add_argument("--groups", help="TSV file group<TAB>user (default: derive IS/BU/IP/All)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--time-limit-s", type=float, default=None, help="per-cell ceiling")
    p.add_argument("--mem-limit-mb", type=float, default=None, help="per-cell RSS ceiling")
    p.add_argument("--negative-ratio", type=int, default=4)
    p.add_argument("--stoplist-k", type=int, default=100)
    p.add_argument("--ran-iterations", type=int, default=1000)
    p.add_argument("--deterministic-timing", action="store_true",
                   help="zero the timing columns for byte-reproducible reports")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("rank", help="evaluate one user under one configuration")
    add_corpus_args(p)
    p.add_argument("--grid", default="default")
    p.add_argument("--config-id", required=True)
    p.add_argument("--source", default="R")
    p.add_argument("--user", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("report", help="re-emit report formats from report.csv")
    p.add_argument("--cells", required=True, help="existing report.csv")
    p.add_argument("--out", required=True)
    p.add_argument("--formats", default="csv,markdown")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("bench", help="compare numba and python kernel backends")
    p.add_argument("--docs", type=int, default=300)
    p.add_argument("--doc-len", type=int, default=30)
    p.add_argument("--vocab", type=int, default=500)
    p.add_argument("--topics", type=int, default=20)
    p.add_argument("--iterations", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line interface.

Every subcommand reads and writes the documented file formats, so stages can
be chained through files and tested in isolation.  Outputs are deterministic:
the same inputs and flags produce byte-identical files regardless of thread
count.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
Set SETVEC_LOG=debug|info|warning|error to control log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import formats
from .activations import AGGREGATIONS, NEG_FORMULAS, ActivationConfig, activate
from .compose import OP_ATOMIC, OP_DIFFERENCE, CompositionalQuery, compose
from .cpt import PseudoTermVector
from .errors import SetvecError, UndefinedMetricError
from .evaluation import (
    PairedQueries,
    interference_bins,
    ndcg_at_k,
    pairwise_accuracy,
    recall_at_k,
)
from .fusion import FUSE_OPS, ScoredRun, fuse
from .index import build, load, save, search, search_cpt
from .lexical import DEFAULT_B, DEFAULT_K1, corpus_stats, encode_bm25_doc, encode_tf, tokenize
from .sparse import Vocabulary

log = logging.getLogger("setvec")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems via exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _default_threads() -> int:
    return os.cpu_count() or 1


def _add_threads_flag(parser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker threads (affects throughput only, never results; default: %(default)s)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="setvec", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode text documents or logit grids into sparse vectors")
    p.add_argument("--docs", help="text JSONL: {\"id\", \"text\"} (for --tf/--bm25)")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--tf", action="store_true", help="raw term-frequency weights")
    mode.add_argument("--bm25", action="store_true", help="Okapi BM25 document impacts")
    mode.add_argument(
        "--logits",
        nargs="+",
        metavar="GRID",
        help="activate logit grid TSV files (one vector per file, id = file stem)",
    )
    p.add_argument("--out", required=True, help="output vector JSONL")
    p.add_argument("--k1", type=float, default=DEFAULT_K1, help="BM25 k1 (default: %(default)s)")
    p.add_argument("--b", type=float, default=DEFAULT_B, help="BM25 b (default: %(default)s)")
    p.add_argument("--stopwords", help="optional newline-separated stopword list")
    p.add_argument(
        "--epsilon", type=float, default=0.25,
        help="dead-zone half-width for signed activations (default: %(default)s)",
    )
    p.add_argument(
        "--neg-formula", choices=NEG_FORMULAS, default="corrected",
        help="negative-half spelling for signed activations (default: %(default)s)",
    )
    p.add_argument(
        "--aggregation", choices=AGGREGATIONS, default="splade_max",
        help="pooling for --logits: splade_max (positive only), absmax, or sum "
        "(default: %(default)s)",
    )
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("index", help="build an inverted index from a vector file")
    p.add_argument("--vectors", required=True, help="document vector JSONL")
    p.add_argument("--out", required=True, help="output index file")
    _add_threads_flag(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("compose", help="turn compositional query records into vectors")
    p.add_argument("--queries", required=True, help="query JSONL")
    p.add_argument("--vectors", help="atomic vector JSONL for a_ref/b_ref lookups")
    p.add_argument("--method", help="override the method of every non-atomic record")
    p.add_argument("--lambda", dest="lambda_", metavar="LAMBDA", type=float,
                   help="nrf lambda when a record omits it")
    p.add_argument("--m", type=int, help="cpt top-m when a record omits it")
    p.add_argument("--out", required=True, help="output vector JSONL (cpt rows use term∩term keys)")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("search", help="retrieve top-k documents for queries")
    p.add_argument("--index", required=True, help="index file from 'setvec index'")
    p.add_argument("--queries", required=True, help="query JSONL or pre-composed vector JSONL")
    p.add_argument("--vectors", help="atomic vectors for query records with refs")
    p.add_argument("--k", type=int, default=10, help="results per query (default: %(default)s)")
    p.add_argument("--method", help="override method of every non-atomic query record")
    p.add_argument("--lambda", dest="lambda_", metavar="LAMBDA", type=float, help="nrf lambda default")
    p.add_argument("--m", type=int, help="cpt top-m default")
    p.add_argument(
        "--candidate-pool",
        type=int,
        default=1000,
        help="stage-1 pool size for cpt queries (default: %(default)s)",
    )
    p.add_argument("--tag", default=formats.DEFAULT_RUN_TAG, help="run tag (default: %(default)s)")
    p.add_argument("--out", required=True, help="output TREC run file")
    _add_threads_flag(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("fuse", help="fuse two per-atomic-query runs")
    p.add_argument("--run-a", required=True)
    p.add_argument("--run-b", required=True)
    p.add_argument("--op", required=True, choices=FUSE_OPS)
    p.add_argument("--scaled", action="store_true", help="min-max scale each run to [0,1] first")
    p.add_argument("--tag", default=formats.DEFAULT_RUN_TAG)
    p.add_argument("--out", required=True, help="output TREC run file")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="score a run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument(
        "--metrics",
        default="ndcg@10,recall@100",
        help="comma list of ndcg@K / recall@K (default: %(default)s)",
    )
    p.add_argument("--out", help="write a JSON report here")
    p.add_argument("--per-query", help="write per-query TSV (qid<TAB>metric<TAB>value)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("pairwise", help="counterfactual pairwise accuracy from a score file")
    p.add_argument("--pairs", required=True, help="JSONL: {qid_a, qid_b, doc_a, doc_b}")
    p.add_argument("--scores", required=True, help="TREC run holding all four scores per pair")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(func=cmd_pairwise)

    p = sub.add_parser(
        "analyze-interference",
        help="bin difference queries by cosine(a, b) and average a per-query metric",
    )
    p.add_argument("--queries", required=True, help="query JSONL")
    p.add_argument("--vectors", help="atomic vectors for refs")
    p.add_argument("--per-query-metrics", required=True, help="TSV: qid<TAB>value")
    p.add_argument("--bins", type=int, default=4, help="number of bins (default: %(default)s)")
    p.add_argument("--out", help="write a JSON report here")
    p.set_defaults(func=cmd_analyze_interference)

    return parser


def _read_stopwords(path) -> set[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return {line.strip() for line in fh if line.strip()}


def cmd_encode(args) -> int:
    vocab = Vocabulary()
    if args.logits:
        try:
            cfg = ActivationConfig(
                epsilon=args.epsilon,
                neg_formula=args.neg_formula,
                aggregation=args.aggregation,
            )
        except ValueError as exc:
            raise _UsageError(str(exc)) from exc
        records = []
        for grid_path in args.logits:
            rec_id = os.path.splitext(os.path.basename(grid_path))[0]
            records.append((rec_id, activate(formats.read_logits(grid_path, vocab), cfg)))
        formats.write_vectors(args.out, records)
        return EXIT_OK

    if not args.docs:
        raise _UsageError("--tf/--bm25 need --docs")
    stop = _read_stopwords(args.stopwords) if args.stopwords else None

    def doc_tokens():
        for rec_id, text in formats.read_texts(args.docs):
            tokens = tokenize(text)
            if stop:
                tokens = [t for t in tokens if t not in stop]
            yield rec_id, tokens

    if args.tf:
        formats.write_vectors(
            args.out, ((rec_id, encode_tf(tokens, vocab)) for rec_id, tokens in doc_tokens())
        )
    else:
        stats = corpus_stats((tokens for _, tokens in doc_tokens()), vocab)
        log.info("bm25 stats: %d docs, avgdl %.2f", stats.doc_count, stats.avg_doc_len)
        formats.write_vectors(
            args.out,
            (
                (rec_id, encode_bm25_doc(tokens, stats, k1=args.k1, b=args.b))
                for rec_id, tokens in doc_tokens()
            ),
        )
    return EXIT_OK


def cmd_index(args) -> int:
    vocab = Vocabulary()
    idx = build(formats.read_vectors(args.vectors, vocab), vocab)
    save(idx, args.out)
    log.info("indexed %d docs, %d posted terms", idx.doc_count, idx.term_count)
    return EXIT_OK


def _load_queries(args, vocab) -> list[CompositionalQuery]:
    vectors = {}
    if args.vectors:
        vectors = dict(formats.read_vectors(args.vectors, vocab))
    return formats.read_queries(
        args.queries,
        vectors,
        vocab,
        default_method=args.method,
        default_lambda=getattr(args, "lambda_", None),
        default_m=args.m,
    )


def cmd_compose(args) -> int:
    vocab = Vocabulary()
    queries = _load_queries(args, vocab)
    formats.write_vectors(args.out, ((q.qid, compose(q)) for q in queries))
    return EXIT_OK


def _sniff_query_file(path) -> str:
    """'records' for compositional query files, 'vectors' for plain vectors."""
    for _, record in formats._jsonl_records(path):
        if "operator" in record:
            return "records"
        if "vector" in record:
            return "vectors"
        break
    return "vectors"


def cmd_search(args) -> int:
    if args.k < 1:
        raise _UsageError("--k must be a positive integer")
    if args.candidate_pool < 1:
        raise _UsageError("--candidate-pool must be a positive integer")
    idx = load(args.index)
    vocab = idx.vocab

    if _sniff_query_file(args.queries) == "records":
        queries = _load_queries(args, vocab)

        def run_one(q: CompositionalQuery):
            rep = compose(q)
            if isinstance(rep, PseudoTermVector):
                return q.qid, search_cpt(idx, rep, q.a, q.b, args.k, args.candidate_pool)
            return q.qid, search(idx, rep, args.k)

        jobs = queries
    else:
        loaded = list(formats.read_vectors(args.queries, vocab))

        def run_one(item):
            qid, vec = item
            return qid, search(idx, vec, args.k)

        jobs = loaded

    threads = max(1, args.threads)
    if threads == 1 or len(jobs) <= 1:
        results = [run_one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, jobs))
    formats.write_search_results(args.out, results, tag=args.tag)
    return EXIT_OK


def cmd_fuse(args) -> int:
    runs_a = formats.read_run(args.run_a)
    runs_b = formats.read_run(args.run_b)
    only_a = runs_a.keys() - runs_b.keys()
    only_b = runs_b.keys() - runs_a.keys()
    for qid in sorted(only_a | only_b):
        log.warning("qid %s present in only one run; skipped", qid)
    fused = [
        fuse(runs_a[qid], runs_b[qid], args.op, scaled=args.scaled)
        for qid in runs_a
        if qid in runs_b
    ]
    formats.write_run(args.out, fused, tag=args.tag)
    return EXIT_OK


def _parse_metrics(arg: str) -> list[tuple[str, int]]:
    metrics = []
    for item in arg.split(","):
        item = item.strip().lower()
        if not item:
            continue
        name, _, k_str = item.partition("@")
        if name not in ("ndcg", "recall") or not k_str.isdigit() or int(k_str) < 1:
            raise _UsageError(f"bad metric {item!r}; expected ndcg@K or recall@K")
        metrics.append((name, int(k_str)))
    if not metrics:
        raise _UsageError("no metrics requested")
    return metrics


def cmd_eval(args) -> int:
    metrics = _parse_metrics(args.metrics)
    runs = formats.read_run(args.run)
    qrels = formats.read_qrels(args.qrels)
    per_query: dict[str, dict[str, float]] = {}
    skipped = []
    for qid, run in runs.items():
        ranking = [doc for doc, _ in run.ranking()]
        row = {}
        try:
            for name, k in metrics:
                fn = ndcg_at_k if name == "ndcg" else recall_at_k
                row[f"{name}@{k}"] = fn(ranking, qrels, qid, k)
        except UndefinedMetricError:
            skipped.append(qid)
            continue
        per_query[qid] = row
    for qid in skipped:
        log.warning("qid %s has no positive qrels; excluded from averages", qid)
    if not per_query:
        raise UndefinedMetricError("no evaluable queries (no positive qrels matched the run)")
    labels = [f"{name}@{k}" for name, k in metrics]
    means = {
        label: sum(row[label] for row in per_query.values()) / len(per_query)
        for label in labels
    }
    width = max(len(label) for label in labels)
    print(f"queries evaluated: {len(per_query)} (skipped: {len(skipped)})")
    for label in labels:
        print(f"{label:<{width}}  {means[label]:.4f}")
    if args.out:
        report = {
            "query_count": len(per_query),
            "skipped_qids": skipped,
            "metrics": means,
            "per_query": per_query,
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.per_query:
        with open(args.per_query, "w", encoding="utf-8") as fh:
            for qid, row in per_query.items():
                for label in labels:
                    fh.write(f"{qid}\t{label}\t{row[label]:.6f}\n")
    return EXIT_OK


def cmd_pairwise(args) -> int:
    pairs = []
    for line_no, record in formats._jsonl_records(args.pairs):
        try:
            pairs.append(
                PairedQueries(
                    qid_a=record["qid_a"],
                    qid_b=record["qid_b"],
                    doc_a=record["doc_a"],
                    doc_b=record["doc_b"],
                )
            )
        except KeyError as exc:
            raise formats.FormatError(
                f"{args.pairs}:{line_no}: missing field {exc.args[0]!r}"
            ) from exc
    runs = formats.read_run(args.scores)

    def scorer(qid: str, doc: str) -> float:
        run = runs.get(qid)
        if run is None or doc not in run.scores:
            raise UndefinedMetricError(f"no score for ({qid!r}, {doc!r}) in {args.scores}")
        return run.scores[doc]

    accuracy = pairwise_accuracy(pairs, scorer)
    print(f"pairs: {len(pairs)}")
    print(f"pairwise accuracy: {accuracy:.4f}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"pairs": len(pairs), "pairwise_accuracy": accuracy}, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_analyze_interference(args) -> int:
    if args.bins < 1:
        raise _UsageError("--bins must be a positive integer")
    vocab = Vocabulary()
    args.method = None
    args.lambda_ = None
    args.m = None
    queries = _load_queries(args, vocab)
    diffs = [q for q in queries if q.operator == OP_DIFFERENCE]
    dropped = len(queries) - len(diffs)
    if dropped:
        log.warning("ignoring %d non-difference queries", dropped)
    metric_by_qid: dict[str, float] = {}
    with open(args.per_query_metrics, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 2:
                raise formats.FormatError(
                    f"{args.per_query_metrics}:{line_no}: expected qid<TAB>value"
                )
            try:
                metric_by_qid[parts[0]] = float(parts[-1])
            except ValueError:
                raise formats.FormatError(
                    f"{args.per_query_metrics}:{line_no}: bad metric value"
                ) from None

    def metric(qid: str) -> float:
        if qid not in metric_by_qid:
            raise UndefinedMetricError(f"no per-query metric for {qid!r}")
        return metric_by_qid[qid]

    bins = interference_bins(diffs, metric, n_bins=args.bins)
    print(f"{'similarity range':<24} {'mean metric':>12} {'queries':>8}")
    for b in bins:
        print(f"[{b.low:.4f}, {b.high:.4f}]{'':<6} {b.mean_metric:>12.4f} {b.count:>8}")
    if args.out:
        payload = [
            {"low": b.low, "high": b.high, "mean_metric": b.mean_metric, "count": b.count}
            for b in bins
        ]
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(
        level=getattr(logging, os.environ.get("SETVEC_LOG", "warning").upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SetvecError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort bucket for exit code 3
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

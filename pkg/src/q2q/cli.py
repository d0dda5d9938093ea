"""Command-line client over the same operations the HTTP service uses.

Commands: ingest, ingest-wikidata, query, serve, reindex, eval-ablation,
save-index, load-index. Flags mirror config keys; precedence is
flags > environment > config file > defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .config import ServiceConfig, load_config
from .errors import Q2QError
from .index import QuestionIndex
from .pipeline import IngestionPipeline
from .qgen import HttpGenerationClient, QuestionGenerator
from .retrieval import RetrievalEngine
from .service import (
    build_backend,
    load_state,
    parse_articles_jsonl,
    persist_state,
    result_to_json,
)
from .wikidata import SparqlClient


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--embedding-endpoint", dest="embedding_endpoint")
    parser.add_argument("--embedding-dim", dest="embedding_dim", type=int)
    parser.add_argument("--generation-endpoint", dest="generation_endpoint")
    parser.add_argument("--sparql-endpoint", dest="sparql_endpoint")
    parser.add_argument("--index-path", dest="index_path")
    parser.add_argument("--store-path", dest="store_path")
    parser.add_argument("--sentence-threshold", dest="sentence_threshold", type=float)
    parser.add_argument("--default-k", dest="default_k", type=int)
    parser.add_argument("--parallelism", dest="parallelism", type=int)
    parser.add_argument("--language", dest="language")


_CONFIG_KEYS = (
    "embedding_endpoint",
    "embedding_dim",
    "generation_endpoint",
    "sparql_endpoint",
    "index_path",
    "store_path",
    "sentence_threshold",
    "default_k",
    "parallelism",
    "language",
)


def _config_from_args(args: argparse.Namespace) -> ServiceConfig:
    overrides = {key: getattr(args, key, None) for key in _CONFIG_KEYS}
    return load_config(path=args.config, overrides=overrides)


def _pipeline(config: ServiceConfig, store, index) -> IngestionPipeline:
    if not config.generation_endpoint:
        raise Q2QError(
            "ingestion needs a generation endpoint (--generation-endpoint "
            "or Q2Q_GENERATION_ENDPOINT)"
        )
    generator = QuestionGenerator(HttpGenerationClient(config.generation_endpoint))
    backend = build_backend(config)
    return IngestionPipeline(store, index, generator, backend, parallelism=config.parallelism)


def _print_report(report, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(
            f"units: {report.units}  questions indexed: {report.questions_indexed}  "
            f"entries deleted: {report.deleted_entries}  failed: {len(report.failed_units)}"
        )
        for failed in report.failed_units:
            print(f"  failed {failed.kind} {failed.hash_hex[:12]}…: {failed.reason}")


def cmd_ingest(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    store, index = load_state(config)
    with open(args.file, "rb") as fh:
        articles = parse_articles_jsonl(fh.read())
    report = _pipeline(config, store, index).ingest_articles(articles)
    persist_state(config, store, index)
    _print_report(report, args.json)
    return 0


def cmd_ingest_wikidata(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    store, index = load_state(config)
    sparql = SparqlClient(config.sparql_endpoint, language=config.language)
    report = _pipeline(config, store, index).ingest_wikidata(args.qid, sparql, config.language)
    persist_state(config, store, index)
    _print_report(report, args.json)
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    store, index = load_state(config)
    engine = RetrievalEngine(
        index, store, build_backend(config), sentence_threshold=config.sentence_threshold
    )
    results = engine.answer(args.text, args.k or config.default_k)
    print(json.dumps({"results": [result_to_json(r) for r in results]}, indent=2, ensure_ascii=False))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _config_from_args(args)
    host = args.host or config.listen_host
    port = args.port or config.listen_port
    uvicorn.run(create_app(config), host=host, port=port)
    return 0


def cmd_reindex(args: argparse.Namespace) -> int:
    # Same hash-diff path as ingest; spelled separately so the intent
    # (refresh an already-ingested corpus) shows up in shell history.
    return cmd_ingest(args)


def cmd_eval_ablation(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    store, index = load_state(config)
    engine = RetrievalEngine(index, store, build_backend(config))
    with open(args.queries, "r", encoding="utf-8") as fh:
        queries = [line.strip() for line in fh if line.strip()]
    rows = engine.ablation_rows(queries)

    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["query", "q2q_score", "q2p_score"])
        for query, q2q_score, q2p_score in rows:
            writer.writerow([query, f"{q2q_score:.4f}", f"{q2p_score:.4f}"])
    finally:
        if args.output:
            out.close()

    q2q_mean = sum(r[1] for r in rows) / len(rows)
    q2p_mean = sum(r[2] for r in rows) / len(rows)
    print(f"mean question-to-question score: {q2q_mean:.4f}", file=sys.stderr)
    print(f"mean question-to-passage score:  {q2p_mean:.4f}", file=sys.stderr)
    return 0


def cmd_save_index(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    _, index = load_state(config)
    written = index.save(args.dest)
    print(f"wrote {written} bytes ({index.count()} entries) to {args.dest}")
    return 0


def cmd_load_index(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    index = QuestionIndex.load(args.src)
    index.save(config.index_path)
    print(f"loaded {index.count()} entries (dim {index.dim}) into {config.index_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="q2q", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="ingest a JSON Lines article file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("ingest-wikidata", help="ingest all statements of a Wikidata item")
    p.add_argument("qid")
    p.add_argument("--json", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_ingest_wikidata)

    p = sub.add_parser("query", help="answer a query from the local index")
    p.add_argument("text")
    p.add_argument("-k", type=int, default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("reindex", help="re-ingest a corpus file, touching only changed passages")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_reindex)

    p = sub.add_parser(
        "eval-ablation",
        help="CSV of question-to-question vs question-to-passage scores for a query file",
    )
    p.add_argument("queries", help="text file, one query per line")
    p.add_argument("--output", help="CSV destination (default stdout)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval_ablation)

    p = sub.add_parser("save-index", help="write the configured index to a new file")
    p.add_argument("dest")
    _add_config_flags(p)
    p.set_defaults(func=cmd_save_index)

    p = sub.add_parser("load-index", help="validate an index file and install it")
    p.add_argument("src")
    _add_config_flags(p)
    p.set_defaults(func=cmd_load_index)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Q2QError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

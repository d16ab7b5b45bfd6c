"""Command-line pipeline driver and service launcher."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import PipelineConfig, ServiceConfig
from .errors import EventGraphError
from .pipeline import (
    Store,
    stage_cluster,
    stage_extract,
    stage_graph_build,
    stage_index,
    stage_ingest,
    stage_prepare,
)
from .query import nlq_search
from .resources import Resources


def _add_resource_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stoplist", help="stop-word list file (one word per line)")
    parser.add_argument("--lemmas", help="lemma lexicon TSV (form<TAB>lemma)")
    parser.add_argument("--verbs", help="verb lexicon TSV (form<TAB>lemma)")
    parser.add_argument("--function-words", help="function word list file")
    parser.add_argument("--org-suffixes", help="organization suffix list file")
    parser.add_argument("--persons", help="person name gazetteer file")
    parser.add_argument("--gazetteer", help="geographic gazetteer CSV (name,country,population)")


def _resources(args: argparse.Namespace) -> Resources:
    return Resources.load(
        stoplist_path=getattr(args, "stoplist", None),
        lemma_path=getattr(args, "lemmas", None),
        verb_path=getattr(args, "verbs", None),
        function_words_path=getattr(args, "function_words", None),
        org_suffix_path=getattr(args, "org_suffixes", None),
        persons_path=getattr(args, "persons", None),
        gazetteer_path=getattr(args, "gazetteer", None),
    )


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    kwargs = {}
    if getattr(args, "dims", None):
        kwargs["embed_dims"] = args.dims
    if getattr(args, "pca_dims", None):
        kwargs["pca_dims"] = args.pca_dims
    if getattr(args, "min_pts", None):
        kwargs["dbscan_min_pts"] = args.min_pts
    if getattr(args, "eps_min", None) or getattr(args, "eps_max", None) or getattr(args, "eps_step", None):
        lo = args.eps_min or 0.01
        hi = args.eps_max or 0.50
        step = args.eps_step or 0.01
        grid = []
        k = 0
        while True:
            v = round(lo + k * step, 10)
            if v > hi + 1e-12:
                break
            grid.append(v)
            k += 1
        kwargs["eps_grid"] = tuple(grid)
    if getattr(args, "english_threshold", None):
        kwargs["english_threshold"] = args.english_threshold
    return PipelineConfig(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventgraph",
        description="Event-centric knowledge retrieval pipeline and service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load corpora and RSS feeds into a store")
    p.add_argument("--corpus", action="append", default=[], help="JSONL corpus path (repeatable)")
    p.add_argument("--rss", action="append", default=[], help="RSS 2.0 feed URL or path (repeatable)")
    p.add_argument("--out", required=True, help="store directory")

    p = sub.add_parser("prepare", help="tokenize, filter, and lemmatize stored documents")
    p.add_argument("--store", required=True)
    p.add_argument("--english-threshold", type=float)
    _add_resource_args(p)

    p = sub.add_parser("cluster", help="embed, reduce, and cluster documents per day")
    p.add_argument("--store", required=True)
    p.add_argument("--vectors", required=True, help="word vector file")
    p.add_argument("--dims", type=int, help="word vector dimensionality (default 300)")
    p.add_argument("--pca-dims", type=int, help="reduced dimensionality (default 100)")
    p.add_argument("--min-pts", type=int, help="DBSCAN min_pts (default 3)")
    p.add_argument("--eps-min", type=float)
    p.add_argument("--eps-max", type=float)
    p.add_argument("--eps-step", type=float)

    p = sub.add_parser("extract", help="attach 5W1H descriptors to clusters")
    p.add_argument("--store", required=True)
    _add_resource_args(p)

    p = sub.add_parser("graph-build", help="extract triples and build the entity graph")
    p.add_argument("--store", required=True)
    _add_resource_args(p)

    p = sub.add_parser("index", help="build the inverted index over entities and documents")
    p.add_argument("--store", required=True)

    p = sub.add_parser("serve", help="serve the HTTP API over a prebuilt store")
    p.add_argument("--config", required=True, help="service config JSON")

    p = sub.add_parser("query", help="run a search against a store and print JSON")
    p.add_argument("q")
    p.add_argument("--store", required=True)
    _add_resource_args(p)

    p = sub.add_parser("stats", help="print store counts")
    p.add_argument("--store", required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (EventGraphError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "ingest":
        count = stage_ingest(args.corpus, args.rss, args.out)
        print(f"ingested {count} documents into {args.out}")
        return 0
    if args.command == "prepare":
        kept, rejected = stage_prepare(args.store, _resources(args), _pipeline_config(args))
        print(f"prepared {kept} documents ({rejected} rejected)")
        return 0
    if args.command == "cluster":
        clusters = stage_cluster(args.store, args.vectors, _pipeline_config(args))
        print(f"built {len(clusters)} clusters")
        return 0
    if args.command == "extract":
        count = stage_extract(args.store, _resources(args), _pipeline_config(args))
        print(f"extracted descriptors for {count} clusters")
        return 0
    if args.command == "graph-build":
        graph = stage_graph_build(args.store, _resources(args))
        print(f"graph: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
        return 0
    if args.command == "index":
        index = stage_index(args.store)
        vocab = sum(len(index.postings[f]) for f in index.postings)
        print(f"indexed {vocab} field tokens")
        return 0
    if args.command == "serve":
        import uvicorn

        from .api import create_app

        config = ServiceConfig.from_file(args.config)
        store = Store.load(config.store_dir)
        app = create_app(store, config)
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
        return 0
    if args.command == "query":
        store = Store.load(args.store, res=_resources(args))
        result = nlq_search(store.index, store.graph, args.q, store.resources, store.cfg)
        print(json.dumps(result.to_record(), sort_keys=True))
        return 0
    if args.command == "stats":
        store_dir = Path(args.store)
        if store_dir.exists():
            stats = Store.load(store_dir).stats()
        else:
            stats = {"documents": 0, "clusters": 0, "nodes": 0, "edges": 0}
        print(json.dumps(stats, sort_keys=True))
        return 0
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())

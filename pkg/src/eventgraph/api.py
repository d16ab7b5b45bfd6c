"""Read-only HTTP JSON API over a prebuilt store."""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response

from .config import ServiceConfig
from .errors import EmptyQuery, QuerySyntaxError, UnknownEdge
from .graph import NODE_TYPES, RelationEdge
from .ingest import Document, format_timestamp
from .pipeline import Store
from .query import NODE_ITEM, Or, Phrase, Term, execute_query, nlq_search
from .textprep import tokenize

SOURCE_VALUES = ("news", "social")


def _json_response(payload, status_code: int = 200) -> Response:
    # canonical bytes: identical requests must return identical bodies
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


def _doc_payload(doc: Document, score: float | None = None) -> dict:
    payload = {
        "id": doc.id,
        "source_type": doc.source_type,
        "source_name": doc.source_name,
        "url": doc.url,
        "title": doc.title,
        "body": doc.body,
        "published_at": format_timestamp(doc.published_at),
    }
    if score is not None:
        payload["score"] = score
    return payload


def _edge_payload(edge: RelationEdge, score: float) -> dict:
    return {
        "id": edge.edge_id,
        "src": edge.src,
        "dst": edge.dst,
        "relation": edge.relation,
        "provenance": [p.to_record() for p in edge.provenance],
        "score": score,
    }


def _parse_filter(raw: str | None, allowed: tuple[str, ...]) -> list[str] | None:
    """Comma-separated filter values; returns None for 'no filter'."""
    if raw is None or raw == "":
        return None
    values = [v.strip() for v in raw.split(",") if v.strip()]
    for v in values:
        if v not in allowed:
            raise ValueError(f"invalid filter value: {v}")
    return values


def create_app(store: Store, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="eventgraph", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def cors_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["Access-Control-Allow-Origin"] = config.cors_allowed_origin
        return response

    def paginate(items: list, page: int) -> list:
        start = page * config.page_size
        return items[start:start + config.page_size]

    @app.get("/api/search")
    def search(q: str = "", types: str | None = None, sources: str | None = None,
               page: int = 0):
        if not q.strip():
            return _error(400, "query is empty")
        if page < 0:
            return _error(400, "page must be >= 0")
        try:
            type_filter = _parse_filter(types, NODE_TYPES)
            source_filter = _parse_filter(sources, SOURCE_VALUES)
        except ValueError as exc:
            return _error(400, str(exc))
        try:
            result = nlq_search(store.index, store.graph, q, store.resources, store.cfg)
        except (EmptyQuery, QuerySyntaxError) as exc:
            return _error(400, str(exc))

        nodes = []
        kept_node_ids = set()
        for node_id in result.node_ids:
            node = store.graph.nodes[node_id]
            if type_filter is not None and node.type not in type_filter:
                continue
            kept_node_ids.add(node_id)
            nodes.append(
                {
                    "id": node.node_id,
                    "name": node.name,
                    "type": node.type,
                    "aliases": sorted(node.aliases),
                    "props": node.props,
                    "score": result.scores[(NODE_ITEM, node_id)],
                }
            )
        edges = []
        for edge_id in result.edge_ids:
            edge = store.graph.edges[edge_id]
            if edge.src not in kept_node_ids or edge.dst not in kept_node_ids:
                continue
            if source_filter is not None and not any(
                p.source_type in source_filter for p in edge.provenance
            ):
                continue
            edges.append(_edge_payload(edge, result.scores[("edge", edge_id)]))
        documents = []
        for doc_id in result.doc_ids:
            doc = store.documents.get(doc_id)
            if doc is None:
                continue
            if source_filter is not None and doc.source_type not in source_filter:
                continue
            documents.append(_doc_payload(doc, result.scores[("doc", doc_id)]))

        return _json_response(
            {
                "query": q,
                "page": page,
                "page_size": config.page_size,
                "nodes": paginate(nodes, page),
                "edges": paginate(edges, page),
                "documents": paginate(documents, page),
            }
        )

    @app.get("/api/edges/{edge_id}/documents")
    def edge_documents(edge_id: int):
        try:
            edge = store.graph.edge(edge_id)
        except UnknownEdge:
            return _error(404, f"unknown edge: {edge_id}")

        cluster = store.cluster_by_id.get(edge.provenance[0].cluster_id)
        representative = None
        members = []
        if cluster is not None:
            rep_doc = store.documents.get(cluster.representative_doc_id)
            if rep_doc is not None:
                representative = _doc_payload(rep_doc)
            members = [
                _doc_payload(store.documents[doc_id])
                for doc_id in cluster.member_doc_ids
                if doc_id in store.documents
            ]

        related = []
        name_queries = []
        for node_id in (edge.src, edge.dst):
            tokens = tokenize(store.graph.nodes[node_id].name)
            if len(tokens) == 1:
                name_queries.append(Term(tokens[0]))
            elif tokens:
                name_queries.append(Phrase(tuple(tokens)))
        if name_queries:
            ast = name_queries[0] if len(name_queries) == 1 else Or(tuple(name_queries))
            matches = execute_query(store.index, ast, fuzzy_max_edits=store.cfg.fuzzy_max_edits)
            clustered = store.clustered_doc_ids()
            for doc_id in matches.doc_ids:
                if doc_id in clustered or doc_id not in store.documents:
                    continue
                related.append(_doc_payload(store.documents[doc_id],
                                            matches.scores[("doc", doc_id)]))

        return _json_response(
            {
                "edge": _edge_payload(edge, 0.0),
                "representative": representative,
                "cluster_members": members,
                "related": related,
            }
        )

    @app.get("/api/timeline")
    def timeline(q: str = ""):
        if not q.strip():
            return _error(400, "query is empty")
        try:
            result = nlq_search(store.index, store.graph, q, store.resources, store.cfg)
        except (EmptyQuery, QuerySyntaxError) as exc:
            return _error(400, str(exc))
        buckets: dict[str, list[Document]] = {}
        for doc_id in result.doc_ids:
            doc = store.documents.get(doc_id)
            if doc is not None:
                buckets.setdefault(doc.period, []).append(doc)
        payload = [
            {
                "date": date,
                "documents": [
                    _doc_payload(d)
                    for d in sorted(buckets[date], key=lambda d: (d.published_at, d.id))
                ],
            }
            for date in sorted(buckets)
        ]
        return _json_response(payload)

    return app

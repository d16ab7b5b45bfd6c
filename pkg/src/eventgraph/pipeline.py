"""Stage orchestration over a store directory.

Stages are batch, single-writer, and deterministic: running the same stage
twice over the same inputs produces byte-identical outputs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from urllib.request import urlopen

import numpy as np

from .clustering import EventCluster, cluster_period, load_clusters, write_clusters
from .config import PipelineConfig
from .descriptors import extract_descriptors
from .embedding import (
    DocVector,
    clamp_pca_dims,
    embed_document,
    load_vectors,
    pca_fit,
    pca_transform,
)
from .graph import KnowledgeGraph, Provenance
from .index import InvertedIndex, index_items
from .ingest import (
    Document,
    dedupe_corpus,
    fetch_rss,
    load_documents,
    read_corpus,
    write_documents,
)
from .relations import dedupe_triples, detect_entities, extract_triples, filter_triples
from .resources import Resources
from .textprep import PreparedDoc, Rejected, prepare

log = logging.getLogger(__name__)

DOCUMENTS_FILE = "documents.jsonl"
PREPARED_FILE = "prepared.jsonl"
REJECTED_FILE = "rejected.jsonl"
CLUSTERS_FILE = "clusters.jsonl"
EPS_FILE = "eps.json"
GRAPH_DIR = "graph"
INDEX_DIR = "index"


def _write_jsonl(records: list[dict], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
    tmp.replace(path)


def stage_ingest(
    corpus_paths: list[str],
    rss_sources: list[str],
    store_dir: str | Path,
    now: datetime | None = None,
) -> int:
    """Load, dedupe, and persist documents into the store."""
    now = now or datetime.now(timezone.utc)
    docs: list[Document] = []
    for path in corpus_paths:
        docs.extend(read_corpus(path))
    for source in rss_sources:
        if source.startswith(("http://", "https://")):
            with urlopen(source) as resp:  # noqa: S310 - explicit user-supplied feed
                feed_xml = resp.read().decode("utf-8")
            name = source
        else:
            feed_xml = Path(source).read_text(encoding="utf-8")
            name = Path(source).stem
        docs.extend(fetch_rss(feed_xml, source_name=name, now=now))
    seen = set()
    unique = []
    for doc in docs:
        if doc.id in seen:
            raise ValueError(f"duplicate document id: {doc.id}")
        seen.add(doc.id)
        unique.append(doc)
    deduped = dedupe_corpus(unique)
    write_documents(deduped, Path(store_dir) / DOCUMENTS_FILE)
    return len(deduped)


def stage_prepare(store_dir: str | Path, res: Resources, cfg: PipelineConfig) -> tuple[int, int]:
    """Tokenize/lemmatize every stored document; record rejections."""
    store = Path(store_dir)
    docs = load_documents(store / DOCUMENTS_FILE)
    prepared_records = []
    rejected_records = []
    for doc in docs:
        result = prepare(doc, set(res.stoplist), res.lemma_lexicon, cfg.english_threshold)
        if isinstance(result, Rejected):
            rejected_records.append({"doc_id": result.doc_id, "reason": result.reason})
        else:
            prepared_records.append(
                {
                    "doc_id": result.doc_id,
                    "tokens": list(result.tokens),
                    "raw_token_count": result.raw_token_count,
                    "stopword_ratio": result.stopword_ratio,
                }
            )
    _write_jsonl(prepared_records, store / PREPARED_FILE)
    _write_jsonl(rejected_records, store / REJECTED_FILE)
    return len(prepared_records), len(rejected_records)


def load_prepared(store_dir: str | Path) -> list[PreparedDoc]:
    out = []
    with open(Path(store_dir) / PREPARED_FILE, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out.append(
                PreparedDoc(
                    doc_id=rec["doc_id"],
                    tokens=tuple(rec["tokens"]),
                    raw_token_count=rec["raw_token_count"],
                    stopword_ratio=rec["stopword_ratio"],
                )
            )
    return out


def stage_cluster(
    store_dir: str | Path,
    vectors_path: str | Path,
    cfg: PipelineConfig,
) -> list[EventCluster]:
    """Embed prepared documents, reduce per source type, cluster per day."""
    store = Path(store_dir)
    docs = {d.id: d for d in load_documents(store / DOCUMENTS_FILE)}
    prepared = load_prepared(store)
    table = load_vectors(vectors_path, cfg.embed_dims)

    by_type: dict[str, dict[str, np.ndarray]] = {"news": {}, "social": {}}
    for p in prepared:
        doc = docs.get(p.doc_id)
        if doc is None:
            continue
        emb = embed_document(p, table)
        if emb is None:
            log.warning("no vocabulary overlap for %s; skipped", p.doc_id)
            continue
        by_type[doc.source_type][p.doc_id] = emb.vector

    clusters: list[EventCluster] = []
    eps_by_group: dict[str, float] = {}
    for source_type in ("news", "social"):
        vectors = by_type[source_type]
        if len(vectors) < 2:
            if vectors:
                log.warning("only %d %s documents; skipping clustering", len(vectors), source_type)
            continue
        doc_ids = sorted(vectors)
        k = clamp_pca_dims(cfg.pca_dims, len(doc_ids), cfg.embed_dims)
        model = pca_fit([DocVector(d, vectors[d]) for d in doc_ids], k)
        (store / f"pca_{source_type}.json").write_text(model.to_json() + "\n", encoding="utf-8")
        reduced = {d: pca_transform(model, vectors[d]) for d in doc_ids}

        by_period: dict[str, dict[str, np.ndarray]] = {}
        for doc_id, vec in reduced.items():
            by_period.setdefault(docs[doc_id].period, {})[doc_id] = vec
        for period in sorted(by_period):
            eps, _assignments, period_clusters = cluster_period(
                by_period[period], cfg.eps_grid, cfg.dbscan_min_pts, period, source_type
            )
            eps_by_group[f"{source_type}-{period}"] = eps
            clusters.extend(period_clusters)

    clusters.sort(key=lambda c: c.cluster_id)
    write_clusters(clusters, store / CLUSTERS_FILE)
    (store / EPS_FILE).write_text(
        json.dumps(eps_by_group, sort_keys=True) + "\n", encoding="utf-8"
    )
    return clusters


def stage_extract(store_dir: str | Path, res: Resources, cfg: PipelineConfig) -> int:
    """Attach 5W1H descriptor sets to every cluster record."""
    store = Path(store_dir)
    docs = {d.id: d for d in load_documents(store / DOCUMENTS_FILE)}
    clusters = load_clusters(store / CLUSTERS_FILE)
    enriched = []
    for cluster in clusters:
        rep = docs[cluster.representative_doc_id]
        entities = detect_entities(rep, res)
        descriptor_set = extract_descriptors(rep, entities, cfg, res, cluster.cluster_id)
        enriched.append(
            EventCluster(
                cluster_id=cluster.cluster_id,
                period=cluster.period,
                source_type=cluster.source_type,
                member_doc_ids=cluster.member_doc_ids,
                representative_doc_id=cluster.representative_doc_id,
                centroid=cluster.centroid,
                descriptors=descriptor_set.to_record(),
            )
        )
    write_clusters(enriched, store / CLUSTERS_FILE)
    return len(enriched)


def stage_graph_build(store_dir: str | Path, res: Resources) -> KnowledgeGraph:
    """Extract triples from every representative document and upsert them."""
    store = Path(store_dir)
    docs = {d.id: d for d in load_documents(store / DOCUMENTS_FILE)}
    clusters = load_clusters(store / CLUSTERS_FILE)
    graph = KnowledgeGraph()
    for cluster in sorted(clusters, key=lambda c: c.cluster_id):
        rep = docs[cluster.representative_doc_id]
        entities = detect_entities(rep, res)
        triples = dedupe_triples(filter_triples(extract_triples(rep, entities, res)))
        prov = Provenance(
            doc_id=rep.id,
            cluster_id=cluster.cluster_id,
            published_at=rep.published_at,
            source_type=rep.source_type,
        )
        for triple in triples:
            graph.upsert_triple(triple, prov, res.gazetteer)
    graph.save(store / GRAPH_DIR)
    return graph


def stage_index(store_dir: str | Path) -> InvertedIndex:
    """Index graph entities plus all stored documents."""
    store = Path(store_dir)
    docs = load_documents(store / DOCUMENTS_FILE)
    graph = KnowledgeGraph.load(store / GRAPH_DIR)
    index = index_items(sorted(graph.nodes.values(), key=lambda n: n.node_id), docs)
    index.save(store / INDEX_DIR)
    return index


@dataclass
class Store:
    """Everything the read-only service needs, loaded once."""

    documents: dict[str, Document]
    clusters: list[EventCluster]
    graph: KnowledgeGraph
    index: InvertedIndex
    resources: Resources
    cfg: PipelineConfig = field(default_factory=PipelineConfig)

    @classmethod
    def load(cls, store_dir: str | Path, res: Resources | None = None,
             cfg: PipelineConfig | None = None) -> "Store":
        store = Path(store_dir)
        docs_path = store / DOCUMENTS_FILE
        documents = {d.id: d for d in load_documents(docs_path)} if docs_path.exists() else {}
        clusters_path = store / CLUSTERS_FILE
        clusters = load_clusters(clusters_path) if clusters_path.exists() else []
        graph = KnowledgeGraph.load(store / GRAPH_DIR)
        index_path = store / INDEX_DIR
        index = InvertedIndex.load(index_path) if (index_path / "meta.json").exists() \
            else index_items([], [])
        return cls(
            documents=documents,
            clusters=clusters,
            graph=graph,
            index=index,
            resources=res or Resources.load(),
            cfg=cfg or PipelineConfig(),
        )

    @property
    def cluster_by_id(self) -> dict[str, EventCluster]:
        return {c.cluster_id: c for c in self.clusters}

    def clustered_doc_ids(self) -> set[str]:
        out: set[str] = set()
        for c in self.clusters:
            out.update(c.member_doc_ids)
        return out

    def stats(self) -> dict[str, int]:
        return {
            "documents": len(self.documents),
            "clusters": len(self.clusters),
            "nodes": len(self.graph.nodes),
            "edges": len(self.graph.edges),
        }

"""Persistent disambiguated property graph built from relation triples."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional

from .errors import CorruptSnapshot, UnknownEdge, UnknownNode
from .ingest import format_timestamp, parse_timestamp
from .relations import DATE, LOCATION, MISC, RelationTriple
from .resources import GeoGazetteer

COUNTRY = "COUNTRY"
NODE_TYPES = ("PERSON", "ORG", "LOCATION", "COUNTRY", "MISC")

IN_COUNTRY_RELATION = "in_country"

_ARTICLES = ("a ", "an ", "the ")


@dataclass
class EntityNode:
    node_id: int
    name: str
    type: str
    aliases: set[str] = field(default_factory=set)
    props: dict[str, str] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "node_id": self.node_id,
            "name": self.name,
            "type": self.type,
            "aliases": sorted(self.aliases),
            "props": self.props,
        }


@dataclass(frozen=True)
class Provenance:
    doc_id: str
    cluster_id: str
    published_at: datetime
    source_type: str

    def to_record(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "cluster_id": self.cluster_id,
            "published_at": format_timestamp(self.published_at),
            "source_type": self.source_type,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Provenance":
        return cls(
            doc_id=rec["doc_id"],
            cluster_id=rec["cluster_id"],
            published_at=parse_timestamp(rec["published_at"]),
            source_type=rec["source_type"],
        )


@dataclass
class RelationEdge:
    edge_id: int
    src: int
    dst: int
    relation: str
    provenance: list[Provenance]

    def to_record(self) -> dict:
        return {
            "edge_id": self.edge_id,
            "src": self.src,
            "dst": self.dst,
            "relation": self.relation,
            "provenance": [p.to_record() for p in self.provenance],
        }


class KnowledgeGraph:
    """In-memory property graph with monotonic ids and JSONL snapshots."""

    def __init__(self) -> None:
        self.nodes: dict[int, EntityNode] = {}
        self.edges: dict[int, RelationEdge] = {}
        self._next_node_id = 1
        self._next_edge_id = 1
        # (lowercase surface, type) -> node_id, covering names and aliases
        self._surface: dict[tuple[str, str], int] = {}
        self._edge_key: dict[tuple[int, str, int], int] = {}
        self._adjacency: dict[int, list[int]] = {}

    # -- node resolution ----------------------------------------------------

    def _register_surface(self, surface: str, node: EntityNode) -> None:
        self._surface[(surface.lower(), node.type)] = node.node_id

    def _create_node(self, name: str, type_: str) -> EntityNode:
        node = EntityNode(node_id=self._next_node_id, name=name, type=type_)
        self._next_node_id += 1
        self.nodes[node.node_id] = node
        self._register_surface(name, node)
        return node

    def find_node(self, name: str, type_: str) -> Optional[EntityNode]:
        node_id = self._surface.get((name.lower(), type_))
        return self.nodes.get(node_id) if node_id is not None else None

    def disambiguate_name(self, text: str, type_: str) -> int:
        """Resolve a surface mention to a node id, creating one if needed.

        Person mentions get last-name handling: a lone surname merges into
        the unique full-name node bearing it, and a full name promotes the
        unique lone-surname node. Ambiguity creates a fresh node instead of
        guessing.
        """
        if not text.strip():
            raise ValueError("entity text must be non-empty")
        existing = self.find_node(text, type_)
        if existing is not None:
            return existing.node_id

        if type_ == "PERSON":
            tokens = text.split()
            if len(tokens) == 1:
                candidates = [
                    n for n in self.nodes.values()
                    if n.type == "PERSON"
                    and len(n.name.split()) > 1
                    and n.name.split()[-1].lower() == text.lower()
                ]
                if len(candidates) == 1:
                    node = candidates[0]
                    node.aliases.add(text.lower())
                    self._register_surface(text, node)
                    return node.node_id
            else:
                last = tokens[-1].lower()
                candidates = [
                    n for n in self.nodes.values()
                    if n.type == "PERSON" and n.name.split()[-1].lower() == last
                ]
                if len(candidates) == 1 and len(candidates[0].name.split()) == 1:
                    node = candidates[0]
                    node.aliases.add(node.name.lower())
                    node.name = text
                    node.aliases.discard(text.lower())
                    self._register_surface(text, node)
                    return node.node_id

        return self._create_node(text, type_).node_id

    # -- edges ---------------------------------------------------------------

    def _append_provenance(self, edge: RelationEdge, prov: Provenance) -> None:
        if all(p.doc_id != prov.doc_id for p in edge.provenance):
            edge.provenance.append(prov)

    def add_edge(self, src: int, dst: int, relation: str, prov: Provenance) -> tuple[int, bool]:
        """Find-or-create an edge; provenance is appended, deduped by doc_id."""
        if src not in self.nodes:
            raise UnknownNode(src)
        if dst not in self.nodes:
            raise UnknownNode(dst)
        key = (src, relation, dst)
        edge_id = self._edge_key.get(key)
        if edge_id is not None:
            self._append_provenance(self.edges[edge_id], prov)
            return edge_id, False
        edge = RelationEdge(edge_id=self._next_edge_id, src=src, dst=dst,
                            relation=relation, provenance=[prov])
        self._next_edge_id += 1
        self.edges[edge.edge_id] = edge
        self._edge_key[key] = edge.edge_id
        for endpoint in (src, dst):
            self._adjacency.setdefault(endpoint, []).append(edge.edge_id)
        return edge.edge_id, True

    def upsert_triple(self, triple: RelationTriple, prov: Provenance,
                      gazetteer: GeoGazetteer | None = None) -> tuple[int, bool]:
        """Insert a filtered triple, disambiguating both endpoints.

        Location endpoints also get their in_country edge when the
        gazetteer knows the place.
        """
        src = self._resolve_endpoint(triple.subject, triple.subject_entity, prov, gazetteer)
        dst = self._resolve_endpoint(triple.object, triple.object_entity, prov, gazetteer)
        return self.add_edge(src, dst, triple.relation, prov)

    def _resolve_endpoint(self, text, entity, prov, gazetteer) -> int:
        if entity is not None:
            node_type = MISC if entity.type == DATE else entity.type
            name = entity.text
        else:
            node_type = MISC
            name = _strip_leading_article(text)
        node_id = self.disambiguate_name(name, node_type)
        if node_type == LOCATION and gazetteer is not None:
            self.link_geo(node_id, gazetteer, prov)
        return node_id

    def link_geo(self, location_node: int, gazetteer: GeoGazetteer,
                 prov: Provenance) -> Optional[int]:
        """Tie a LOCATION node to its COUNTRY node via the gazetteer.

        Multiple rows with the same name resolve to the highest population.
        Place names that are themselves country names get no self-edge.
        """
        node = self.nodes.get(location_node)
        if node is None:
            raise UnknownNode(location_node)
        if node.type != LOCATION:
            raise ValueError(f"node {location_node} is {node.type}, not {LOCATION}")
        row = gazetteer.lookup(node.name)
        if row is None:
            return None
        node.props.setdefault("country", row.country)
        if row.country.lower() == node.name.lower():
            return None
        country = self.find_node(row.country, COUNTRY)
        if country is None:
            country = self._create_node(row.country, COUNTRY)
        edge_id, _ = self.add_edge(location_node, country.node_id, IN_COUNTRY_RELATION, prov)
        return edge_id

    # -- retrieval -----------------------------------------------------------

    def incident_edges(self, node_id: int) -> list[int]:
        return sorted(self._adjacency.get(node_id, []))

    def neighborhood(self, node_ids: list[int]) -> tuple[list[EntityNode], list[RelationEdge]]:
        """Seed nodes, their incident edges, and the opposite endpoints."""
        for node_id in node_ids:
            if node_id not in self.nodes:
                raise UnknownNode(node_id)
        node_set = set(node_ids)
        edge_ids: set[int] = set()
        for node_id in node_ids:
            edge_ids.update(self._adjacency.get(node_id, []))
        for edge_id in edge_ids:
            edge = self.edges[edge_id]
            node_set.add(edge.src)
            node_set.add(edge.dst)
        nodes = [self.nodes[i] for i in sorted(node_set)]
        edges = [self.edges[i] for i in sorted(edge_ids)]
        return nodes, edges

    def edge(self, edge_id: int) -> RelationEdge:
        if edge_id not in self.edges:
            raise UnknownEdge(edge_id)
        return self.edges[edge_id]

    # -- persistence ----------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        """Write nodes.jsonl and edges.jsonl atomically (temp then rename)."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for filename, records in (
            ("nodes.jsonl", [self.nodes[i].to_record() for i in sorted(self.nodes)]),
            ("edges.jsonl", [self.edges[i].to_record() for i in sorted(self.edges)]),
        ):
            target = directory / filename
            tmp = directory / (filename + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for rec in records:
                    fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
            tmp.replace(target)

    @classmethod
    def load(cls, directory: str | Path) -> "KnowledgeGraph":
        directory = Path(directory)
        graph = cls()
        nodes_path = directory / "nodes.jsonl"
        edges_path = directory / "edges.jsonl"
        for line_no, line in enumerate(_read_lines(nodes_path), start=1):
            try:
                rec = json.loads(line)
                node = EntityNode(
                    node_id=int(rec["node_id"]),
                    name=rec["name"],
                    type=rec["type"],
                    aliases=set(rec["aliases"]),
                    props=dict(rec["props"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorruptSnapshot(str(nodes_path), line_no) from exc
            graph.nodes[node.node_id] = node
            graph._register_surface(node.name, node)
            for alias in node.aliases:
                graph._register_surface(alias, node)
        for line_no, line in enumerate(_read_lines(edges_path), start=1):
            try:
                rec = json.loads(line)
                edge = RelationEdge(
                    edge_id=int(rec["edge_id"]),
                    src=int(rec["src"]),
                    dst=int(rec["dst"]),
                    relation=rec["relation"],
                    provenance=[Provenance.from_record(p) for p in rec["provenance"]],
                )
                if not edge.provenance:
                    raise ValueError("empty provenance")
                if edge.src not in graph.nodes or edge.dst not in graph.nodes:
                    raise ValueError("dangling endpoint")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorruptSnapshot(str(edges_path), line_no) from exc
            graph.edges[edge.edge_id] = edge
            graph._edge_key[(edge.src, edge.relation, edge.dst)] = edge.edge_id
            for endpoint in (edge.src, edge.dst):
                graph._adjacency.setdefault(endpoint, []).append(edge.edge_id)
        if graph.nodes:
            graph._next_node_id = max(graph.nodes) + 1
        if graph.edges:
            graph._next_edge_id = max(graph.edges) + 1
        return graph


def _strip_leading_article(text: str) -> str:
    lower = text.lower()
    for article in _ARTICLES:
        if lower.startswith(article) and len(text) > len(article):
            return text[len(article):]
    return text


def _read_lines(path: Path) -> Iterable[str]:
    if not path.exists():
        return []
    with open(path, "r", encoding="utf-8") as fh:
        return [line for line in fh if line.strip()]

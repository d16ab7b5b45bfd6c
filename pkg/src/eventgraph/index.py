"""Inverted index over entity names and document text."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .graph import EntityNode
from .ingest import Document
from .textprep import tokenize

ENTITY_FIELD = "entity_name"
TITLE_FIELD = "doc_title"
BODY_FIELD = "doc_body"
DOC_FIELDS = (TITLE_FIELD, BODY_FIELD)
FIELDS = (ENTITY_FIELD, TITLE_FIELD, BODY_FIELD)


@dataclass
class InvertedIndex:
    """Postings per field; positions kept for doc fields so phrases match.

    Entity phrase matching instead scans the stored name/alias token lists.
    Posting lists are sorted by item id (int node ids, str doc ids).
    """

    postings: dict[str, dict[str, list[tuple[int | str, int]]]] = field(
        default_factory=lambda: {f: {} for f in FIELDS})
    positions: dict[str, dict[str, dict[str, list[int]]]] = field(
        default_factory=lambda: {f: {} for f in DOC_FIELDS})
    entity_tokens: dict[int, list[list[str]]] = field(default_factory=dict)
    entity_types: dict[int, str] = field(default_factory=dict)
    doc_count: dict[str, int] = field(default_factory=lambda: {f: 0 for f in FIELDS})

    def vocabulary(self, field_name: str) -> list[str]:
        return sorted(self.postings[field_name])

    def document_frequency(self, field_name: str, token: str) -> int:
        return len(self.postings[field_name].get(token, ()))

    # -- persistence --------------------------------------------------------

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        files = {}
        for f in FIELDS:
            files[f"{f}.json"] = {
                "postings": {tok: [[i, tf] for i, tf in plist]
                             for tok, plist in self.postings[f].items()},
                "positions": ({tok: positions for tok, positions in self.positions[f].items()}
                              if f in DOC_FIELDS else {}),
            }
        files["meta.json"] = {
            "doc_count": self.doc_count,
            "entity_tokens": {str(i): toks for i, toks in self.entity_tokens.items()},
            "entity_types": {str(i): t for i, t in self.entity_types.items()},
        }
        for filename, payload in files.items():
            tmp = directory / (filename + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True, ensure_ascii=False)
            tmp.replace(directory / filename)

    @classmethod
    def load(cls, directory: str | Path) -> "InvertedIndex":
        directory = Path(directory)
        index = cls()
        for f in FIELDS:
            with open(directory / f"{f}.json", "r", encoding="utf-8") as fh:
                payload = json.load(fh)
            is_entity = f == ENTITY_FIELD
            index.postings[f] = {
                tok: [(int(i) if is_entity else str(i), int(tf)) for i, tf in plist]
                for tok, plist in payload["postings"].items()
            }
            if f in DOC_FIELDS:
                index.positions[f] = {
                    tok: {doc: [int(p) for p in plist] for doc, plist in by_doc.items()}
                    for tok, by_doc in payload["positions"].items()
                }
        with open(directory / "meta.json", "r", encoding="utf-8") as fh:
            meta = json.load(fh)
        index.doc_count = {f: int(meta["doc_count"][f]) for f in FIELDS}
        index.entity_tokens = {int(i): [list(t) for t in toks]
                               for i, toks in meta["entity_tokens"].items()}
        index.entity_types = {int(i): t for i, t in meta["entity_types"].items()}
        return index


def index_items(entities: list[EntityNode], docs: list[Document]) -> InvertedIndex:
    """Build the index; stop words are kept so phrases stay matchable."""
    index = InvertedIndex()
    index.doc_count[ENTITY_FIELD] = len(entities)
    index.doc_count[TITLE_FIELD] = len(docs)
    index.doc_count[BODY_FIELD] = len(docs)

    entity_postings: dict[str, dict[int, int]] = {}
    for node in sorted(entities, key=lambda n: n.node_id):
        token_lists = [tokenize(node.name)] + [tokenize(a) for a in sorted(node.aliases)]
        token_lists = [toks for toks in token_lists if toks]
        if not token_lists:
            continue
        index.entity_tokens[node.node_id] = token_lists
        index.entity_types[node.node_id] = node.type
        for toks in token_lists:
            for tok in toks:
                entity_postings.setdefault(tok, {})
                entity_postings[tok][node.node_id] = entity_postings[tok].get(node.node_id, 0) + 1
    index.postings[ENTITY_FIELD] = {
        tok: sorted(by_node.items()) for tok, by_node in entity_postings.items()
    }

    for field_name, text_of in ((TITLE_FIELD, lambda d: d.title),
                                (BODY_FIELD, lambda d: d.body)):
        postings: dict[str, dict[str, int]] = {}
        positions: dict[str, dict[str, list[int]]] = {}
        for doc in sorted(docs, key=lambda d: d.id):
            for pos, tok in enumerate(tokenize(text_of(doc))):
                postings.setdefault(tok, {})
                postings[tok][doc.id] = postings[tok].get(doc.id, 0) + 1
                positions.setdefault(tok, {}).setdefault(doc.id, []).append(pos)
        index.postings[field_name] = {
            tok: sorted(by_doc.items()) for tok, by_doc in postings.items()
        }
        index.positions[field_name] = positions
    return index

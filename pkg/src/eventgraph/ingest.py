"""Corpus ingestion: JSONL parsing, RSS fetching, deduplication, storage."""

from __future__ import annotations

import hashlib
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from pathlib import Path
from typing import Iterable

from .errors import EmptyBody, EmptyFeed, MalformedJson, MalformedXml, MissingField

SOURCE_TYPES = ("news", "social")


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime."""
    raw = value.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    """Render a UTC datetime in the canonical Z-suffixed form."""
    dt = dt.astimezone(timezone.utc)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Document:
    """One ingested news article or social post."""

    id: str
    source_type: str
    source_name: str
    url: str
    title: str
    body: str
    published_at: datetime
    fetched_at: datetime

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "source_type": self.source_type,
                "source_name": self.source_name,
                "url": self.url,
                "title": self.title,
                "body": self.body,
                "published_at": format_timestamp(self.published_at),
                "fetched_at": format_timestamp(self.fetched_at),
            },
            sort_keys=True,
            ensure_ascii=False,
        )

    @property
    def period(self) -> str:
        """UTC calendar day of publication, the clustering time period."""
        return self.published_at.astimezone(timezone.utc).strftime("%Y-%m-%d")


def parse_corpus_line(line: str) -> Document:
    """Parse one JSONL corpus line into a validated Document.

    Unknown fields are ignored. Raises MalformedJson, MissingField or
    EmptyBody on invalid input.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJson(str(exc)) from exc
    if not isinstance(raw, dict):
        raise MalformedJson("corpus line is not a JSON object")

    required = ("id", "source_type", "source_name", "title", "body",
                "published_at", "fetched_at")
    for name in required:
        if name not in raw:
            raise MissingField(name)

    if not str(raw["id"]).strip():
        raise MissingField("id")
    source_type = str(raw["source_type"])
    if source_type not in SOURCE_TYPES:
        raise MalformedJson(f"unknown source_type: {source_type!r}")
    body = str(raw["body"])
    if not body.strip():
        raise EmptyBody(f"document {raw['id']} has an empty body")
    url = str(raw.get("url", ""))
    if source_type == "news" and not url:
        raise MissingField("url")

    try:
        published_at = parse_timestamp(str(raw["published_at"]))
        fetched_at = parse_timestamp(str(raw["fetched_at"]))
    except ValueError as exc:
        raise MalformedJson(f"bad timestamp: {exc}") from exc
    if published_at > fetched_at:
        raise MalformedJson(f"document {raw['id']}: published_at after fetched_at")

    return Document(
        id=str(raw["id"]),
        source_type=source_type,
        source_name=str(raw["source_name"]),
        url=url,
        title=str(raw["title"]),
        body=body,
        published_at=published_at,
        fetched_at=fetched_at,
    )


def _item_text(item: ET.Element, tag: str) -> str:
    el = item.find(tag)
    return (el.text or "").strip() if el is not None else ""


def fetch_rss(feed_xml: str, source_name: str, now: datetime) -> list[Document]:
    """Turn an RSS 2.0 feed into Documents, one per <item>.

    Item ids are content hashes of (source_name, link, title) so re-fetching
    a feed is idempotent. Missing <pubDate> falls back to `now`.
    """
    try:
        root = ET.fromstring(feed_xml)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc

    items = root.findall(".//item")
    if not items:
        raise EmptyFeed(f"feed from {source_name} has no items")

    docs = []
    for item in items:
        title = _item_text(item, "title")
        link = _item_text(item, "link")
        body = _item_text(item, "description") or title
        pub_raw = _item_text(item, "pubDate")
        if pub_raw:
            try:
                published = parsedate_to_datetime(pub_raw).astimezone(timezone.utc)
            except (TypeError, ValueError):
                published = now
        else:
            published = now
        digest = hashlib.sha256(
            "\x1f".join((source_name, link, title)).encode("utf-8")
        ).hexdigest()[:16]
        docs.append(
            Document(
                id=f"rss-{digest}",
                source_type="news",
                source_name=source_name,
                url=link,
                title=title,
                body=body,
                published_at=min(published, now),
                fetched_at=now,
            )
        )
    return docs


_WS_RUN = re.compile(r"\s+")


def normalized_body_key(doc: Document) -> str:
    """Lowercased body with whitespace runs collapsed, used for dedup."""
    return _WS_RUN.sub(" ", doc.body.lower()).strip()


def dedupe_corpus(docs: list[Document]) -> list[Document]:
    """Drop documents whose normalized body repeats an earlier one.

    Survivor order is preserved; within a duplicate group the earliest
    published_at wins (position breaks publication-time ties).
    """
    best: dict[str, tuple[int, Document]] = {}
    for pos, doc in enumerate(docs):
        key = hashlib.sha256(normalized_body_key(doc).encode("utf-8")).hexdigest()
        if key not in best:
            best[key] = (pos, doc)
        else:
            kept_pos, kept = best[key]
            if doc.published_at < kept.published_at:
                best[key] = (kept_pos, doc)
    return [doc for _, doc in sorted(best.values(), key=lambda pair: pair[0])]


def read_corpus(path: str | Path) -> list[Document]:
    """Read a JSONL corpus file, skipping blank lines."""
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                docs.append(parse_corpus_line(line))
    return docs


def write_documents(docs: Iterable[Document], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(doc.to_json() + "\n")
    tmp.replace(path)


def load_documents(path: str | Path) -> list[Document]:
    return read_corpus(path)

"""Shared fixtures."""

from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eventgraph.config import PipelineConfig
from eventgraph.ingest import Document
from eventgraph.resources import Resources

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def resources() -> Resources:
    return Resources.load()


@pytest.fixture(scope="session")
def cfg() -> PipelineConfig:
    return PipelineConfig()


FIXTURE_PIPELINE_CFG = dict(embed_dims=16)


def run_pipeline(store_dir: Path, resources: Resources) -> None:
    """All six stages over the shipped fixture corpus."""
    from eventgraph import pipeline

    cfg = PipelineConfig(**FIXTURE_PIPELINE_CFG)
    pipeline.stage_ingest([str(FIXTURES / "corpus.jsonl")], [], store_dir)
    pipeline.stage_prepare(store_dir, resources, cfg)
    pipeline.stage_cluster(store_dir, FIXTURES / "vectors.txt", cfg)
    pipeline.stage_extract(store_dir, resources, cfg)
    pipeline.stage_graph_build(store_dir, resources)
    pipeline.stage_index(store_dir)


@pytest.fixture(scope="session")
def built_store(tmp_path_factory, resources):
    """A fully built store over the fixture corpus, shared by API tests."""
    from eventgraph.pipeline import Store

    store_dir = tmp_path_factory.mktemp("store")
    run_pipeline(store_dir, resources)
    return Store.load(store_dir, res=resources, cfg=PipelineConfig(**FIXTURE_PIPELINE_CFG))


def make_doc(
    doc_id: str = "d1",
    source_type: str = "news",
    title: str = "Title here",
    body: str = "Body text here.",
    published: str = "2020-01-23T08:00:00+00:00",
    source_name: str = "wire",
    url: str = "https://example.org/a",
) -> Document:
    published_at = datetime.fromisoformat(published)
    return Document(
        id=doc_id,
        source_type=source_type,
        source_name=source_name,
        url=url if source_type == "news" else "",
        title=title,
        body=body,
        published_at=published_at,
        fetched_at=published_at.astimezone(timezone.utc).replace(hour=23),
    )

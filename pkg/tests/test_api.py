"""HTTP API contract over the fixture store."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from eventgraph.api import create_app
from eventgraph.config import ServiceConfig


@pytest.fixture(scope="module")
def client(built_store):
    config = ServiceConfig(listen_address="127.0.0.1:0", store_dir="unused",
                           cors_allowed_origin="https://ui.example", page_size=20)
    return TestClient(create_app(built_store, config))


class TestSearch:
    def test_wuhan_returns_nodes(self, client):
        resp = client.get("/api/search", params={"q": "wuhan"})
        assert resp.status_code == 200
        payload = resp.json()
        names = [n["name"] for n in payload["nodes"]]
        assert "Wuhan" in names
        assert payload["nodes"][0]["score"] > 0

    def test_empty_query_400(self, client):
        assert client.get("/api/search", params={"q": ""}).status_code == 400
        assert client.get("/api/search").status_code == 400

    def test_type_filter_excludes(self, client):
        resp = client.get("/api/search", params={"q": "wuhan", "types": "PERSON"})
        assert resp.status_code == 200
        assert all(n["type"] == "PERSON" for n in resp.json()["nodes"])
        assert not any(n["type"] == "LOCATION" for n in resp.json()["nodes"])

    def test_bad_filter_value_400(self, client):
        assert client.get("/api/search", params={"q": "wuhan", "types": "ALIEN"}).status_code == 400
        assert client.get("/api/search", params={"q": "wuhan", "sources": "telegraph"}).status_code == 400

    def test_source_filter_on_edges_and_documents(self, client):
        resp = client.get("/api/search", params={"q": "wuhan", "sources": "news"})
        payload = resp.json()
        for edge in payload["edges"]:
            assert any(p["source_type"] == "news" for p in edge["provenance"])
        for doc in payload["documents"]:
            assert doc["source_type"] == "news"

    def test_edges_have_kept_endpoints(self, client):
        payload = client.get("/api/search", params={"q": "wuhan"}).json()
        node_ids = {n["id"] for n in payload["nodes"]}
        for edge in payload["edges"]:
            assert edge["src"] in node_ids
            assert edge["dst"] in node_ids

    def test_byte_identical_repeats(self, client):
        a = client.get("/api/search", params={"q": "wuhan OR singapore"})
        b = client.get("/api/search", params={"q": "wuhan OR singapore"})
        assert a.content == b.content

    def test_pagination(self, client):
        first = client.get("/api/search", params={"q": "coronavirus", "page": 0}).json()
        assert len(first["documents"]) <= first["page_size"]
        second = client.get("/api/search", params={"q": "coronavirus", "page": 1}).json()
        first_ids = {d["id"] for d in first["documents"]}
        assert all(d["id"] not in first_ids for d in second["documents"])

    def test_cors_header(self, client):
        resp = client.get("/api/search", params={"q": "wuhan"})
        assert resp.headers["access-control-allow-origin"] == "https://ui.example"

    def test_structured_query(self, client):
        resp = client.get("/api/search", params={"q": "type:LOCATION wuhan"})
        assert resp.status_code == 200
        assert any(n["name"] == "Wuhan" for n in resp.json()["nodes"])

    def test_bad_structured_query_400(self, client):
        assert client.get("/api/search", params={"q": "wuhan AND"}).status_code == 400


class TestEdgeDocuments:
    def _some_edge(self, client, built_store):
        payload = client.get("/api/search", params={"q": "singapore"}).json()
        assert payload["edges"], "fixture should produce edges for singapore"
        return payload["edges"][0]

    def test_representative_matches_cluster_record(self, client, built_store):
        edge = self._some_edge(client, built_store)
        resp = client.get(f"/api/edges/{edge['id']}/documents")
        assert resp.status_code == 200
        payload = resp.json()
        cluster_id = edge["provenance"][0]["cluster_id"]
        cluster = built_store.cluster_by_id[cluster_id]
        assert payload["representative"]["id"] == cluster.representative_doc_id
        member_ids = {d["id"] for d in payload["cluster_members"]}
        assert member_ids == set(cluster.member_doc_ids)

    def test_unknown_edge_404(self, client):
        assert client.get("/api/edges/999999/documents").status_code == 404

    def test_related_documents_are_unclustered(self, client, built_store):
        clustered = built_store.clustered_doc_ids()
        checked = 0
        for edge_id in sorted(built_store.graph.edges):
            payload = client.get(f"/api/edges/{edge_id}/documents").json()
            for doc in payload["related"]:
                assert doc["id"] not in clustered
                checked += 1
        assert checked >= 1, "at least one edge should surface an unclustered doc"

    def test_wuhan_one_off_is_related(self, client, built_store):
        # the retrospective one-off mentions Wuhan but never clusters
        wuhan_edges = [
            e for e in built_store.graph.edges.values()
            if "wuhan" in built_store.graph.nodes[e.src].name.lower()
            or "wuhan" in built_store.graph.nodes[e.dst].name.lower()
        ]
        assert wuhan_edges
        payload = client.get(f"/api/edges/{wuhan_edges[0].edge_id}/documents").json()
        related_titles = [d["title"] for d in payload["related"]]
        assert any("retrospective" in t.lower() for t in related_titles)


class TestTimeline:
    def test_buckets_ascending(self, client):
        resp = client.get("/api/timeline", params={"q": "coronavirus"})
        assert resp.status_code == 200
        days = [b["date"] for b in resp.json()]
        assert days == sorted(days)
        assert len(days) >= 2

    def test_empty_query_400(self, client):
        assert client.get("/api/timeline", params={"q": " "}).status_code == 400

    def test_no_matches_empty_list(self, client):
        resp = client.get("/api/timeline", params={"q": "zzzqnothing"})
        assert resp.status_code == 200
        assert resp.json() == []

    def test_documents_carry_full_fields(self, client):
        payload = client.get("/api/timeline", params={"q": "singapore"}).json()
        doc = payload[0]["documents"][0]
        assert {"id", "title", "body", "published_at", "source_type"} <= set(doc)

    def test_byte_identical_repeats(self, client):
        a = client.get("/api/timeline", params={"q": "masks"})
        b = client.get("/api/timeline", params={"q": "masks"})
        assert a.content == b.content

    def test_bucket_days_match_documents(self, client):
        payload = client.get("/api/timeline", params={"q": "coronavirus"}).json()
        for bucket in payload:
            for doc in bucket["documents"]:
                assert doc["published_at"][:10] == bucket["date"]

"""Index construction, query parsing, and execution vs the scan oracle."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from eventgraph.errors import EmptyQuery, QuerySyntaxError
from eventgraph.graph import EntityNode, KnowledgeGraph, Provenance
from eventgraph.index import index_items, InvertedIndex
from eventgraph.query import (
    And,
    Field,
    Not,
    Or,
    Phrase,
    Term,
    execute_query,
    nlq_search,
    parse_query,
    render_query,
)

from conftest import make_doc
from oracles import ScanSearch

# -- the hand-built 5-doc / 6-entity fixture ---------------------------------

ENTITY_ROWS = [
    (1, "LOCATION", "Wuhan", []),
    (2, "ORG", "World Health Organization", ["who"]),
    (3, "PERSON", "Donald Trump", ["trump"]),
    (4, "LOCATION", "Singapore", []),
    (5, "COUNTRY", "China", []),
    (6, "PERSON", "Li Wenliang", []),
]

DOC_ROWS = [
    ("n1", "Wuhan outbreak grows", "Cases in Wuhan rose quickly as the virus spread in Wuhan."),
    ("n2", "World Health Organization responds",
     "The World Health Organization held a briefing about the outbreak."),
    ("n3", "Trump comments on travel", "Donald Trump said travel restrictions would start soon."),
    ("n4", "Singapore confirms case", "Singapore confirmed its first case and traced contacts."),
    ("s5", "Worried about the virus",
     "People in China stockpiled masks because the virus was spreading."),
]

EDGE_ROWS = [(1, 1, 5), (2, 2, 1), (3, 3, 4)]


def _entities():
    return [EntityNode(node_id=i, name=name, type=etype, aliases=set(aliases))
            for i, etype, name, aliases in ENTITY_ROWS]


def _docs():
    return [make_doc(doc_id, title=title, body=body, source_type="social" if doc_id[0] == "s" else "news")
            for doc_id, title, body in DOC_ROWS]


@pytest.fixture(scope="module")
def index() -> InvertedIndex:
    return index_items(_entities(), _docs())


@pytest.fixture(scope="module")
def graph() -> KnowledgeGraph:
    g = KnowledgeGraph()
    for i, etype, name, aliases in ENTITY_ROWS:
        node_id = g.disambiguate_name(name, etype)
        assert node_id == i
        g.nodes[node_id].aliases.update(aliases)
    prov = Provenance(doc_id="n1", cluster_id="news-2020-01-23-000",
                      published_at=datetime(2020, 1, 23, tzinfo=timezone.utc),
                      source_type="news")
    relations = {1: "in_country", 2: "visit", 3: "praise"}
    for edge_id, src, dst in EDGE_ROWS:
        got, _ = g.add_edge(src, dst, relations[edge_id], prov)
        assert got == edge_id
    return g


@pytest.fixture(scope="module")
def oracle() -> ScanSearch:
    return ScanSearch(ENTITY_ROWS, DOC_ROWS, EDGE_ROWS)


# -- parser -------------------------------------------------------------------


class TestParseQuery:
    def test_bare_term(self):
        assert parse_query("singapore") == Term("singapore")

    def test_bool_grouping(self):
        ast = parse_query("who AND (china OR singapore)")
        assert ast == And((Term("who"), Or((Term("china"), Term("singapore")))))

    def test_phrase_and_fuzzy(self):
        ast = parse_query('"world health organization" wuhn~1')
        assert ast == And((Phrase(("world", "health", "organization")),
                           Term("wuhn", fuzzy=True)))

    def test_field_scope(self):
        ast = parse_query("type:LOCATION wuhan")
        assert ast == And((Field("type", Term("location")), Term("wuhan")))

    def test_empty_query(self):
        with pytest.raises(EmptyQuery):
            parse_query("   ")

    def test_not_only_rejected(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("NOT wuhan")

    def test_not_in_or_rejected(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("wuhan OR NOT china")

    def test_not_with_sibling_ok(self):
        ast = parse_query("travel AND NOT singapore")
        assert ast == And((Term("travel"), Not(Term("singapore"))))

    def test_unterminated_phrase(self):
        with pytest.raises(QuerySyntaxError):
            parse_query('"world health')

    def test_dangling_operator(self):
        with pytest.raises(QuerySyntaxError):
            parse_query("wuhan AND")

    def test_hyphenated_word_becomes_phrase(self):
        assert parse_query("covid-19") == Phrase(("covid", "19"))


_tokens = st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True).filter(
    lambda t: t.upper() not in ("AND", "OR", "NOT"))


def _atoms():
    terms = st.builds(Term, _tokens, st.booleans())
    phrases = st.builds(lambda ts: Phrase(tuple(ts)),
                        st.lists(_tokens, min_size=2, max_size=3))
    fields = st.builds(
        Field,
        st.sampled_from(["entity_name", "doc_title", "doc_body", "type"]),
        st.one_of(st.builds(Term, _tokens, st.just(False)),
                  st.builds(lambda ts: Phrase(tuple(ts)),
                            st.lists(_tokens, min_size=2, max_size=3))),
    )
    return st.one_of(terms, phrases, fields)


def _positive(children):
    return st.one_of(
        st.builds(lambda cs: And(tuple(cs)), st.lists(children, min_size=2, max_size=3)),
        st.builds(lambda cs: Or(tuple(cs)), st.lists(children, min_size=2, max_size=3)),
    )


def _with_not(children):
    # an And with one trailing NOT child, keeping a positive sibling
    return st.builds(
        lambda cs, neg: And(tuple(cs) + (Not(neg),)),
        st.lists(children, min_size=1, max_size=2),
        children,
    )


_asts = st.recursive(_atoms(), lambda inner: st.one_of(_positive(inner), _with_not(inner)),
                     max_leaves=12)


class TestRenderRoundTrip:
    @given(_asts)
    def test_parse_render_fixed_point(self, ast):
        assert parse_query(render_query(ast)) == ast

    def test_examples(self):
        for raw in ["singapore", "who AND (china OR singapore)",
                    '"world health organization" wuhn~1', "type:location wuhan",
                    "travel AND NOT singapore", "a OR b AND c"]:
            ast = parse_query(raw)
            assert parse_query(render_query(ast)) == ast


# -- execution against the oracle ----------------------------------------------

ORACLE_QUERIES = [
    "wuhan",
    "virus",
    '"world health organization"',
    "singapore AND case",
    "china OR singapore",
    "wuhn~1",
    "trump",
    "travel AND NOT singapore",
    "(wuhan OR china) AND virus",
    "entity_name:wuhan",
    "doc_body:virus",
    "type:LOCATION wuhan",
    '"donald trump"',
    "who",
    "organization",
    "case OR contacts",
    'doc_title:"singapore confirms case"',
    "NOT virus AND china",
    "chna~1",
    '"the virus"',
    "masks AND doc_body:stockpiled",
    "first case",
]


class TestExecuteAgainstOracle:
    @pytest.mark.parametrize("raw", ORACLE_QUERIES)
    def test_matches_scan_oracle(self, raw, index, graph, oracle):
        ast = parse_query(raw)
        got = execute_query(index, ast, graph)
        (nodes_rank, node_scores), (docs_rank, doc_scores), (edges_rank, edge_scores) = \
            oracle.search(ast)
        assert got.node_ids == nodes_rank, raw
        assert got.doc_ids == docs_rank, raw
        assert got.edge_ids == edges_rank, raw
        for i in got.node_ids:
            assert got.scores[("node", i)] == pytest.approx(node_scores[i], abs=1e-9)
        for i in got.doc_ids:
            assert got.scores[("doc", i)] == pytest.approx(doc_scores[i], abs=1e-9)
        for i in got.edge_ids:
            assert got.scores[("edge", i)] == pytest.approx(edge_scores[i], abs=1e-9)

    def test_fuzzy_matches_wuhan(self, index):
        got = execute_query(index, Term("wuhn", fuzzy=True))
        assert 1 in got.node_ids
        assert "n1" in got.doc_ids

    def test_fuzzy_zero_edits_is_exact(self, index):
        exact = execute_query(index, Term("wuhan"), fuzzy_max_edits=0)
        fuzzy = execute_query(index, Term("wuhan", fuzzy=True), fuzzy_max_edits=0)
        assert exact.node_ids == fuzzy.node_ids
        assert exact.doc_ids == fuzzy.doc_ids
        assert execute_query(index, Term("wuhn", fuzzy=True), fuzzy_max_edits=0).doc_ids == []

    def test_term_multi_match_hits_all_fields(self, index):
        got = execute_query(index, Term("wuhan"))
        assert got.node_ids == [1]
        assert got.doc_ids == ["n1"]


def _ids(result):
    return set(result.node_ids) | {("doc", d) for d in result.doc_ids}


class TestBooleanIdentities:
    @pytest.mark.parametrize("a,b", [("wuhan", "virus"), ("china", "singapore"),
                                     ("case", "travel")])
    def test_and_is_intersection(self, index, a, b):
        ra = _ids(execute_query(index, parse_query(a)))
        rb = _ids(execute_query(index, parse_query(b)))
        rab = _ids(execute_query(index, parse_query(f"{a} AND {b}")))
        assert rab == ra & rb

    @pytest.mark.parametrize("a,b", [("wuhan", "virus"), ("china", "singapore")])
    def test_or_is_union(self, index, a, b):
        ra = _ids(execute_query(index, parse_query(a)))
        rb = _ids(execute_query(index, parse_query(b)))
        rab = _ids(execute_query(index, parse_query(f"{a} OR {b}")))
        assert rab == ra | rb

    @pytest.mark.parametrize("a,b", [("virus", "wuhan"), ("case", "singapore")])
    def test_not_excludes(self, index, a, b):
        ra = _ids(execute_query(index, parse_query(a)))
        rb = _ids(execute_query(index, parse_query(b)))
        rab = _ids(execute_query(index, parse_query(f"{a} AND NOT {b}")))
        assert rab == ra - rb


class TestIndexBasics:
    def test_entity_tokens_indexed(self, index):
        assert [i for i, _tf in index.postings["entity_name"]["world"]] == [2]
        assert index.postings["entity_name"]["who"] == [(2, 1)]

    def test_empty_inputs(self):
        empty = index_items([], [])
        assert empty.postings["entity_name"] == {}
        assert empty.doc_count["doc_title"] == 0

    def test_term_frequency_counted(self, index):
        assert dict(index.postings["doc_body"]["wuhan"])["n1"] == 2

    def test_posting_lists_sorted(self, index):
        for field, by_token in index.postings.items():
            for plist in by_token.values():
                ids = [i for i, _ in plist]
                assert ids == sorted(ids)
                assert all(tf >= 1 for _, tf in plist)

    def test_save_load_round_trip(self, index, tmp_path):
        index.save(tmp_path)
        again = InvertedIndex.load(tmp_path)
        assert again.postings == index.postings
        assert again.positions == index.positions
        assert again.entity_tokens == index.entity_tokens
        assert again.entity_types == index.entity_types
        assert again.doc_count == index.doc_count


class TestNlqSearch:
    def test_natural_language_falls_back_to_or(self, index, graph, resources):
        got = nlq_search(index, graph, "what happened in Singapore", resources)
        assert 4 in got.node_ids
        assert "n4" in got.doc_ids

    def test_structured_query_used_as_is(self, index, graph, resources):
        got = nlq_search(index, graph, "type:LOCATION wuhan", resources)
        assert got.node_ids[0] == 1

    def test_no_matching_tokens_is_empty(self, index, graph, resources):
        got = nlq_search(index, graph, "zzzqqq nothingness", resources)
        assert not got.node_ids and not got.doc_ids and not got.edge_ids

    def test_all_stopword_query_is_empty(self, index, graph, resources):
        got = nlq_search(index, graph, "what is the", resources)
        assert not got.node_ids and not got.doc_ids

    def test_empty_raises(self, index, graph, resources):
        with pytest.raises(EmptyQuery):
            nlq_search(index, graph, "  ", resources)

    def test_neighborhood_expansion(self, index, graph, resources):
        got = nlq_search(index, graph, "wuhan", resources)
        # Wuhan matched; China and the WHO arrive as first-degree neighbors
        assert got.node_ids[0] == 1
        assert {1, 2, 5} <= set(got.node_ids)
        assert {1, 2} <= set(got.edge_ids)
        assert got.scores[("node", 5)] == 0.0

    def test_malformed_structured_query_raises(self, index, graph, resources):
        with pytest.raises(QuerySyntaxError):
            nlq_search(index, graph, "wuhan AND", resources)

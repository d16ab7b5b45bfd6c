"""Query language: parsing, canonical rendering, and execution.

Grammar: OR-lists of AND-lists, bare adjacency meaning AND; uppercase
AND/OR/NOT; parentheses group; double quotes form phrases; `field:term`
scopes a term; a trailing ~1 makes a term fuzzy. NOT must sit inside an
AND next to at least one positive clause.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field

from . import kernels
from .config import PipelineConfig
from .errors import EmptyQuery, QuerySyntaxError
from .graph import KnowledgeGraph
from .index import BODY_FIELD, DOC_FIELDS, ENTITY_FIELD, FIELDS, TITLE_FIELD, InvertedIndex
from .resources import Resources
from .textprep import lemmatize, tokenize

TYPE_FIELD = "type"
_FIELD_ALIASES = {
    "entity_name": ENTITY_FIELD,
    "name": ENTITY_FIELD,
    "title": TITLE_FIELD,
    "doc_title": TITLE_FIELD,
    "body": BODY_FIELD,
    "doc_body": BODY_FIELD,
    "type": TYPE_FIELD,
}

NODE_ITEM = "node"
DOC_ITEM = "doc"
EDGE_ITEM = "edge"


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    token: str
    fuzzy: bool = False


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class Field:
    name: str
    subquery: "QueryAst"


@dataclass(frozen=True)
class And:
    children: tuple["QueryAst", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["QueryAst", ...]


@dataclass(frozen=True)
class Not:
    subquery: "QueryAst"


QueryAst = Term | Phrase | Field | And | Or | Not


# -- lexer / parser -----------------------------------------------------------

_WORD = re.compile(r"[^\s()\":~]+")


@dataclass(frozen=True)
class _Tok:
    kind: str  # word | phrase | lparen | rparen | colon | fuzzy
    value: str
    pos: int


def _lex(q: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(q)
    while i < n:
        ch = q[i]
        if ch.isspace():
            i += 1
        elif ch == "(":
            toks.append(_Tok("lparen", ch, i))
            i += 1
        elif ch == ")":
            toks.append(_Tok("rparen", ch, i))
            i += 1
        elif ch == ":":
            toks.append(_Tok("colon", ch, i))
            i += 1
        elif ch == "~":
            m = re.match(r"~(\d+)", q[i:])
            if not m:
                raise QuerySyntaxError(i, "expected edit count after ~")
            toks.append(_Tok("fuzzy", m.group(1), i))
            i += len(m.group(0))
        elif ch == '"':
            end = q.find('"', i + 1)
            if end < 0:
                raise QuerySyntaxError(i, "unterminated phrase")
            toks.append(_Tok("phrase", q[i + 1:end], i))
            i = end + 1
        else:
            m = _WORD.match(q, i)
            if not m:
                raise QuerySyntaxError(i, f"unexpected character {ch!r}")
            toks.append(_Tok("word", m.group(0), i))
            i = m.end()
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], length: int):
        self.toks = toks
        self.i = 0
        self.length = length

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise QuerySyntaxError(self.length, "unexpected end of query")
        self.i += 1
        return tok

    def parse(self) -> QueryAst:
        ast = self.parse_or()
        tok = self.peek()
        if tok is not None:
            raise QuerySyntaxError(tok.pos, f"unexpected {tok.value!r}")
        return ast

    def parse_or(self) -> QueryAst:
        children = [self.parse_and()]
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "word" and tok.value == "OR":
                self.next()
                children.append(self.parse_and())
            else:
                break
        return children[0] if len(children) == 1 else Or(tuple(children))

    def parse_and(self) -> QueryAst:
        children = [self.parse_unary()]
        while True:
            tok = self.peek()
            if tok is None or tok.kind == "rparen" or (tok.kind == "word" and tok.value == "OR"):
                break
            if tok.kind == "word" and tok.value == "AND":
                self.next()
                children.append(self.parse_unary())
            else:
                children.append(self.parse_unary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def parse_unary(self) -> QueryAst:
        tok = self.peek()
        if tok is not None and tok.kind == "word" and tok.value == "NOT":
            self.next()
            return Not(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> QueryAst:
        tok = self.next()
        if tok.kind == "lparen":
            inner = self.parse_or()
            closing = self.next()
            if closing.kind != "rparen":
                raise QuerySyntaxError(closing.pos, "expected )")
            return inner
        if tok.kind == "phrase":
            tokens = tokenize(tok.value)
            if not tokens:
                raise QuerySyntaxError(tok.pos, "empty phrase")
            return Phrase(tuple(tokens)) if len(tokens) > 1 else Term(tokens[0])
        if tok.kind == "word":
            if tok.value in ("AND", "OR", "NOT"):
                raise QuerySyntaxError(tok.pos, f"{tok.value} needs operands")
            nxt = self.peek()
            if nxt is not None and nxt.kind == "colon":
                self.next()
                name = tok.value.lower()
                if name not in _FIELD_ALIASES:
                    raise QuerySyntaxError(tok.pos, f"unknown field {tok.value!r}")
                sub = self.parse_atom()
                if not isinstance(sub, (Term, Phrase)):
                    raise QuerySyntaxError(tok.pos, "field scope takes a term or phrase")
                return Field(_FIELD_ALIASES[name], sub)
            return self._term_from_word(tok)
        raise QuerySyntaxError(tok.pos, f"unexpected {tok.value!r}")

    def _term_from_word(self, tok: _Tok) -> QueryAst:
        fuzzy = False
        nxt = self.peek()
        if nxt is not None and nxt.kind == "fuzzy":
            if nxt.value != "1":
                raise QuerySyntaxError(nxt.pos, "only ~1 is supported")
            self.next()
            fuzzy = True
        tokens = tokenize(tok.value)
        if not tokens:
            raise QuerySyntaxError(tok.pos, f"term {tok.value!r} has no indexable characters")
        if len(tokens) > 1:
            if fuzzy:
                raise QuerySyntaxError(tok.pos, "fuzzy applies to single terms")
            return Phrase(tuple(tokens))
        return Term(tokens[0], fuzzy=fuzzy)


def _validate(ast: QueryAst, parent: QueryAst | None = None) -> None:
    if isinstance(ast, Not):
        if not isinstance(parent, And):
            raise QuerySyntaxError(0, "NOT requires a positive sibling in an AND")
        _validate(ast.subquery, ast)
    elif isinstance(ast, (And, Or)):
        if isinstance(ast, And) and all(isinstance(c, Not) for c in ast.children):
            raise QuerySyntaxError(0, "NOT requires a positive sibling in an AND")
        for child in ast.children:
            _validate(child, ast)
    elif isinstance(ast, Field):
        _validate(ast.subquery, ast)


def parse_query(q: str) -> QueryAst:
    """Parse a query string; raises EmptyQuery or QuerySyntaxError."""
    if not q.strip():
        raise EmptyQuery("query is empty")
    ast = _Parser(_lex(q), len(q)).parse()
    _validate(ast)
    return ast


def render_query(ast: QueryAst) -> str:
    """Canonical text form; parse_query(render_query(ast)) == ast."""
    def wrap(child: QueryAst) -> str:
        rendered = render_query(child)
        return f"({rendered})" if isinstance(child, (And, Or)) else rendered

    if isinstance(ast, Term):
        return ast.token + ("~1" if ast.fuzzy else "")
    if isinstance(ast, Phrase):
        return '"' + " ".join(ast.tokens) + '"'
    if isinstance(ast, Field):
        return f"{ast.name}:{render_query(ast.subquery)}"
    if isinstance(ast, Not):
        return "NOT " + wrap(ast.subquery)
    if isinstance(ast, And):
        return " AND ".join(wrap(c) for c in ast.children)
    if isinstance(ast, Or):
        return " OR ".join(wrap(c) for c in ast.children)
    raise TypeError(f"not a query node: {ast!r}")


# -- execution ----------------------------------------------------------------

Item = tuple[str, int | str]  # (kind, id)


@dataclass
class SearchResult:
    node_ids: list[int] = dc_field(default_factory=list)
    edge_ids: list[int] = dc_field(default_factory=list)
    doc_ids: list[str] = dc_field(default_factory=list)
    scores: dict[Item, float] = dc_field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "nodes": [{"id": i, "score": self.scores[(NODE_ITEM, i)]} for i in self.node_ids],
            "edges": [{"id": i, "score": self.scores[(EDGE_ITEM, i)]} for i in self.edge_ids],
            "documents": [{"id": i, "score": self.scores[(DOC_ITEM, i)]} for i in self.doc_ids],
        }


def _idf(n_items: int, df: int) -> float:
    return math.log(1.0 + n_items / df)


def _fuzzy_variants(index: InvertedIndex, field_name: str, token: str, max_edits: int) -> list[str]:
    token_b = token.encode("ascii", "ignore")
    out = []
    for cand in index.vocabulary(field_name):
        if abs(len(cand) - len(token)) > max_edits:
            continue
        if kernels.bounded_edit_distance(token_b, cand.encode("ascii", "ignore"),
                                         max_edits) <= max_edits:
            out.append(cand)
    return out


def _phrase_occurrences(tokens: tuple[str, ...], sequence: list[str]) -> int:
    if len(sequence) < len(tokens):
        return 0
    count = 0
    for i in range(len(sequence) - len(tokens) + 1):
        if sequence[i:i + len(tokens)] == list(tokens):
            count += 1
    return count


class _Executor:
    def __init__(self, index: InvertedIndex, fuzzy_max_edits: int):
        self.index = index
        self.fuzzy_max_edits = fuzzy_max_edits

    def _allowed_fields(self, field_filter: str | None) -> tuple[str, ...]:
        if field_filter is None:
            return FIELDS
        return (field_filter,)

    def eval(self, ast: QueryAst, field_filter: str | None = None) -> dict[Item, float]:
        if isinstance(ast, Term):
            return self._eval_term(ast, field_filter)
        if isinstance(ast, Phrase):
            return self._eval_phrase(ast, field_filter)
        if isinstance(ast, Field):
            if ast.name == TYPE_FIELD:
                return self._eval_type(ast.subquery)
            return self.eval(ast.subquery, ast.name)
        if isinstance(ast, And):
            return self._eval_and(ast, field_filter)
        if isinstance(ast, Or):
            merged: dict[Item, float] = {}
            for child in ast.children:
                for item, score in self.eval(child, field_filter).items():
                    merged[item] = merged.get(item, 0.0) + score
            return merged
        if isinstance(ast, Not):
            # reached only through And, which handles exclusion itself
            return self.eval(ast.subquery, field_filter)
        raise TypeError(f"not a query node: {ast!r}")

    def _eval_and(self, ast: And, field_filter: str | None) -> dict[Item, float]:
        positive = [c for c in ast.children if not isinstance(c, Not)]
        negative = [c for c in ast.children if isinstance(c, Not)]
        result: dict[Item, float] | None = None
        for child in positive:
            scores = self.eval(child, field_filter)
            if result is None:
                result = scores
            else:
                result = {item: result[item] + scores[item]
                          for item in result.keys() & scores.keys()}
        assert result is not None  # validation guarantees a positive child
        for child in negative:
            excluded = self.eval(child.subquery, field_filter)
            result = {item: s for item, s in result.items() if item not in excluded}
        return result

    def _eval_type(self, sub: QueryAst) -> dict[Item, float]:
        if isinstance(sub, Term):
            wanted = sub.token.upper()
            return {(NODE_ITEM, node_id): 0.0
                    for node_id, t in self.index.entity_types.items() if t == wanted}
        return {}

    def _eval_term(self, term: Term, field_filter: str | None) -> dict[Item, float]:
        scores: dict[Item, float] = {}
        for field_name in self._allowed_fields(field_filter):
            if term.fuzzy:
                variants = _fuzzy_variants(self.index, field_name, term.token,
                                           self.fuzzy_max_edits)
            else:
                variants = [term.token] if term.token in self.index.postings[field_name] else []
            n_items = self.index.doc_count[field_name]
            kind = NODE_ITEM if field_name == ENTITY_FIELD else DOC_ITEM
            for variant in variants:
                plist = self.index.postings[field_name][variant]
                idf = _idf(n_items, len(plist))
                for item_id, tf in plist:
                    key = (kind, item_id)
                    scores[key] = scores.get(key, 0.0) + tf * idf
        return scores

    def _eval_phrase(self, phrase: Phrase, field_filter: str | None) -> dict[Item, float]:
        scores: dict[Item, float] = {}
        for field_name in self._allowed_fields(field_filter):
            n_items = self.index.doc_count[field_name]
            if field_name == ENTITY_FIELD:
                hits = {}
                for node_id, token_lists in self.index.entity_tokens.items():
                    occ = sum(_phrase_occurrences(phrase.tokens, seq) for seq in token_lists)
                    if occ:
                        hits[node_id] = occ
                if hits:
                    idf = _idf(n_items, len(hits))
                    for node_id, occ in hits.items():
                        key = (NODE_ITEM, node_id)
                        scores[key] = scores.get(key, 0.0) + occ * idf
            else:
                hits = self._phrase_doc_hits(phrase.tokens, field_name)
                if hits:
                    idf = _idf(n_items, len(hits))
                    for doc_id, occ in hits.items():
                        key = (DOC_ITEM, doc_id)
                        scores[key] = scores.get(key, 0.0) + occ * idf
        return scores

    def _phrase_doc_hits(self, tokens: tuple[str, ...], field_name: str) -> dict[str, int]:
        position_maps = []
        for tok in tokens:
            by_doc = self.index.positions[field_name].get(tok)
            if not by_doc:
                return {}
            position_maps.append(by_doc)
        candidates = set(position_maps[0])
        for by_doc in position_maps[1:]:
            candidates &= set(by_doc)
        hits = {}
        for doc_id in candidates:
            starts = set(position_maps[0][doc_id])
            for offset, by_doc in enumerate(position_maps[1:], start=1):
                starts &= {p - offset for p in by_doc[doc_id]}
                if not starts:
                    break
            if starts:
                hits[doc_id] = len(starts)
        return hits


def execute_query(
    index: InvertedIndex,
    ast: QueryAst,
    graph: KnowledgeGraph | None = None,
    fuzzy_max_edits: int = 1,
) -> SearchResult:
    """Run an AST against the index; node hits expand to incident edges
    when a graph is supplied."""
    scores = _Executor(index, fuzzy_max_edits).eval(ast)
    result = SearchResult()
    node_scores = {i: s for (kind, i), s in scores.items() if kind == NODE_ITEM}
    doc_scores = {i: s for (kind, i), s in scores.items() if kind == DOC_ITEM}
    result.node_ids = sorted(node_scores, key=lambda i: (-node_scores[i], i))
    result.doc_ids = sorted(doc_scores, key=lambda i: (-doc_scores[i], i))
    for i, s in node_scores.items():
        result.scores[(NODE_ITEM, i)] = s
    for i, s in doc_scores.items():
        result.scores[(DOC_ITEM, i)] = s
    if graph is not None:
        edge_scores: dict[int, float] = {}
        for node_id in result.node_ids:
            for edge_id in graph.incident_edges(node_id):
                edge = graph.edges[edge_id]
                score = sum(node_scores.get(e, 0.0) for e in (edge.src, edge.dst)
                            if e in node_scores)
                edge_scores[edge_id] = score
        result.edge_ids = sorted(edge_scores, key=lambda i: (-edge_scores[i], i))
        for i, s in edge_scores.items():
            result.scores[(EDGE_ITEM, i)] = s
    return result


_STRUCTURED = re.compile(r"\bAND\b|\bOR\b|\bNOT\b|[():\"~]")


def nlq_search(
    index: InvertedIndex,
    graph: KnowledgeGraph,
    raw_query: str,
    res: Resources,
    cfg: PipelineConfig | None = None,
) -> SearchResult:
    """Structured queries run as written; anything else becomes an OR of
    prepared terms. Matched nodes pull in their first-degree neighborhood."""
    if not raw_query.strip():
        raise EmptyQuery("query is empty")
    cfg = cfg or PipelineConfig()
    if _STRUCTURED.search(raw_query):
        ast = parse_query(raw_query)
    else:
        seen = set()
        terms = []
        for tok in tokenize(raw_query):
            if tok in res.stoplist:
                continue
            lemma = lemmatize(tok, res.lemma_lexicon)
            if lemma not in seen:
                seen.add(lemma)
                terms.append(Term(lemma))
        if not terms:
            return SearchResult()
        ast = terms[0] if len(terms) == 1 else Or(tuple(terms))
    result = execute_query(index, ast, graph, cfg.fuzzy_max_edits)
    # first-degree expansion: neighbors of matched nodes join the node list
    if result.node_ids:
        nodes, _edges = graph.neighborhood(result.node_ids)
        for node in nodes:
            key = (NODE_ITEM, node.node_id)
            if key not in result.scores:
                result.scores[key] = 0.0
                result.node_ids.append(node.node_id)
        result.node_ids.sort(key=lambda i: (-result.scores[(NODE_ITEM, i)], i))
    return result

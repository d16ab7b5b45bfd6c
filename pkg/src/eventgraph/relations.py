"""Named-entity detection and open relation-triple extraction.

Gazetteer- and pattern-driven: capitalized token runs become entity
candidates typed by DATE regex, the geographic gazetteer, organization
suffixes, and the persons list; triples come from noun-chunk pairs whose
intervening tokens contain a verb candidate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ingest import Document
from .resources import Resources
from .textprep import lemmatize

PERSON = "PERSON"
ORG = "ORG"
LOCATION = "LOCATION"
DATE = "DATE"
MISC = "MISC"

ESSENTIAL_TYPES = frozenset({PERSON, ORG, LOCATION})

AUXILIARIES = frozenset({"is", "are", "was", "were", "has", "have", "had", "will", "would"})

# tokens that end a noun-chunk run even though they are ordinary function
# words elsewhere; keeps objects from swallowing subordinate clauses
CLAUSE_BREAKERS = frozenset({
    "because", "that", "which", "who", "whom", "whose", "while", "when",
    "after", "before", "since", "although", "though", "unless", "until",
    "if", "and", "or", "but", "as",
})

_MONTHS = ("January", "February", "March", "April", "May", "June", "July",
           "August", "September", "October", "November", "December")
_MONTH_ALT = "|".join(_MONTHS)
DATE_PATTERNS = [
    re.compile(rf"\b\d{{1,2}} (?:{_MONTH_ALT}) \d{{4}}\b"),
    re.compile(rf"\b(?:{_MONTH_ALT}) \d{{1,2}}, \d{{4}}\b"),
    re.compile(rf"\b(?:{_MONTH_ALT}) \d{{1,2}}\b"),
    re.compile(rf"\b\d{{1,2}} (?:{_MONTH_ALT})\b"),
    re.compile(rf"\b(?:{_MONTH_ALT}) \d{{4}}\b"),
    re.compile(r"\b\d{4}-\d{2}-\d{2}\b"),
]

_TOKEN = re.compile(r"[A-Za-z0-9]+")
_SENT_BOUNDARY = re.compile(r"([.!?]+)\s+(?=[A-Z\"'(])")


@dataclass(frozen=True)
class NamedEntity:
    text: str
    type: str
    char_span: tuple[int, int]

    @property
    def start(self) -> int:
        return self.char_span[0]

    @property
    def end(self) -> int:
        return self.char_span[1]


@dataclass(frozen=True)
class RelationTriple:
    subject: str
    relation: str
    object: str
    doc_id: str
    sentence_index: int
    subject_entity: Optional[NamedEntity] = None
    object_entity: Optional[NamedEntity] = None


def doc_text(doc: Document) -> str:
    """The text entity spans index into: title, blank line, body."""
    return doc.title + "\n\n" + doc.body


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Sentence (start, end) spans; splits on ./!/? + space + capital."""
    spans = []
    start = 0
    for m in _SENT_BOUNDARY.finditer(text):
        spans.append((start, m.end(1)))
        start = m.end()
    if text[start:].strip():
        spans.append((start, len(text)))
    return spans


def doc_sentence_spans(doc: Document) -> list[tuple[int, int]]:
    """Title as sentence 0, then body sentences, all in doc_text offsets."""
    spans = []
    if doc.title.strip():
        spans.append((0, len(doc.title)))
    offset = len(doc.title) + 2
    for s, e in sentence_spans(doc.body):
        spans.append((s + offset, e + offset))
    return spans


def _tokens_with_spans(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def _capitalized_runs(text: str, tokens: list[tuple[str, int, int]]) -> list[tuple[int, int]]:
    """Maximal runs of capitalized tokens separated only by single spaces."""
    runs = []
    current: list[tuple[str, int, int]] = []
    prev_end = None
    for tok, start, end in tokens:
        is_cap = tok[0].isupper()
        joinable = (
            current
            and is_cap
            and prev_end is not None
            and text[prev_end:start] != ""
            and set(text[prev_end:start]) == {" "}
        )
        if joinable:
            current.append((tok, start, end))
        else:
            if current:
                runs.append((current[0][1], current[-1][2]))
            current = [(tok, start, end)] if is_cap else []
        prev_end = end
    if current:
        runs.append((current[0][1], current[-1][2]))
    return runs


def _resolve_overlaps(spans: list[tuple[int, int, str]]) -> list[tuple[int, int, str]]:
    """Longest span wins; ties go to the earlier start."""
    kept: list[tuple[int, int, str]] = []
    for span in sorted(spans, key=lambda s: (-(s[1] - s[0]), s[0])):
        if all(span[1] <= k[0] or span[0] >= k[1] for k in kept):
            kept.append(span)
    return sorted(kept, key=lambda s: s[0])


def detect_entities(doc: Document, res: Resources) -> list[NamedEntity]:
    """Typed, non-overlapping entity spans over the document text."""
    text = doc_text(doc)
    tokens = _tokens_with_spans(text)
    sent_starts = {s for s, _ in doc_sentence_spans(doc)}

    candidates: list[tuple[int, int, str]] = []
    for pattern in DATE_PATTERNS:
        for m in pattern.finditer(text):
            candidates.append((m.start(), m.end(), "date"))
    for start, end in _capitalized_runs(text, tokens):
        run = [(t, s, e) for t, s, e in tokens if s >= start and e <= end]
        if len(run) > 1 and run[0][0].lower() == "the":
            run = run[1:]
            start = run[0][1]
        # "The", "It", ... are noise, but all-caps acronyms ("WHO") are not
        is_acronym = len(run) == 1 and len(run[0][0]) >= 2 and run[0][0].isupper()
        if not is_acronym and all(t.lower() in res.function_words for t, _, _ in run):
            continue
        candidates.append((start, end, "run"))

    entities = []
    resolved = _resolve_overlaps(candidates)
    # PERSON heuristic needs to know whether a surface form ever appears
    # away from a sentence start, so group occurrences by text first.
    non_initial: dict[str, bool] = {}
    for start, end, kind in resolved:
        if kind != "run":
            continue
        key = text[start:end].lower()
        non_initial.setdefault(key, False)
        if start not in sent_starts:
            non_initial[key] = True

    for start, end, kind in resolved:
        surface = text[start:end]
        if kind == "date":
            etype = DATE
        else:
            n_tokens = len(surface.split())
            lower = surface.lower()
            if lower in res.gazetteer:
                etype = LOCATION
            elif any(t.lower() in res.org_suffixes for t in _TOKEN.findall(surface)):
                etype = ORG
            elif lower in res.persons or (2 <= n_tokens <= 3 and non_initial.get(lower, False)):
                etype = PERSON
            else:
                etype = MISC
        entities.append(NamedEntity(text=surface, type=etype, char_span=(start, end)))
    return entities


def is_verb_candidate(token: str, res: Resources) -> bool:
    tok = token.lower()
    if tok in res.verb_lexicon:
        return True
    if tok in res.function_words:
        return False
    return len(tok) > 3 and (tok.endswith("ed") or tok.endswith("ing"))


@dataclass(frozen=True)
class _Chunk:
    text: str
    start: int
    end: int
    entity: Optional[NamedEntity]


def _chunks_for_sentence(
    text: str,
    tokens: list[tuple[str, int, int]],
    entities: list[NamedEntity],
    res: Resources,
) -> list[_Chunk]:
    ent_at: dict[int, NamedEntity] = {}
    for ent in entities:
        for tok, s, e in tokens:
            if s >= ent.start and e <= ent.end:
                ent_at[s] = ent

    chunks: list[_Chunk] = []
    run: list[tuple[str, int, int]] = []
    seen_entities: set[tuple[int, int]] = set()

    def flush() -> None:
        if not run:
            return
        trimmed = list(run)
        while trimmed and trimmed[-1][0].lower() in res.function_words:
            trimmed.pop()
        if trimmed and any(t[0].lower() not in res.function_words for t in trimmed):
            start, end = trimmed[0][1], trimmed[-1][2]
            chunks.append(_Chunk(text=text[start:end], start=start, end=end, entity=None))
        run.clear()

    prev_end = None
    for tok, s, e in tokens:
        ent = ent_at.get(s)
        if ent is not None:
            flush()
            if ent.char_span not in seen_entities:
                seen_entities.add(ent.char_span)
                chunks.append(_Chunk(text=ent.text, start=ent.start, end=ent.end, entity=ent))
            prev_end = e
            continue
        if is_verb_candidate(tok, res):
            flush()
            prev_end = e
            continue
        if tok.lower() in CLAUSE_BREAKERS:
            flush()
            prev_end = e
            continue
        if run and prev_end is not None and set(text[prev_end:s]) != {" "}:
            flush()
        run.append((tok, s, e))
        prev_end = e
    flush()
    return sorted(chunks, key=lambda c: c.start)


def _lemmatize_relation_token(token: str, res: Resources) -> str:
    tok = token.lower()
    if tok in res.verb_lexicon:
        return res.verb_lexicon[tok]
    return lemmatize(tok, res.lemma_lexicon)


def extract_triples(doc: Document, entities: list[NamedEntity], res: Resources) -> list[RelationTriple]:
    """Subject-relation-object triples from each sentence's chunk pairs."""
    text = doc_text(doc)
    all_tokens = _tokens_with_spans(text)
    triples = []
    for sent_index, (s_start, s_end) in enumerate(doc_sentence_spans(doc)):
        tokens = [(t, s, e) for t, s, e in all_tokens if s >= s_start and e <= s_end]
        sent_entities = [ent for ent in entities if ent.start >= s_start and ent.end <= s_end]
        chunks = _chunks_for_sentence(text, tokens, sent_entities, res)
        for i, subj in enumerate(chunks):
            for obj in chunks[i + 1:]:
                between = [t for t in tokens if t[1] >= subj.end and t[2] <= obj.start]
                if not any(is_verb_candidate(t[0], res) for t in between):
                    continue
                rel_tokens = [t[0].lower() for t in between]
                while rel_tokens and (rel_tokens[0] in AUXILIARIES or rel_tokens[0].endswith("ly")):
                    rel_tokens.pop(0)
                while rel_tokens and rel_tokens[-1] in res.function_words:
                    rel_tokens.pop()
                if not rel_tokens or len(rel_tokens) > 5:
                    continue
                relation = " ".join(_lemmatize_relation_token(t, res) for t in rel_tokens)
                triples.append(
                    RelationTriple(
                        subject=subj.text,
                        relation=relation,
                        object=obj.text,
                        doc_id=doc.id,
                        sentence_index=sent_index,
                        subject_entity=subj.entity,
                        object_entity=obj.entity,
                    )
                )
    return triples


def filter_triples(triples: list[RelationTriple]) -> list[RelationTriple]:
    """Keep triples whose subject or object carries a person/org/location."""
    kept = []
    for t in triples:
        subj_ok = t.subject_entity is not None and t.subject_entity.type in ESSENTIAL_TYPES
        obj_ok = t.object_entity is not None and t.object_entity.type in ESSENTIAL_TYPES
        if subj_ok or obj_ok:
            kept.append(t)
    return kept


def dedupe_triples(triples: list[RelationTriple]) -> list[RelationTriple]:
    """Collapse case-insensitive (subject, relation, object) repeats per document."""
    seen: set[tuple[str, str, str, str]] = set()
    out = []
    for t in triples:
        key = (t.doc_id, t.subject.lower(), t.relation, t.object.lower())
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out

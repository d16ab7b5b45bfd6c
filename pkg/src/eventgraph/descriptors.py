"""Who/What/When/Where/Why/How descriptors for cluster representatives.

Heuristic candidate generation with confidence scores in [0,1]; each
question keeps at most the top two candidates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import timezone

from .config import PipelineConfig
from .ingest import Document
from .relations import (
    DATE,
    LOCATION,
    ORG,
    PERSON,
    NamedEntity,
    doc_sentence_spans,
    doc_text,
    is_verb_candidate,
)
from .resources import Resources

QUESTIONS = ("who", "what", "when", "where", "why", "how")

CAUSAL_CUES = ("because", "due to", "amid", "after", "as a result")
MANNER_CUES = ("by", "via", "through", "using")

_TOKEN = re.compile(r"[A-Za-z0-9]+")


@dataclass(frozen=True)
class Descriptor:
    question: str
    text: str
    confidence: float


@dataclass(frozen=True)
class EventDescriptorSet:
    cluster_id: str
    descriptors: dict[str, list[Descriptor]] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            q: [{"text": d.text, "confidence": d.confidence} for d in ds]
            for q, ds in self.descriptors.items()
        }


def rank_candidates(cands: list[tuple[str, float, int]], question: str,
                    top_k: int = 2) -> list[Descriptor]:
    """Sort by score desc, ties by earlier position; keep the top_k."""
    ranked = sorted(cands, key=lambda c: (-c[1], c[2]))
    return [Descriptor(question=question, text=t, confidence=s)
            for t, s, _ in ranked[:top_k]]


def _sentence_layout(doc: Document) -> list[tuple[int, int, bool, int]]:
    """(start, end, is_title, body_index) per sentence of doc_text."""
    spans = doc_sentence_spans(doc)
    has_title = bool(doc.title.strip())
    layout = []
    for i, (s, e) in enumerate(spans):
        if has_title and i == 0:
            layout.append((s, e, True, -1))
        else:
            layout.append((s, e, False, i - 1 if has_title else i))
    return layout


def _position_score(offset: int, layout: list[tuple[int, int, bool, int]]) -> float:
    for s, e, is_title, body_idx in layout:
        if s <= offset < e:
            return 1.0 if is_title else 0.35 / (1 + body_idx)
    return 0.0


def _entity_candidates(
    entities: list[NamedEntity],
    wanted: set[str],
    layout: list[tuple[int, int, bool, int]],
    actor_positions: set[int],
) -> list[tuple[str, float, int]]:
    freq: dict[str, int] = {}
    for ent in entities:
        freq[ent.text.lower()] = freq.get(ent.text.lower(), 0) + 1
    max_freq = max(freq.values()) if freq else 1

    groups: dict[str, list[NamedEntity]] = {}
    for ent in entities:
        if ent.type in wanted or (ent.type == LOCATION and ent.start in actor_positions):
            groups.setdefault(ent.text.lower(), []).append(ent)

    cands = []
    for mentions in groups.values():
        first = min(mentions, key=lambda e: e.start)
        pos_score = max(_position_score(e.start, layout) for e in mentions)
        score = 0.5 * pos_score + 0.5 * freq[first.text.lower()] / max_freq
        cands.append((first.text, score, first.start))
    return cands


def _verb_phrase(text: str, span: tuple[int, int], res: Resources) -> str | None:
    tokens = [(m.group(0), m.start(), m.end())
              for m in _TOKEN.finditer(text[span[0]:span[1]])]
    for i, (tok, _, _) in enumerate(tokens):
        if is_verb_candidate(tok, res):
            phrase = tokens[i:i + 8]
            while phrase and phrase[-1][0].lower() in res.function_words:
                phrase.pop()
            if phrase:
                return text[span[0] + phrase[0][1]:span[0] + phrase[-1][2]]
            return None
    return None


def _contains_cue(sentence: str, cues: tuple[str, ...]) -> bool:
    lowered = " " + re.sub(r"[^a-z0-9]+", " ", sentence.lower()) + " "
    return any(f" {cue} " in lowered for cue in cues)


def extract_descriptors(
    doc: Document,
    entities: list[NamedEntity],
    cfg: PipelineConfig,
    res: Resources,
    cluster_id: str = "",
) -> EventDescriptorSet:
    """Candidate generation and top-k ranking for all six questions.

    `when` always yields at least the published_at fallback.
    """
    text = doc_text(doc)
    layout = _sentence_layout(doc)
    top_k = cfg.top_k_descriptors

    # actor position: start of the title or of the first body sentence;
    # a location there acts as the event's agent and counts for `who`
    actor_positions = set()
    for s, e, is_title, body_idx in layout:
        if is_title or body_idx == 0:
            actor_positions.add(s)

    descriptors: dict[str, list[Descriptor]] = {}

    descriptors["who"] = rank_candidates(
        _entity_candidates(entities, {PERSON, ORG}, layout, actor_positions),
        "who", top_k)

    what_cands = []
    for s, e, is_title, body_idx in layout:
        if is_title:
            phrase = _verb_phrase(text, (s, e), res)
            if phrase:
                what_cands.append((phrase, 0.8, s))
        elif body_idx == 0 and not what_cands:
            phrase = _verb_phrase(text, (s, e), res)
            if phrase:
                what_cands.append((phrase, 0.6, s))
    descriptors["what"] = rank_candidates(what_cands, "what", top_k)

    when_cands: dict[str, tuple[str, float, int]] = {}
    for ent in entities:
        if ent.type == DATE and ent.text.lower() not in when_cands:
            when_cands[ent.text.lower()] = (ent.text, 0.9, ent.start)
    fallback = doc.published_at.astimezone(timezone.utc).strftime("%Y-%m-%d")
    if fallback.lower() not in when_cands:
        when_cands[fallback.lower()] = (fallback, 0.1, len(text))
    descriptors["when"] = rank_candidates(list(when_cands.values()), "when", top_k)

    descriptors["where"] = rank_candidates(
        _entity_candidates(entities, {LOCATION}, layout, set()),
        "where", top_k)

    why_cands = []
    how_cands = []
    for s, e, is_title, body_idx in layout:
        if is_title:
            continue
        sentence = text[s:e].strip()
        if _contains_cue(sentence, CAUSAL_CUES):
            why_cands.append((sentence, 0.6 / (1 + body_idx), s))
        if _contains_cue(sentence, MANNER_CUES):
            how_cands.append((sentence, 0.5 / (1 + body_idx), s))
    descriptors["why"] = rank_candidates(why_cands, "why", top_k)
    descriptors["how"] = rank_candidates(how_cands, "how", top_k)

    return EventDescriptorSet(cluster_id=cluster_id, descriptors=descriptors)

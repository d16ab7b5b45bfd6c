"""Deterministic text preprocessing: tokenization, lemmatization, language gate."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .config import DATA_DIR
from .ingest import Document

_NON_ASCII = re.compile(r"[^\x00-\x7f]")
_NON_ALNUM_RUN = re.compile(r"[^A-Za-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase ASCII tokens; non-ASCII stripped first, punctuation splits."""
    ascii_text = _NON_ASCII.sub("", text)
    return [tok.lower() for tok in _NON_ALNUM_RUN.split(ascii_text) if tok]


def lemmatize(token: str, lexicon: dict[str, str]) -> str:
    """Lexicon lemma if present, else suffix rules, else identity.

    Suffix rules, in order: ies->y, sses->ss, trailing s removed unless the
    token ends in ss/us/is.
    """
    hit = lexicon.get(token)
    if hit is not None:
        return hit
    if token.endswith("ies") and len(token) > 3:
        return token[:-3] + "y"
    if token.endswith("sses"):
        return token[:-2]
    if token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def is_english(tokens: list[str], stoplist: set[str], threshold: float) -> bool:
    """True when the stop-word ratio of raw tokens reaches the threshold."""
    if not tokens:
        return False
    hits = sum(1 for tok in tokens if tok in stoplist)
    return hits / len(tokens) >= threshold


@dataclass(frozen=True)
class PreparedDoc:
    doc_id: str
    tokens: tuple[str, ...]
    raw_token_count: int
    stopword_ratio: float


@dataclass(frozen=True)
class Rejected:
    doc_id: str
    reason: str  # NonEnglish | NoTokens


def prepare(
    doc: Document,
    stoplist: set[str],
    lexicon: dict[str, str],
    threshold: float,
) -> PreparedDoc | Rejected:
    """Tokenize title+body, gate on English, strip stop words, lemmatize."""
    raw_tokens = tokenize(doc.title + " " + doc.body)
    if not raw_tokens:
        return Rejected(doc.id, "NoTokens")
    if not is_english(raw_tokens, stoplist, threshold):
        return Rejected(doc.id, "NonEnglish")
    stop_hits = sum(1 for tok in raw_tokens if tok in stoplist)
    content = [tok for tok in raw_tokens if tok not in stoplist]
    if not content:
        return Rejected(doc.id, "NoTokens")
    return PreparedDoc(
        doc_id=doc.id,
        tokens=tuple(lemmatize(tok, lexicon) for tok in content),
        raw_token_count=len(raw_tokens),
        stopword_ratio=stop_hits / len(raw_tokens),
    )


def load_stoplist(path: str | Path | None = None) -> set[str]:
    """One lowercase word per line; blank lines and # comments skipped."""
    path = Path(path) if path else DATA_DIR / "stopwords.txt"
    words = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return words


def load_lexicon(path: str | Path | None = None) -> dict[str, str]:
    """TSV of form<TAB>lemma per line."""
    path = Path(path) if path else DATA_DIR / "lemmas.tsv"
    lexicon = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            form, _, lemma = line.partition("\t")
            if form and lemma:
                lexicon[form.strip()] = lemma.strip()
    return lexicon

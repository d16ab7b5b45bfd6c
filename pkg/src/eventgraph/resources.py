"""Shipped lexicons and gazetteers used by extraction stages."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .config import DATA_DIR
from .textprep import load_lexicon, load_stoplist


@dataclass(frozen=True)
class GazetteerRow:
    name: str
    country: str
    population: int


class GeoGazetteer:
    """Case-insensitive place lookup from a `name,country,population` CSV."""

    def __init__(self, rows: list[GazetteerRow]):
        self._by_name: dict[str, list[GazetteerRow]] = {}
        for row in rows:
            self._by_name.setdefault(row.name.lower(), []).append(row)

    @classmethod
    def from_csv(cls, path: str | Path) -> "GeoGazetteer":
        rows = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for rec in csv.DictReader(fh):
                rows.append(
                    GazetteerRow(
                        name=rec["name"].strip(),
                        country=rec["country"].strip(),
                        population=int(rec["population"]),
                    )
                )
        return cls(rows)

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._by_name

    def lookup(self, name: str) -> GazetteerRow | None:
        """Best row for a place name; the highest population wins ties."""
        rows = self._by_name.get(name.lower())
        if not rows:
            return None
        return max(rows, key=lambda r: (r.population, r.country))


def _load_wordlist(path: str | Path) -> set[str]:
    words = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.add(word)
    return words


@dataclass(frozen=True)
class Resources:
    """All file-backed lexicons bundled for the pipeline stages."""

    stoplist: frozenset[str]
    lemma_lexicon: dict[str, str]
    verb_lexicon: dict[str, str]
    function_words: frozenset[str]
    org_suffixes: frozenset[str]
    persons: frozenset[str]
    gazetteer: GeoGazetteer

    @classmethod
    def load(
        cls,
        stoplist_path: str | Path | None = None,
        lemma_path: str | Path | None = None,
        verb_path: str | Path | None = None,
        function_words_path: str | Path | None = None,
        org_suffix_path: str | Path | None = None,
        persons_path: str | Path | None = None,
        gazetteer_path: str | Path | None = None,
    ) -> "Resources":
        return cls(
            stoplist=frozenset(load_stoplist(stoplist_path)),
            lemma_lexicon=load_lexicon(lemma_path),
            verb_lexicon=load_lexicon(verb_path or DATA_DIR / "verbs.tsv"),
            function_words=frozenset(
                _load_wordlist(function_words_path or DATA_DIR / "function_words.txt")
            ),
            org_suffixes=frozenset(
                w.lower() for w in _load_wordlist(org_suffix_path or DATA_DIR / "org_suffixes.txt")
            ),
            persons=frozenset(
                name.lower() for name in _load_wordlist(persons_path or DATA_DIR / "persons.txt")
            ),
            gazetteer=GeoGazetteer.from_csv(gazetteer_path or DATA_DIR / "gazetteer.csv"),
        )

"""Load human-annotated gold lexica and align them to lemma#PoS keys.

Supported source formats:

  anew / warr   comma-separated ``word,valence-mean`` rows; valence is on the
                native 1..9 scale and is linearly rescaled to [-1, 1] via
                (v - 5) / 4
  gi            comma-separated ``word,tag,label`` rows; label is
                Positiv/Negativ, tag is one of noun/verb/adj/adv/modif or
                empty (modif covers both adjective and adverb)
  generic_tsv   ``word[#pos]<TAB>score`` with scores already in [-1, 1]

Alignment follows a fixed recipe: keep the word if it is a known lemma,
otherwise retry with its inflection-stripped candidates, otherwise drop it.
Untagged words are expanded to every PoS the lemma has; each expansion
inherits the word's score. Source entries in the sense-disambiguated
``word#pos#n`` form are discarded up front.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .errors import DataError
from .swn_store import POS_TAGS, SwnStore

log = logging.getLogger(__name__)

GOLD_FORMATS = ("anew", "gi", "warr", "generic_tsv")

_GI_TAGS = {
    "noun": ("n",),
    "verb": ("v",),
    "adj": ("a",),
    "adjective": ("a",),
    "adv": ("r",),
    "adverb": ("r",),
    "modif": ("a", "r"),
}

Record = tuple[str, float, tuple[str, ...] | None]


@dataclass
class RawGold:
    kind: str  # "continuous" | "binary"
    provenance: str
    records: list[Record]
    discarded_sense_tagged: int = 0


@dataclass
class GoldLexicon:
    kind: str
    provenance: str
    entries: dict[str, float] = field(default_factory=dict)

    def to_raw(self) -> RawGold:
        records = [
            (key.rsplit("#", 1)[0], score, (key.rsplit("#", 1)[1],))
            for key, score in self.entries.items()
        ]
        return RawGold(self.kind, self.provenance, records)


@dataclass
class AlignReport:
    input_words: int = 0
    aligned_direct: int = 0
    aligned_lemmatized: int = 0
    dropped: int = 0
    expansions: int = 0
    duplicates_merged: int = 0
    filtered_all_zero: int = 0

    def lines(self) -> list[str]:
        return [
            f"input words      {self.input_words}",
            f"aligned direct   {self.aligned_direct}",
            f"aligned via lemma {self.aligned_lemmatized}",
            f"dropped          {self.dropped}",
            f"expansions       {self.expansions}",
            f"duplicates merged {self.duplicates_merged}",
            f"filtered all-zero {self.filtered_all_zero}",
        ]


def rescale_valence(v: float) -> float:
    """Map a 1..9 valence rating onto [-1, 1] with midpoint 5."""
    if not 1.0 <= v <= 9.0:
        raise DataError(f"valence {v} outside the 1..9 rating scale")
    return (v - 5.0) / 4.0


def _read_rows(path: Path, delimiter: str) -> list[list[str]]:
    try:
        with path.open(encoding="utf-8", newline="") as fh:
            return [row for row in csv.reader(fh, delimiter=delimiter) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _sense_tagged(word: str) -> bool:
    parts = word.split("#")
    return len(parts) > 2 or (len(parts) == 2 and parts[1].isdigit())


def load_gold(path: str | Path, format: str, kind: str = "auto") -> RawGold:
    """Read one gold lexicon file into raw (word, score, tags) records.

    `kind` only applies to generic_tsv; anew/warr are continuous and gi is
    binary by definition. The default "auto" calls a generic file binary
    when every score is exactly +/-1.
    """
    path = Path(path)
    if format not in GOLD_FORMATS:
        raise DataError(f"unknown gold format {format!r} (expected one of {GOLD_FORMATS})")

    records: list[Record] = []
    discarded = 0

    if format in ("anew", "warr"):
        rows = _read_rows(path, ",")
        for i, row in enumerate(rows):
            if len(row) < 2:
                raise DataError(f"{path}: row {i + 1} lacks the valence column")
            word = row[0].strip().lower()
            try:
                valence = float(row[1])
            except ValueError:
                if i == 0:
                    continue  # header row
                raise DataError(f"{path}: non-numeric valence in row {i + 1}")
            if _sense_tagged(word):
                discarded += 1
                continue
            records.append((word, rescale_valence(valence), None))
        return RawGold("continuous", format, records, discarded)

    if format == "gi":
        rows = _read_rows(path, ",")
        for i, row in enumerate(rows):
            if len(row) < 3:
                raise DataError(f"{path}: row {i + 1} lacks word,tag,label columns")
            word = row[0].strip().lower()
            tag = row[1].strip().lower()
            label = row[2].strip().lower()
            if label in ("positiv", "positive"):
                score = 1.0
            elif label in ("negativ", "negative"):
                score = -1.0
            elif i == 0:
                continue  # header row
            else:
                raise DataError(f"{path}: row {i + 1} has label {row[2]!r}")
            if _sense_tagged(word):
                discarded += 1
                continue
            if not tag:
                tags = None
            elif tag in _GI_TAGS:
                tags = _GI_TAGS[tag]
            else:
                log.warning("%s: row %d has unknown tag %r; expanding to all PoS",
                            path, i + 1, row[1])
                tags = None
            records.append((word, score, tags))
        return RawGold("binary", format, records, discarded)

    # generic_tsv
    rows = _read_rows(path, "\t")
    for i, row in enumerate(rows):
        if len(row) < 2:
            raise DataError(f"{path}: row {i + 1} lacks the score column")
        token = row[0].strip().lower()
        try:
            score = float(row[1])
        except ValueError:
            if i == 0:
                continue
            raise DataError(f"{path}: non-numeric score in row {i + 1}")
        if not -1.0 <= score <= 1.0:
            raise DataError(f"{path}: score {score} outside [-1, 1] in row {i + 1}")
        if _sense_tagged(token):
            discarded += 1
            continue
        word, _, pos = token.rpartition("#")
        if word and pos in POS_TAGS:
            records.append((word, score, (pos,)))
        else:
            records.append((token, score, None))
    if kind == "auto":
        kind = "binary" if records and all(s in (-1.0, 1.0) for _, s, _ in records) else "continuous"
    return RawGold(kind, format, records, discarded)


def default_lemma_candidates(word: str) -> list[str]:
    """Candidate base forms for an inflected English word.

    Strips -s/-es/-ies/-ed/-ied/-ing with consonant-doubling and final-e
    restoration; recall matters more than precision because candidates are
    only accepted when they exist in the score resource.
    """
    w = word.lower()
    cands: list[str] = []
    if w.endswith("ies") and len(w) > 4:
        cands.append(w[:-3] + "y")
    if w.endswith("es") and len(w) > 3:
        cands += [w[:-2], w[:-1]]
    if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
        cands.append(w[:-1])
    if w.endswith("ied") and len(w) > 4:
        cands.append(w[:-3] + "y")
    if w.endswith("ed") and len(w) > 3:
        cands += [w[:-2], w[:-1]]
        if len(w) > 4 and w[-3] == w[-4]:
            cands.append(w[:-3])
    if w.endswith("ing") and len(w) > 4:
        cands += [w[:-3], w[:-3] + "e"]
        if len(w) > 5 and w[-4] == w[-5]:
            cands.append(w[:-4])
    seen = set()
    return [c for c in cands if not (c in seen or seen.add(c))]


Lemmatizer = Callable[[str], str | Iterable[str]]


def align_to_swn(raw: RawGold, store: SwnStore,
                 lemmatizer: Lemmatizer = default_lemma_candidates,
                 ) -> tuple[GoldLexicon, AlignReport]:
    """Align raw gold records to lemma#PoS keys present in the store."""
    report = AlignReport(input_words=len(raw.records))
    scores: dict[str, list[float]] = {}

    for word, score, tags in raw.records:
        word = word.lower()
        if store.has_lemma(word):
            lemma = word
            report.aligned_direct += 1
        else:
            produced = lemmatizer(word)
            candidates = [produced] if isinstance(produced, str) else list(produced)
            lemma = next((c for c in candidates if store.has_lemma(c)), None)
            if lemma is None:
                report.dropped += 1
                continue
            report.aligned_lemmatized += 1
        available = store.pos_tags_of(lemma)
        expand_to = available if tags is None else [t for t in tags if t in available]
        if not expand_to:
            # aligned lemma but not under any declared PoS
            report.dropped += 1
            report.aligned_direct -= 1 if lemma == word else 0
            report.aligned_lemmatized -= 0 if lemma == word else 1
            continue
        for pos in expand_to:
            scores.setdefault(f"{lemma}#{pos}", []).append(score)
            report.expansions += 1

    entries: dict[str, float] = {}
    for key, values in scores.items():
        if len(values) > 1:
            report.duplicates_merged += len(values) - 1
            log.warning("duplicate gold entries for %s; keeping the mean of %d scores",
                        key, len(values))
        mean = sum(values) / len(values)
        if raw.kind == "binary":
            if mean == 0.0:
                log.warning("conflicting binary labels for %s; entry dropped", key)
                continue
            mean = 1.0 if mean > 0 else -1.0
        entries[key] = mean

    return GoldLexicon(raw.kind, raw.provenance, entries), report


def filter_all_zero(gold: GoldLexicon, store: SwnStore) -> tuple[GoldLexicon, int]:
    """Drop entries whose profile carries no signal (all scores zero)."""
    kept: dict[str, float] = {}
    removed = 0
    for key, score in gold.entries.items():
        profile = store.profile(key)
        if profile is None:
            raise DataError(f"gold key {key} is missing from the store (alignment bug)")
        if profile.is_all_zero():
            removed += 1
        else:
            kept[key] = score
    return GoldLexicon(gold.kind, gold.provenance, kept), removed

"""Parse sense-level polarity resources and index them by lemma#PoS.

The expected input is the public SentiWordNet 3.0 tab-separated format:
comment lines start with '#', data lines carry at least

    PoS <TAB> offset <TAB> PosScore <TAB> NegScore <TAB> SynsetTerms <TAB> Gloss

where SynsetTerms is a space-separated list of ``lemma#sense-number`` tokens.
Every synset's positive and negative score lies in [0, 1]; the smallest sense
number of a lemma#PoS is its most frequent sense. Glosses are discarded.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

log = logging.getLogger(__name__)

POS_TAGS = ("a", "n", "v", "r")


@dataclass(frozen=True)
class SynsetEntry:
    """One parsed synset record."""

    pos: str
    offset: str
    pos_score: float
    neg_score: float
    terms: tuple[tuple[str, int], ...]  # (lemma, sense_number)


@dataclass(frozen=True)
class SenseProfile:
    """Positive/negative score vectors of one lemma#PoS, ordered by sense number.

    Index i holds the scores of sense i+1; sense 1 (the most frequent) comes
    first. Both vectors always have the same, nonzero length.
    """

    lemma_pos: str
    pos_scores: tuple[float, ...]
    neg_scores: tuple[float, ...]

    def is_all_zero(self) -> bool:
        return not any(self.pos_scores) and not any(self.neg_scores)


class SwnStore:
    """Immutable lemma#PoS -> SenseProfile index.

    Safe to share across threads once constructed; all accessors are
    read-only.
    """

    def __init__(self, entries: list[SynsetEntry], skipped_lines: int = 0,
                 warnings: list[str] | None = None):
        self.entries = tuple(entries)
        self.skipped_lines = skipped_lines
        self.warnings = tuple(warnings or ())
        self._profiles = _build_profiles(entries)
        self._sorted_keys = tuple(sorted(self._profiles))
        self._lemmas = frozenset(k.rsplit("#", 1)[0] for k in self._profiles)

    def __len__(self) -> int:
        return len(self._profiles)

    def __contains__(self, lemma_pos: str) -> bool:
        return lemma_pos in self._profiles

    def __eq__(self, other) -> bool:
        if not isinstance(other, SwnStore):
            return NotImplemented
        return self._profiles == other._profiles

    def profile(self, lemma_pos: str) -> SenseProfile | None:
        return self._profiles.get(lemma_pos)

    def has_lemma(self, lemma: str) -> bool:
        return lemma in self._lemmas

    def pos_tags_of(self, lemma: str) -> list[str]:
        """All PoS tags under which `lemma` appears, in a/n/v/r order."""
        return [p for p in POS_TAGS if f"{lemma}#{p}" in self._profiles]

    def keys(self) -> tuple[str, ...]:
        return self._sorted_keys

    def profiles(self) -> dict[str, SenseProfile]:
        return dict(self._profiles)


def _build_profiles(entries: list[SynsetEntry]) -> dict[str, SenseProfile]:
    by_key: dict[str, dict[int, tuple[float, float]]] = {}
    for entry in entries:
        for lemma, sense in entry.terms:
            key = f"{lemma}#{entry.pos}"
            senses = by_key.setdefault(key, {})
            if sense in senses:
                raise DataError(
                    f"duplicate sense {sense} for {key}: resource is inconsistent"
                )
            senses[sense] = (entry.pos_score, entry.neg_score)
    profiles = {}
    for key, senses in by_key.items():
        numbers = sorted(senses)
        if numbers != list(range(1, len(numbers) + 1)):
            raise DataError(
                f"sense numbering of {key} has gaps ({numbers}); "
                "frequency-weighted scoring depends on sense rank"
            )
        profiles[key] = SenseProfile(
            key,
            tuple(senses[n][0] for n in numbers),
            tuple(senses[n][1] for n in numbers),
        )
    return profiles


def _parse_terms(field: str) -> tuple[tuple[str, int], ...]:
    terms = []
    for token in field.split():
        lemma, _, sense = token.rpartition("#")
        if not lemma or not sense.isdigit() or int(sense) < 1:
            raise ValueError(f"bad synset term {token!r}")
        terms.append((lemma.lower(), int(sense)))
    if not terms:
        raise ValueError("empty synset term list")
    return tuple(terms)


def parse_swn_file(path: str | Path) -> SwnStore:
    """Parse a SentiWordNet 3.0-format file into a store.

    Malformed lines are skipped with a logged diagnostic and counted; scores
    outside [0, 1] abort the parse. pos+neg sums above 1 are kept but logged,
    so upstream data is never silently altered.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    entries: list[SynsetEntry] = []
    skipped = 0
    warnings: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 6:
            log.warning("%s:%d: expected >= 6 tab-separated fields, got %d",
                        path, lineno, len(fields))
            skipped += 1
            continue
        pos, offset, pos_raw, neg_raw, terms_raw = (f.strip() for f in fields[:5])
        if pos not in POS_TAGS:
            log.warning("%s:%d: unknown PoS tag %r", path, lineno, pos)
            skipped += 1
            continue
        try:
            pos_score = float(pos_raw)
            neg_score = float(neg_raw)
            terms = _parse_terms(terms_raw)
        except ValueError as exc:
            log.warning("%s:%d: %s", path, lineno, exc)
            skipped += 1
            continue
        if not (0.0 <= pos_score <= 1.0 and 0.0 <= neg_score <= 1.0):
            raise DataError(
                f"{path}:{lineno}: score outside [0, 1] "
                f"(pos={pos_score}, neg={neg_score})"
            )
        if pos_score + neg_score > 1.0 + 1e-9:
            msg = (f"{path}:{lineno}: pos+neg = {pos_score + neg_score:.6f} > 1 "
                   f"for offset {offset}; entry kept as-is")
            warnings.append(msg)
            log.warning("%s", msg)
        entries.append(SynsetEntry(pos, offset, pos_score, neg_score, terms))
    if skipped:
        log.warning("%s: skipped %d malformed line(s)", path, skipped)
    return SwnStore(entries, skipped_lines=skipped, warnings=warnings)


def sense_profile(store: SwnStore, lemma: str, pos: str) -> SenseProfile | None:
    """Profile of lemma#pos, or None when the lemma has no sense under pos."""
    return store.profile(f"{lemma}#{pos}")


def lemma_pos_keys(store: SwnStore, only_nonzero: bool = False) -> list[str]:
    """All lemma#PoS keys, sorted lexicographically.

    With only_nonzero, keys whose profile is identically zero are skipped.
    """
    if not only_nonzero:
        return list(store.keys())
    return [k for k in store.keys() if not store.profile(k).is_all_zero()]


def dump_canonical(store: SwnStore) -> str:
    """Canonical TSV dump: lemma#pos / sense / pos / neg, 6-decimal scores."""
    lines = []
    for key in store.keys():
        p = store.profile(key)
        for i in range(len(p.pos_scores)):
            lines.append(f"{key}\t{i + 1}\t{p.pos_scores[i]:.6f}\t{p.neg_scores[i]:.6f}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_canonical(store: SwnStore, path: str | Path) -> None:
    Path(path).write_text(dump_canonical(store), encoding="utf-8")


def load_canonical(path: str | Path) -> SwnStore:
    """Re-load a canonical dump produced by dump_canonical."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            key, sense, pos_raw, neg_raw = line.split("\t")
            lemma, pos = key.rsplit("#", 1)
            pos_score = float(pos_raw)
            neg_score = float(neg_raw)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad canonical line: {exc}") from exc
        if pos not in POS_TAGS:
            raise DataError(f"{path}:{lineno}: unknown PoS tag {pos!r}")
        if not (0.0 <= pos_score <= 1.0 and 0.0 <= neg_score <= 1.0):
            raise DataError(f"{path}:{lineno}: score outside [0, 1]")
        entries.append(SynsetEntry(pos, f"c{lineno:07d}", pos_score, neg_score,
                                   ((lemma, int(sense)),)))
    return SwnStore(entries)

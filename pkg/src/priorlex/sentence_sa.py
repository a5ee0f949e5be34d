"""Bag-of-words sentence scoring against a prior-polarity lexicon.

Sentences arrive pre-lemmatized and PoS-tagged, one per line:

    id <TAB> gold <TAB> lemma#pos lemma#pos ...

The gold field holds a real value in [-1, 1], a +/-1 label, or "-" when no
annotation exists. Regression scoring is the plain mean of the lexicon
scores of the recognized tokens; classification is a majority vote over the
signs of those scores. A sentence with no recognized token is undecidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .swn_store import POS_TAGS


@dataclass(frozen=True)
class TaggedSentence:
    sid: str
    tokens: tuple[str, ...]
    gold: float | None


@dataclass(frozen=True)
class CoverageResult:
    token_coverage: float
    matched_tokens: int
    total_tokens: int
    undecidable_sentences: int
    undecidable_fraction: float


def _lemma_of(token: str) -> str:
    return token.rsplit("#", 1)[0]


def filter_stopwords(tokens: Iterable[str], stoplist: frozenset[str] | set[str]) -> list[str]:
    """Drop tokens whose lemma is a stop word; matching ignores the PoS."""
    return [t for t in tokens if _lemma_of(t) not in stoplist]


def _usable_tokens(sentence: TaggedSentence, stoplist) -> Sequence[str]:
    if stoplist:
        return filter_stopwords(sentence.tokens, stoplist)
    return sentence.tokens


def score_sentence_avg(sentence: TaggedSentence, lexicon: Mapping[str, float],
                       stoplist=None) -> float | None:
    """Mean lexicon score over recognized tokens; None when nothing matches."""
    scores = [lexicon[t] for t in _usable_tokens(sentence, stoplist) if t in lexicon]
    if not scores:
        return None
    return sum(scores) / len(scores)


def classify_sentence_majority(sentence: TaggedSentence, lexicon: Mapping[str, float],
                               stoplist=None) -> int | None:
    """Majority vote over the signs of recognized token scores.

    Unrecognized tokens contribute nothing; a zero vote sum (tie or nothing
    matched) is undecidable.
    """
    vote = 0
    for token in _usable_tokens(sentence, stoplist):
        score = lexicon.get(token)
        if score is not None and score != 0.0:
            vote += 1 if score > 0 else -1
    if vote == 0:
        return None
    return 1 if vote > 0 else -1


def coverage(dataset: Sequence[TaggedSentence], lexicon: Mapping[str, float],
             stoplist=None) -> CoverageResult:
    """Matched-token share plus the count of sentences with no match."""
    if not dataset:
        raise ValueError("empty dataset")
    matched = 0
    total = 0
    undecidable = 0
    for sentence in dataset:
        tokens = _usable_tokens(sentence, stoplist)
        hits = sum(1 for t in tokens if t in lexicon)
        matched += hits
        total += len(tokens)
        if hits == 0:
            undecidable += 1
    return CoverageResult(
        token_coverage=matched / total if total else 0.0,
        matched_tokens=matched,
        total_tokens=total,
        undecidable_sentences=undecidable,
        undecidable_fraction=undecidable / len(dataset),
    )


def binarize_dataset(dataset: Sequence[TaggedSentence], neg_hi: float = -0.5,
                     pos_lo: float = 0.5) -> list[TaggedSentence]:
    """Label sentences by gold value: <= neg_hi negative, >= pos_lo positive.

    Sentences in the open neutral band are dropped.
    """
    if neg_hi >= pos_lo:
        raise ValueError(f"neg_hi ({neg_hi}) must be below pos_lo ({pos_lo})")
    out = []
    for s in dataset:
        if s.gold is None:
            raise ValueError(f"sentence {s.sid} has no gold value to binarize")
        if s.gold <= neg_hi:
            out.append(TaggedSentence(s.sid, s.tokens, -1))
        elif s.gold >= pos_lo:
            out.append(TaggedSentence(s.sid, s.tokens, 1))
    return out


def _parse_token(token: str, where: str) -> str:
    lemma, sep, pos = token.rpartition("#")
    if not sep or not lemma or pos not in POS_TAGS:
        raise DataError(f"{where}: token {token!r} is not lemma#pos with pos in {POS_TAGS}")
    return f"{lemma.lower()}#{pos}"


def load_dataset(path) -> list[TaggedSentence]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    sentences = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise DataError(f"{path}:{lineno}: expected id<TAB>gold<TAB>tokens")
        sid, gold_raw = fields[0], fields[1].strip()
        if gold_raw in ("", "-"):
            gold = None
        else:
            try:
                gold = float(gold_raw)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad gold value {gold_raw!r}") from exc
            if gold == int(gold) and gold in (-1.0, 1.0):
                gold = int(gold)
        token_field = fields[2] if len(fields) > 2 else ""
        tokens = tuple(
            _parse_token(t, f"{path}:{lineno}") for t in token_field.split()
        )
        sentences.append(TaggedSentence(sid, tokens, gold))
    return sentences


def write_dataset(dataset: Sequence[TaggedSentence], path) -> None:
    lines = []
    for s in dataset:
        gold = "-" if s.gold is None else (f"{s.gold:g}" if isinstance(s.gold, int) else repr(s.gold))
        lines.append(f"{s.sid}\t{gold}\t{' '.join(s.tokens)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_stoplist(path) -> frozenset[str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read stoplist {path}: {exc}") from exc
    words = frozenset(w.strip().lower() for w in text.splitlines() if w.strip())
    if not words:
        raise DataError(f"stoplist {path} is empty")
    return words

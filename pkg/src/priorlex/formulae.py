"""Posterior-to-prior polarity formulae over sense profiles.

Every formula turns the positive and negative score vectors of one lemma#PoS
into a pair ``(f_pos, f_neg)`` in [0, 1]; a mapping strategy then collapses
the pair to a single signed prior in [-1, 1]:

  m -- the dominant score with its sign: +f_pos if f_pos >= f_neg else -f_neg
  d -- the difference f_pos - f_neg

Formulae (applied to pos and neg vectors independently):

  fs      first (most frequent) sense only
  mean    arithmetic mean over all senses
  uni     mean over the dominant nonzero senses on each side; when the two
          means tie, the side covering more senses wins (forced sign)
  uniw    like uni but without the cardinality tie-break
  w1      sense-rank weighting by a geometric series of ratio 1/2
  w2      sense-rank weighting by a harmonic series
  w1s/w2s same, but each vector is sorted by descending strength first
  w1n/w2n same as w1/w2 with (0, 0) senses dropped before weighting
  w1sn/w2sn   sorted variants of w1n/w2n
  median  median score per side
  max     maximum score per side

Weights are always renormalized to sum to 1 over the senses actually
weighted, so outputs stay convex combinations of the input scores.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .swn_store import SenseProfile

FORMULA_IDS = (
    "fs", "mean", "uni", "uniw", "w1", "w2", "w1s", "w2s",
    "w1n", "w2n", "w1sn", "w2sn", "median", "max",
)

# Fixed feature layout: one m and one d entry per formula, except uni, whose
# tie-break already fixes the sign and therefore contributes a single entry.
FEATURE_NAMES = tuple(
    name
    for fid in FORMULA_IDS
    for name in ((fid,) if fid == "uni" else (f"{fid}_m", f"{fid}_d"))
)
assert len(FEATURE_NAMES) == 27

STRATEGIES = ("m", "d")

# Scores that tie as exact rationals can land one ulp apart in float, and the
# gap to the smallest genuine difference between weighted grid scores (~1e-6)
# is huge, so ties are detected with a fixed slack instead of ==.
_TIE_EPS = 1e-12


def _tied(a: float, b: float) -> bool:
    return abs(a - b) <= _TIE_EPS * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class FormulaOutput:
    f_pos: float
    f_neg: float
    forced_sign: int | None = None


@dataclass(frozen=True)
class PriorScore:
    value: float
    strategy: str


@lru_cache(maxsize=None)
def _geometric_weights(n: int) -> tuple[float, ...]:
    raw = [0.5 ** k for k in range(1, n + 1)]
    total = sum(raw)
    return tuple(w / total for w in raw)


@lru_cache(maxsize=None)
def _harmonic_weights(n: int) -> tuple[float, ...]:
    raw = [1.0 / k for k in range(1, n + 1)]
    total = sum(raw)
    return tuple(w / total for w in raw)


def _median(values: Sequence[float]) -> float:
    s = sorted(values)
    n = len(s)
    if n % 2 == 1:
        return s[n // 2]
    return (s[n // 2 - 1] + s[n // 2]) / 2.0


def _weighted(scores: Sequence[float], weights: Sequence[float]) -> float:
    return sum(w * s for w, s in zip(weights, scores))


def apply_formula(formula_id: str, profile: SenseProfile) -> FormulaOutput:
    """Apply one formula to a non-empty profile."""
    pos = profile.pos_scores
    neg = profile.neg_scores
    if not pos:
        raise ValueError(f"empty profile for {profile.lemma_pos}")

    if formula_id == "fs":
        return FormulaOutput(pos[0], neg[0])
    if formula_id == "mean":
        return FormulaOutput(sum(pos) / len(pos), sum(neg) / len(neg))
    if formula_id == "max":
        return FormulaOutput(max(pos), max(neg))
    if formula_id == "median":
        return FormulaOutput(_median(pos), _median(neg))
    if formula_id in ("uni", "uniw"):
        strongly_pos = [p for p, q in zip(pos, neg) if p >= q and p > 0]
        strongly_neg = [q for p, q in zip(pos, neg) if q > p and q > 0]
        f_pos = sum(strongly_pos) / len(strongly_pos) if strongly_pos else 0.0
        f_neg = sum(strongly_neg) / len(strongly_neg) if strongly_neg else 0.0
        if formula_id == "uniw":
            return FormulaOutput(f_pos, f_neg)
        sign = None
        if _tied(f_pos, f_neg):
            sign = 1 if len(strongly_pos) >= len(strongly_neg) else -1
        return FormulaOutput(f_pos, f_neg, sign)
    if formula_id in ("w1", "w2", "w1s", "w2s", "w1n", "w2n", "w1sn", "w2sn"):
        p, q = list(pos), list(neg)
        if formula_id.endswith("n"):
            kept = [i for i in range(len(p)) if p[i] != 0 or q[i] != 0]
            if not kept:
                return FormulaOutput(0.0, 0.0)
            p = [p[i] for i in kept]
            q = [q[i] for i in kept]
        if "s" in formula_id[2:]:
            p = sorted(p, reverse=True)
            q = sorted(q, reverse=True)
        weights = (_geometric_weights if formula_id[1] == "1" else _harmonic_weights)(len(p))
        return FormulaOutput(_weighted(p, weights), _weighted(q, weights))
    raise ValueError(f"unknown formula {formula_id!r}")


def map_polarity(out: FormulaOutput, strategy: str) -> PriorScore:
    """Collapse (f_pos, f_neg) to one signed prior under strategy m or d."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if out.forced_sign is not None:
        return PriorScore(out.forced_sign * max(out.f_pos, out.f_neg), strategy)
    if strategy == "m":
        if out.f_pos >= out.f_neg or _tied(out.f_pos, out.f_neg):
            value = out.f_pos
        else:
            value = -out.f_neg
    else:
        value = out.f_pos - out.f_neg
    return PriorScore(value, strategy)


def prior_score(formula_id: str, profile: SenseProfile, strategy: str) -> PriorScore:
    return map_polarity(apply_formula(formula_id, profile), strategy)


def _unit_hash(*parts) -> float:
    """Stable uniform draw in [0, 1) derived from hashing the parts."""
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2 ** 64


def baseline_rnd(key: str, seed: int, strategy: str = "m") -> PriorScore:
    """Uniform draw in [-1, 1], deterministic per (key, seed)."""
    return PriorScore(2.0 * _unit_hash("rnd", key, seed) - 1.0, strategy)


def baseline_swnrnd(profile: SenseProfile, seed: int, strategy: str = "m") -> PriorScore:
    """Score of one uniformly chosen sense, deterministic per (key, seed)."""
    n = len(profile.pos_scores)
    idx = min(int(_unit_hash("swnrnd", profile.lemma_pos, seed) * n), n - 1)
    single = SenseProfile(profile.lemma_pos,
                          (profile.pos_scores[idx],), (profile.neg_scores[idx],))
    return map_polarity(apply_formula("fs", single), strategy)


def majority_class_label(training_labels: Iterable[int]) -> int:
    """The more frequent of the two labels; exact ties go positive."""
    labels = list(training_labels)
    if not labels:
        raise ValueError("empty label list")
    positives = sum(1 for y in labels if y > 0)
    return 1 if positives >= len(labels) - positives else -1


def all_formula_features(profile: SenseProfile) -> list[float]:
    """27-entry feature vector of mapped scores, in FEATURE_NAMES order."""
    features = []
    for fid in FORMULA_IDS:
        out = apply_formula(fid, profile)
        if fid == "uni":
            features.append(map_polarity(out, "m").value)
        else:
            features.append(map_polarity(out, "m").value)
            features.append(map_polarity(out, "d").value)
    return features


# ---------------------------------------------------------------------------
# Batch path: same features, vectorized across profiles of equal sense count.
# Used when scoring whole resources (~155k keys), where the per-profile path
# is too slow.
# ---------------------------------------------------------------------------

def _tied_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(a - b) <= _TIE_EPS * np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def _md(f_pos: np.ndarray, f_neg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.where((f_pos >= f_neg) | _tied_arr(f_pos, f_neg), f_pos, -f_neg)
    return m, f_pos - f_neg


def _row_normalized(raw: np.ndarray) -> np.ndarray:
    totals = raw.sum(axis=1, keepdims=True)
    return np.divide(raw, totals, out=np.zeros_like(raw), where=totals > 0)


def _series_by_rank(rank: np.ndarray, kind: str) -> np.ndarray:
    # rank counts from 1; entries with rank 0 get weight 0
    if kind == "geometric":
        raw = np.where(rank > 0, 0.5 ** rank.astype(float), 0.0)
    else:
        raw = np.divide(1.0, rank, out=np.zeros(rank.shape), where=rank > 0)
    return _row_normalized(raw)


def _block_features(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Feature matrix for a block of profiles sharing one sense count."""
    rows, n = P.shape
    cols: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    cols["fs"] = (P[:, 0], Q[:, 0])
    cols["mean"] = (P.mean(axis=1), Q.mean(axis=1))
    cols["max"] = (P.max(axis=1), Q.max(axis=1))
    cols["median"] = (np.median(P, axis=1), np.median(Q, axis=1))

    sp_mask = (P >= Q) & (P > 0)
    sn_mask = (Q > P) & (Q > 0)
    sp_count = sp_mask.sum(axis=1)
    sn_count = sn_mask.sum(axis=1)
    uni_pos = np.divide((P * sp_mask).sum(axis=1), sp_count,
                        out=np.zeros(rows), where=sp_count > 0)
    uni_neg = np.divide((Q * sn_mask).sum(axis=1), sn_count,
                        out=np.zeros(rows), where=sn_count > 0)
    cols["uniw"] = (uni_pos, uni_neg)

    Pd = -np.sort(-P, axis=1)
    Qd = -np.sort(-Q, axis=1)
    keep = (P != 0) | (Q != 0)
    rank_kept = np.cumsum(keep, axis=1) * keep  # 0 where dropped
    kept_count = keep.sum(axis=1)
    positions = np.arange(1, n + 1)
    # rank j (1-based) is active for sorted+filtered variants iff j <= kept count
    rank_sorted = np.where(positions[None, :] <= kept_count[:, None], positions[None, :], 0)
    # sort scores of dropped senses below the score floor so they land last
    Pdn = -np.sort(-np.where(keep, P, -1.0), axis=1)
    Qdn = -np.sort(-np.where(keep, Q, -1.0), axis=1)

    for fid, kind in (("w1", "geometric"), ("w2", "harmonic")):
        w_full = _series_by_rank(np.tile(positions, (1, 1)), kind)[0]
        cols[fid] = (P @ w_full, Q @ w_full)
        cols[fid + "s"] = (Pd @ w_full, Qd @ w_full)
        w_kept = _series_by_rank(rank_kept, kind)
        cols[fid + "n"] = ((P * w_kept).sum(axis=1), (Q * w_kept).sum(axis=1))
        w_rank = _series_by_rank(rank_sorted, kind)
        cols[fid + "sn"] = ((Pdn * w_rank).sum(axis=1), (Qdn * w_rank).sum(axis=1))

    out = np.empty((rows, len(FEATURE_NAMES)))
    i = 0
    for fid in FORMULA_IDS:
        if fid == "uni":
            tie = _tied_arr(uni_pos, uni_neg)
            sign = np.where(sp_count >= sn_count, 1.0, -1.0)
            forced = sign * np.maximum(uni_pos, uni_neg)
            out[:, i] = np.where(tie, forced, _md(uni_pos, uni_neg)[0])
            i += 1
        else:
            f_pos, f_neg = cols[fid]
            m, d = _md(f_pos, f_neg)
            out[:, i] = m
            out[:, i + 1] = d
            i += 2
    return out


def feature_matrix(profiles: Sequence[SenseProfile]) -> np.ndarray:
    """Stack all_formula_features over many profiles (row order preserved)."""
    result = np.empty((len(profiles), len(FEATURE_NAMES)))
    by_length: dict[int, list[int]] = {}
    for i, p in enumerate(profiles):
        by_length.setdefault(len(p.pos_scores), []).append(i)
    for n, idxs in by_length.items():
        P = np.array([profiles[i].pos_scores for i in idxs])
        Q = np.array([profiles[i].neg_scores for i in idxs])
        result[idxs, :] = _block_features(P, Q)
    return result


def write_lexicon(entries: dict[str, float], path, header_lines: Sequence[str] = ()) -> None:
    """Export a prior-polarity lexicon as TSV: lemma#pos <TAB> score (6 dp)."""
    lines = [f"# {h}" for h in header_lines]
    lines += [f"{key}\t{entries[key]:.6f}" for key in sorted(entries)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_lexicon(path) -> dict[str, float]:
    """Read a lemma#pos <TAB> score lexicon, skipping '#' comment lines."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read lexicon {path}: {exc}") from exc
    entries: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            key, raw = line.split("\t")
            entries[key] = float(raw)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad lexicon line: {exc}") from exc
    return entries

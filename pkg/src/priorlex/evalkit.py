"""Evaluation protocol: repeated 70/30 splits, metrics, significance tests.

All functions are pure; anything stochastic derives its randomness from an
explicit seed, so reports are reproducible byte for byte.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
import scipy.stats


@dataclass
class SplitPlan:
    repeats: int = 5
    train_fraction: float = 0.7
    seed: int = 0
    splits: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)


def make_splits(n: int, plan: SplitPlan) -> SplitPlan:
    """Materialize seeded train/test index pairs; |train| = round(f * n)."""
    if n < 10:
        raise ValueError(f"need at least 10 items to split, got {n}")
    n_train = int(round(plan.train_fraction * n))
    splits = []
    for rep in range(plan.repeats):
        rng = np.random.default_rng([plan.seed, rep])
        perm = rng.permutation(n)
        splits.append((np.sort(perm[:n_train]), np.sort(perm[n_train:])))
    return replace(plan, splits=splits)


def _paired(pred, gold) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred, dtype=float)
    g = np.asarray(gold, dtype=float)
    if p.shape != g.shape or p.size == 0:
        raise ValueError(f"prediction/gold length mismatch: {p.shape} vs {g.shape}")
    return p, g


def mae(pred: Sequence[float], gold: Sequence[float]) -> float:
    p, g = _paired(pred, gold)
    return float(np.mean(np.abs(p - g)))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    a, b = _paired(x, y)
    if a.size < 2:
        raise ValueError("pearson needs at least two points")
    a = a - a.mean()
    b = b - b.mean()
    denom = math.sqrt(float(a @ a) * float(b @ b))
    if denom == 0.0:
        raise ValueError("pearson undefined for a constant vector")
    return float(a @ b) / denom


def accuracy(pred: Sequence[int], gold: Sequence[int]) -> float:
    p, g = _paired(pred, gold)
    return float(np.mean(p == g))


def cohen_kappa(pred: Sequence[int], gold: Sequence[int]) -> float:
    """Chance-corrected agreement with marginal-product expected agreement."""
    p, g = _paired(pred, gold)
    p_o = float(np.mean(p == g))
    p_plus = float(np.mean(p > 0))
    g_plus = float(np.mean(g > 0))
    p_e = p_plus * g_plus + (1.0 - p_plus) * (1.0 - g_plus)
    if p_e == 1.0:
        warnings.warn("kappa undefined (both sides constant and equal); reporting 0")
        return 0.0
    return (p_o - p_e) / (1.0 - p_e)


def paired_t_test(a_scores: Sequence[float], b_scores: Sequence[float]) -> float:
    """Two-sided p-value of the paired t-test on per-run score differences."""
    a, b = _paired(a_scores, b_scores)
    if a.size < 2:
        raise ValueError("paired t-test needs at least two runs")
    diff = a - b
    sd = float(diff.std(ddof=1))
    if sd == 0.0:
        if float(diff.mean()) == 0.0:
            return 1.0
        warnings.warn("degenerate t-test: constant nonzero difference")
        return 0.0
    t = float(diff.mean()) / (sd / math.sqrt(diff.size))
    return float(2.0 * scipy.stats.t.sf(abs(t), df=diff.size - 1))


def approx_randomization_test(pred_a, pred_b, gold,
                              metric: Callable[[Sequence[float], Sequence[float]], float],
                              iterations: int = 10000, seed: int = 0) -> float:
    """Two-sided approximate randomization p-value for one paired metric.

    Each iteration swaps the two systems' predictions per instance with
    probability 1/2; the p-value uses add-one smoothing so it is never 0 and
    is exactly 1 for identical systems.
    """
    a, g = _paired(pred_a, gold)
    b, _ = _paired(pred_b, gold)
    observed = abs(metric(a, g) - metric(b, g))
    rng = np.random.default_rng([seed, 0x7261])
    at_least = 0
    for _ in range(iterations):
        swap = rng.random(a.size) < 0.5
        sa = np.where(swap, b, a)
        sb = np.where(swap, a, b)
        if abs(metric(sa, g) - metric(sb, g)) >= observed:
            at_least += 1
    return (at_least + 1) / (iterations + 1)


def fisher_z_test(r1: float, n1: int, r2: float, n2: int) -> float:
    """Two-sided p-value for the difference of two independent correlations."""
    if abs(r1) >= 1.0 or abs(r2) >= 1.0:
        raise ValueError("correlations must be strictly inside (-1, 1)")
    if n1 <= 3 or n2 <= 3:
        raise ValueError("fisher z needs more than 3 samples per correlation")
    z = (math.atanh(r1) - math.atanh(r2)) / math.sqrt(1.0 / (n1 - 3) + 1.0 / (n2 - 3))
    return float(2.0 * scipy.stats.norm.sf(abs(z)))


@dataclass(frozen=True)
class BinStat:
    lo: float
    hi: float
    count: int
    mae: float


def mae_by_bin(pred, gold, bin_edges: Sequence[float] | None = None) -> list[BinStat]:
    """MAE restricted to gold-value bins; empty bins are omitted.

    Bins are [lo, hi) except the last, which includes its right edge.
    """
    p, g = _paired(pred, gold)
    edges = np.asarray(bin_edges if bin_edges is not None else np.linspace(-1, 1, 9), dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be ascending with at least two values")
    if g.min() < edges[0] or g.max() > edges[-1]:
        raise ValueError("gold values fall outside the binning range")
    idx = np.clip(np.searchsorted(edges, g, side="right") - 1, 0, edges.size - 2)
    table = []
    for k in range(edges.size - 1):
        mask = idx == k
        if mask.any():
            table.append(BinStat(float(edges[k]), float(edges[k + 1]),
                                 int(mask.sum()), float(np.mean(np.abs(p - g)[mask]))))
    return table


@dataclass
class RegressionErrors:
    flagged: list
    threshold: float


@dataclass
class ClassificationErrors:
    both: list
    only_a: list
    only_b: list
    pct_both: float
    pct_only_a: float
    pct_only_b: float


def error_set(pred, gold, mode: str, pred_b=None, keys: Sequence | None = None):
    """Error analysis for one system (regression) or a system pair.

    regression: items whose absolute error exceeds mean + 2 sigma of the
    absolute-error distribution. classification: partition of the error union
    into both-wrong / only-A-wrong / only-B-wrong, with shares of the union.
    """
    p, g = _paired(pred, gold)
    ids = list(keys) if keys is not None else list(range(p.size))
    if len(ids) != p.size:
        raise ValueError("keys must align with predictions")
    if mode == "regression":
        errs = np.abs(p - g)
        threshold = float(errs.mean() + 2.0 * errs.std())
        return RegressionErrors([ids[i] for i in np.nonzero(errs > threshold)[0]], threshold)
    if mode == "classification":
        if pred_b is None:
            raise ValueError("classification mode needs pred_b")
        b, _ = _paired(pred_b, gold)
        wrong_a = p != g
        wrong_b = b != g
        both = [ids[i] for i in np.nonzero(wrong_a & wrong_b)[0]]
        only_a = [ids[i] for i in np.nonzero(wrong_a & ~wrong_b)[0]]
        only_b = [ids[i] for i in np.nonzero(~wrong_a & wrong_b)[0]]
        union = len(both) + len(only_a) + len(only_b)
        pct = (lambda k: k / union if union else 0.0)
        return ClassificationErrors(both, only_a, only_b,
                                    pct(len(both)), pct(len(only_a)), pct(len(only_b)))
    raise ValueError(f"unknown error_set mode {mode!r}")


class EvalReport:
    """Per-repeat metric values for a set of systems, with mean/std views."""

    def __init__(self, task: str, metric_names: Sequence[str]):
        self.task = task
        self.metric_names = tuple(metric_names)
        self.systems: list[str] = []
        self.values: dict[str, dict[str, list[float]]] = {}

    def add(self, system: str, metric: str, per_repeat: Sequence[float]) -> None:
        if metric not in self.metric_names:
            raise ValueError(f"unknown metric {metric!r}")
        if system not in self.values:
            self.systems.append(system)
            self.values[system] = {}
        self.values[system][metric] = [float(v) for v in per_repeat]

    def mean(self, system: str, metric: str) -> float:
        return float(np.mean(self.values[system][metric]))

    def std(self, system: str, metric: str) -> float:
        return float(np.std(self.values[system][metric]))

    def to_tsv(self) -> str:
        header = ["system"]
        for m in self.metric_names:
            header += [f"{m}_mu", f"{m}_sigma"]
        lines = ["\t".join(header)]
        for system in self.systems:
            row = [system]
            for m in self.metric_names:
                row += [f"{self.mean(system, m):.6f}", f"{self.std(system, m):.6f}"]
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        width = max([len(s) for s in self.systems] + [8]) + 2
        col = max(len(m) + 6 for m in self.metric_names) + 2
        header = "".join(f"{m + '_mu':>{col}}{m + '_sigma':>{col}}" for m in self.metric_names)
        lines = [f"{'system':<{width}}{header}"]
        for system in self.systems:
            cells = "".join(
                f"{self.mean(system, m):>{col}.3f}{self.std(system, m):>{col}.3f}"
                for m in self.metric_names
            )
            lines.append(f"{system:<{width}}{cells}")
        return "\n".join(lines) + "\n"

"""Blend the 27 formula features into one prediction.

Pipeline: z-score normalization fitted on training data, optional
stability-selection feature mask, then a grid-searched regularized linear
learner (ridge for regression, logistic loss for classification). Everything
is deterministic given (data, seed).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.optimize
import scipy.special

from .errors import DataError
from .formulae import FEATURE_NAMES, feature_matrix
from .swn_store import SwnStore

DEFAULT_GRID = tuple(np.logspace(-4, 2, 13))

_SPLIT_TAG = 0x6376  # cross-validation stream
_STAB_TAG = 0x7373  # stability-selection stream


@dataclass
class FeatureMatrix:
    keys: list[str]
    X: np.ndarray
    y: np.ndarray | None = None


@dataclass(eq=False)
class EnsembleModel:
    task: str  # "regression" | "classification"
    means: np.ndarray  # per raw feature column
    stds: np.ndarray
    mask: np.ndarray  # bool, per raw feature column
    weights: np.ndarray  # over masked columns only
    intercept: float
    lam: float
    seed: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnsembleModel):
            return NotImplemented
        return (
            self.task == other.task
            and self.intercept == other.intercept
            and self.lam == other.lam
            and self.seed == other.seed
            and np.array_equal(self.means, other.means)
            and np.array_equal(self.stds, other.stds)
            and np.array_equal(self.mask, other.mask)
            and np.array_equal(self.weights, other.weights)
        )


@dataclass
class StabilitySelection:
    mask: np.ndarray
    frequencies: np.ndarray
    fallback: bool = False


def build_feature_matrix(keys: Sequence[str], store: SwnStore) -> FeatureMatrix:
    """One 27-entry feature row per key, in the given key order."""
    profiles = []
    for key in keys:
        profile = store.profile(key)
        if profile is None:
            raise DataError(f"key {key} has no profile in the store")
        profiles.append(profile)
    X = feature_matrix(profiles) if profiles else np.empty((0, len(FEATURE_NAMES)))
    if not np.isfinite(X).all():
        raise DataError("non-finite formula feature encountered")
    return FeatureMatrix(list(keys), X)


def zscore_fit_apply(train_X: np.ndarray, test_X: np.ndarray | None = None):
    """Z-score both sets with train statistics (population std).

    Constant train columns are flagged and mapped to zero in both sets.
    Returns (train_Z, test_Z, means, stds, constant_flags).
    """
    train_X = np.asarray(train_X, dtype=float)
    if train_X.size == 0:
        raise ValueError("empty training matrix")
    means = train_X.mean(axis=0)
    stds = train_X.std(axis=0)
    constant = stds == 0.0
    scale = np.where(constant, 1.0, stds)

    def apply(X):
        Z = (np.asarray(X, dtype=float) - means) / scale
        Z[:, constant] = 0.0
        return Z

    test_Z = apply(test_X) if test_X is not None else None
    return apply(train_X), test_Z, means, stds, constant


def _soft(x: float, t: float) -> float:
    if x > t:
        return x - t
    if x < -t:
        return x + t
    return 0.0


def _lasso_cd(G: np.ndarray, c: np.ndarray, penalties: np.ndarray,
              tol: float = 1e-7, max_sweeps: int = 10000) -> np.ndarray:
    """Cyclic coordinate descent on the Gram form of the lasso.

    Minimizes (1/2) beta' G beta - c' beta + sum_j penalties_j |beta_j| where
    G = Z'Z/n and c = Z'y/n, so the cost per sweep is O(p^2) regardless of n.
    """
    p = c.size
    beta = np.zeros(p)
    g_beta = np.zeros(p)  # tracks G @ beta
    for _ in range(max_sweeps):
        max_delta = 0.0
        for j in range(p):
            if G[j, j] <= 0.0:
                continue
            old = beta[j]
            rho = c[j] - g_beta[j] + G[j, j] * old
            new = _soft(rho, penalties[j]) / G[j, j]
            if new != old:
                g_beta += G[:, j] * (new - old)
                beta[j] = new
                max_delta = max(max_delta, abs(new - old))
        if max_delta <= tol:
            break
    return beta


def stability_select(X: np.ndarray, y: np.ndarray, fraction: float = 0.75,
                     threshold: float = 0.25, resamples: int = 1000,
                     seed: int = 0, penalty_scale: float = 1.0) -> StabilitySelection:
    """Feature mask from randomized-penalty lasso over row subsamples.

    Each resample draws `fraction` of the rows without replacement, perturbs
    per-feature penalties by independent factors uniform in [0.5, 1], fits a
    lasso, and records the nonzero coefficients; features selected in at
    least `threshold` of the resamples are kept. The base penalty is the
    universal threshold std(y) * sqrt(2 ln p / m), which keeps pure-noise
    selection frequencies low while letting genuine signals saturate.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if n < 10:
        raise ValueError(f"stability selection needs at least 10 rows, got {n}")
    if np.all(y == y[0]):
        raise ValueError("degenerate target: y is constant")
    m = int(round(fraction * n))
    rng = np.random.default_rng([seed, _STAB_TAG])
    counts = np.zeros(p)
    for _ in range(resamples):
        idx = rng.choice(n, size=m, replace=False)
        u = rng.uniform(0.5, 1.0, size=p)
        Z, _, _, stds, _ = zscore_fit_apply(X[idx])
        ys = y[idx]
        y_std = ys.std()
        if y_std == 0.0:
            continue
        yc = ys - ys.mean()
        base = penalty_scale * y_std * math.sqrt(2.0 * math.log(p) / m)
        G = Z.T @ Z / m
        c = Z.T @ yc / m
        beta = _lasso_cd(G, c, base * u)
        counts += beta != 0.0
    frequencies = counts / resamples
    mask = frequencies >= threshold
    fallback = False
    if not mask.any():
        warnings.warn("stability selection kept no feature; falling back to all")
        mask = np.ones(p, dtype=bool)
        fallback = True
    return StabilitySelection(mask, frequencies, fallback)


def _fit_linear(X, y, lam, mask, task):
    """Fit one z-scored regularized linear model; returns model components."""
    n = X.shape[0]
    Z, _, means, stds, constant = zscore_fit_apply(X)
    eff_mask = ~constant if mask is None else np.asarray(mask, dtype=bool) & ~constant
    Zm = Z[:, eff_mask]
    p = Zm.shape[1]
    if task == "regression":
        intercept = float(y.mean())
        if p == 0:
            weights = np.zeros(0)
        else:
            A = Zm.T @ Zm / n + lam * np.eye(p)
            weights = np.linalg.solve(A, Zm.T @ (y - intercept) / n)
    else:
        if p == 0:
            pos = float(np.mean(y > 0))
            intercept = math.log(max(pos, 1e-12) / max(1.0 - pos, 1e-12))
            weights = np.zeros(0)
        else:
            weights, intercept = _fit_logistic(Zm, y, lam)
    return means, stds, eff_mask, weights, intercept


def _fit_logistic(Z: np.ndarray, y: np.ndarray, lam: float) -> tuple[np.ndarray, float]:
    n, p = Z.shape

    def objective(w):
        beta, b = w[:p], w[p]
        scores = Z @ beta + b
        ys = y * scores
        loss = float(np.mean(np.logaddexp(0.0, -ys))) + 0.5 * lam * float(beta @ beta)
        sig = scipy.special.expit(-ys)
        grad_beta = -(Z.T @ (y * sig)) / n + lam * beta
        grad_b = -float(np.mean(y * sig))
        return loss, np.append(grad_beta, grad_b)

    result = scipy.optimize.minimize(
        objective, np.zeros(p + 1), jac=True, method="L-BFGS-B",
        options={"maxiter": 1000, "ftol": 1e-14, "gtol": 1e-10},
    )
    return result.x[:p], float(result.x[p])


def _score(model_parts, X, task):
    means, stds, mask, weights, intercept = model_parts
    scale = np.where(stds == 0.0, 1.0, stds)
    Z = (X - means) / scale
    Z[:, stds == 0.0] = 0.0
    raw = Z[:, mask] @ weights + intercept
    if task == "regression":
        return np.clip(raw, -1.0, 1.0)
    return np.where(raw >= 0.0, 1.0, -1.0)


def _grid_search(X, y, grid, folds, seed, mask, task):
    n = X.shape[0]
    rng = np.random.default_rng([seed, _SPLIT_TAG])
    parts = np.array_split(rng.permutation(n), folds)
    best_lam = None
    best_score = None
    for lam in sorted(float(l) for l in grid):
        if lam <= 0.0:
            raise ValueError("regularization strengths must be positive")
        fold_scores = []
        for k in range(folds):
            val = parts[k]
            train = np.concatenate([parts[i] for i in range(folds) if i != k])
            parts_k = _fit_linear(X[train], y[train], lam, mask, task)
            pred = _score(parts_k, X[val], task)
            if task == "regression":
                fold_scores.append(float(np.mean(np.abs(pred - y[val]))))
            else:
                fold_scores.append(float(np.mean(pred == y[val])))
        score = float(np.mean(fold_scores))
        if best_score is None:
            better = True
        elif task == "regression":
            better = score <= best_score  # ties resolve to the larger lambda
        else:
            better = score >= best_score
        if better:
            best_score, best_lam = score, lam
    return best_lam


def fit_regressor(X, y, grid: Sequence[float] | None = None, folds: int = 10,
                  seed: int = 0, mask: np.ndarray | None = None) -> EnsembleModel:
    """Ridge regression with 10-fold cross-validated penalty choice."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] < 20:
        raise ValueError(f"need at least 20 rows to fit, got {X.shape[0]}")
    grid = DEFAULT_GRID if grid is None else grid
    lam = _grid_search(X, y, grid, folds, seed, mask, "regression")
    means, stds, eff_mask, weights, intercept = _fit_linear(X, y, lam, mask, "regression")
    return EnsembleModel("regression", means, stds, eff_mask, weights, intercept, lam, seed)


def fit_classifier(X, y, grid: Sequence[float] | None = None, folds: int = 10,
                   seed: int = 0, mask: np.ndarray | None = None) -> EnsembleModel:
    """Logistic-loss linear classifier over the same penalty ladder."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("classification training data must contain both classes")
    grid = DEFAULT_GRID if grid is None else grid
    lam = _grid_search(X, y, grid, folds, seed, mask, "classification")
    means, stds, eff_mask, weights, intercept = _fit_linear(X, y, lam, mask, "classification")
    return EnsembleModel("classification", means, stds, eff_mask, weights, intercept, lam, seed)


def predict(model: EnsembleModel, X) -> np.ndarray:
    """Clamped scores for regression models, +/-1 labels for classifiers."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.means.size:
        raise ValueError(f"expected {model.means.size} feature columns, got {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("non-finite feature values")
    parts = (model.means, model.stds, model.mask, model.weights, model.intercept)
    return _score(parts, X, model.task)


def train_ensemble(X, y, task: str, seed: int = 0, feature_selection: bool = True,
                   resamples: int = 1000, grid: Sequence[float] | None = None,
                   folds: int = 10) -> tuple[EnsembleModel, StabilitySelection | None]:
    """Full pipeline: stability selection (optional) then the fitted learner."""
    selection = None
    mask = None
    if feature_selection:
        selection = stability_select(X, y, resamples=resamples, seed=seed)
        mask = selection.mask
    fit = fit_regressor if task == "regression" else fit_classifier
    model = fit(X, y, grid=grid, folds=folds, seed=seed, mask=mask)
    return model, selection


# --- serialization ---------------------------------------------------------

_MODEL_HEADER = "priorlex-model v1"


def model_to_text(model: EnsembleModel) -> str:
    """Self-describing text dump; floats use repr so loading is exact."""
    lines = [
        _MODEL_HEADER,
        f"task {model.task}",
        f"seed {model.seed}",
        f"lambda {model.lam!r}",
        f"intercept {model.intercept!r}",
        "means " + " ".join(repr(v) for v in model.means.tolist()),
        "stds " + " ".join(repr(v) for v in model.stds.tolist()),
        "mask " + " ".join("1" if b else "0" for b in model.mask.tolist()),
        "weights " + " ".join(repr(v) for v in model.weights.tolist()),
    ]
    return "\n".join(lines) + "\n"


def save_model(model: EnsembleModel, path) -> None:
    Path(path).write_text(model_to_text(model), encoding="utf-8")


def load_model(path) -> EnsembleModel:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read model {path}: {exc}") from exc
    if not lines or lines[0] != _MODEL_HEADER:
        raise DataError(f"{path} is not a {_MODEL_HEADER!r} file")
    fields: dict[str, str] = {}
    for line in lines[1:]:
        if line.strip():
            key, _, value = line.partition(" ")
            fields[key] = value
    try:
        mask = np.array([c == "1" for c in fields["mask"].split()])
        weights = np.array([float(v) for v in fields["weights"].split()]
                           if fields["weights"].strip() else [])
        return EnsembleModel(
            task=fields["task"],
            seed=int(fields["seed"]),
            lam=float(fields["lambda"]),
            intercept=float(fields["intercept"]),
            means=np.array([float(v) for v in fields["means"].split()]),
            stds=np.array([float(v) for v in fields["stds"].split()]),
            mask=mask,
            weights=weights,
        )
    except (KeyError, ValueError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc

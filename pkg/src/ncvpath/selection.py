"""Choosing lambda (AIC/BIC, k-fold cross-validation) and guidance on gamma."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .cd_linear import FitConfig
from .cd_logistic import ScaleMode
from .convexity import diagnose_path
from .design import Dataset, Family, standardize
from .path import PathResult, fit_path, path_grid
from .penalties import Penalty

GUIDANCE_RATIO = 2.0


def path_df(path: PathResult) -> np.ndarray:
    """Active-set size per grid point, counting the intercept for binomial fits."""
    df = np.count_nonzero(path.betas, axis=1)
    if path.family is Family.BINOMIAL:
        df = df + 1
    return df


def _binomial_deviance(y, eta):
    # -2 log-likelihood, computed stably
    return 2.0 * np.sum(np.logaddexp(0.0, eta) - y * eta, axis=0)


def information_criteria(path: PathResult, data: Dataset):
    """Per-lambda ``(aic, bic)`` arrays.

    Gaussian: ``n log(RSS/n) + k df``; binomial: ``deviance + k df`` with
    ``k = 2`` (AIC) or ``log n`` (BIC).
    """
    n = data.n
    eta = path.predict_eta(data.X)
    df = path_df(path)
    if data.family is Family.GAUSSIAN:
        rss = np.sum((data.y[:, None] - eta) ** 2, axis=0)
        fit = n * np.log(rss / n)
    else:
        fit = _binomial_deviance(data.y[:, None], eta)
    return fit + 2.0 * df, fit + np.log(n) * df


def fold_assignment(y, k: int, seed: int, stratify: bool) -> np.ndarray:
    """Fold labels 0..k-1; stratified by class when ``stratify``."""
    n = len(y)
    rng = np.random.default_rng(seed)
    folds = np.empty(n, dtype=int)
    if not stratify:
        perm = rng.permutation(n)
        folds[perm] = np.arange(n) % k
        return folds
    offset = 0
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        if len(idx) < 2:
            raise ValueError(f"class {cls:g} has fewer than 2 observations; cannot stratify")
        idx = idx[rng.permutation(len(idx))]
        folds[idx] = (np.arange(len(idx)) + offset) % k
        offset += len(idx)
    return folds


def _losses(family, y, eta, loss):
    if family is Family.GAUSSIAN:
        return (y[:, None] - eta) ** 2
    if loss == "deviance":
        return 2.0 * (np.logaddexp(0.0, eta) - y[:, None] * eta)
    pred = expit(eta) > 0.5
    return (pred != (y[:, None] == 1)).astype(float)


@dataclass
class SelectionReport:
    lambdas: np.ndarray
    df: np.ndarray
    aic: np.ndarray
    bic: np.ndarray
    cv_error: np.ndarray
    cv_se: np.ndarray
    folds: int
    seed: int
    fold_assignment: np.ndarray
    chosen: dict = field(default_factory=dict)
    loss: str = "mse"
    path: PathResult | None = field(default=None, repr=False)

    @property
    def chosen_lambda(self) -> float:
        return self.chosen["cv"]


def _argmin_finite(values) -> int:
    values = np.where(np.isfinite(values), values, np.inf)
    return int(np.argmin(values))


def cross_validate(data: Dataset, penalty=Penalty.MCP, gamma=None, mode=ScaleMode.ADAPTIVE,
                   folds: int = 10, seed: int = 0, nlambda: int = 100,
                   lambda_min_ratio=None, config: FitConfig = FitConfig(),
                   loss: str | None = None, solver: str = "cd") -> SelectionReport:
    """k-fold cross-validation over a lambda grid fixed on the full data.

    Binomial folds are stratified by class. The error is mean squared
    prediction error (Gaussian) or misclassification rate at probability
    0.5 (binomial; ``loss="deviance"`` is also accepted). ``cv_error`` is
    the mean loss over all held-out observations, ``cv_se`` its standard
    error. Grid points that a fold's path never reached (saturation stop)
    get ``nan`` and are never chosen. The full-data path is kept on the
    report as ``path``.
    """
    k = int(folds)
    n = data.n
    if k < 2:
        raise ValueError("folds must be >= 2")
    if n < 2 * k and k != n:
        raise ValueError(f"n={n} is too small for {k} folds (need n >= 2k)")
    binomial = data.family is Family.BINOMIAL
    if loss is None:
        loss = "misclassification" if binomial else "mse"
    if loss not in (("misclassification", "deviance") if binomial else ("mse",)):
        raise ValueError(f"loss {loss!r} not available for {data.family.value} data")

    full = fit_path(data, penalty, gamma, mode, config, nlambda, lambda_min_ratio,
                    solver=solver)
    grid = path_grid(standardize(data), nlambda, lambda_min_ratio).values
    assign = fold_assignment(data.y, k, seed, stratify=binomial)
    E = np.full((n, len(grid)), np.nan)
    for f in range(k):
        test = assign == f
        train = data.subset(~test)
        fold_path = fit_path(train, penalty, gamma, mode, config, lambdas=grid, solver=solver)
        eta = fold_path.predict_eta(data.X[test])
        E[test, : eta.shape[1]] = _losses(data.family, data.y[test], eta, loss)
    cv_error = E.mean(axis=0)
    cv_se = E.std(axis=0, ddof=1) / np.sqrt(n)
    aic, bic = information_criteria(full, data)
    K = len(full)
    pad = np.full(len(grid) - K, np.nan)
    aic, bic = np.concatenate([aic, pad]), np.concatenate([bic, pad])
    df = np.concatenate([path_df(full), np.full(len(grid) - K, -1)])
    chosen = {
        "cv": float(grid[_argmin_finite(cv_error)]),
        "aic": float(grid[_argmin_finite(aic)]),
        "bic": float(grid[_argmin_finite(bic)]),
    }
    return SelectionReport(
        lambdas=grid, df=df, aic=aic, bic=bic, cv_error=cv_error, cv_se=cv_se,
        folds=k, seed=int(seed), fold_assignment=assign, chosen=chosen, loss=loss,
        path=full,
    )


@dataclass
class GammaSummary:
    gamma: float
    chosen_lambda: float
    chosen_df: int
    lambda_star: float | None
    inside_convex_region: bool
    advice: str


def gamma_guidance(data: Dataset, penalty=Penalty.MCP, gammas=(1.5, 3.0, 6.0, 20.0),
                   mode=ScaleMode.ADAPTIVE, criterion: str = "bic",
                   ratio: float = GUIDANCE_RATIO, nlambda: int = 100,
                   lambda_min_ratio=None, config: FitConfig = FitConfig()):
    """For each gamma: pick lambda by AIC/BIC and relate it to lambda_star.

    Advice is ``"increase gamma"`` when the choice sits at or below
    lambda_star, ``"may decrease gamma"`` when it is at least ``ratio``
    times lambda_star, and ``"ok"`` otherwise (including when the path is
    locally convex throughout).
    """
    gammas = list(gammas)
    if not gammas:
        raise ValueError("need at least one gamma")
    if criterion not in ("aic", "bic"):
        raise ValueError("criterion must be 'aic' or 'bic'")
    design = standardize(data)
    out = []
    for g in gammas:
        path = fit_path(design, penalty, g, mode, config, nlambda, lambda_min_ratio)
        aic, bic = information_criteria(path, data)
        k = _argmin_finite(bic if criterion == "bic" else aic)
        lam = float(path.lambdas[k])
        report = diagnose_path(path, design)
        star = report.lambda_star
        if star is None:
            inside, advice = True, "ok"
        elif lam <= star:
            inside, advice = False, "increase gamma"
        else:
            inside = True
            advice = "may decrease gamma" if lam >= ratio * star else "ok"
        out.append(GammaSummary(float(g), lam, int(path_df(path)[k]), star, inside, advice))
    return out

"""Lambda grids and warm-started regularization paths."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .cd_linear import FitConfig, FitResult, fit_linear
from .cd_logistic import ScaleMode, fit_logistic, null_intercept
from .design import (CoefficientVector, Dataset, Family, Scale, StandardizedDesign,
                     standardize, unstandardize)
from .penalties import Penalty, PenaltySpec

LAMBDA_MAX_INFLATION = 1e-9
SATURATION_PROB = 1e-4
SATURATION_FRACTION = 0.99
SATURATION_DEVIANCE_RATIO = 0.01


class DegenerateProblemError(ValueError):
    """lambda_max is zero: the response is orthogonal to every covariate."""


@dataclass(frozen=True)
class LambdaGrid:
    values: np.ndarray
    lambda_max: float
    lambda_min_ratio: float

    @property
    def count(self) -> int:
        return len(self.values)


@dataclass
class PathResult:
    """A fitted regularization path.

    Coefficients are stored on the original covariate scale (``intercepts``
    and ``betas``) and on the standardized scale (``std_betas``, which
    includes the intercept column first for binomial fits). Points past a
    saturation stop are absent; ``truncated`` says whether that happened.
    ``min_denominator`` records, for logistic fits, the smallest
    coordinate-update denominator met at each grid point (``nan`` for
    linear fits).
    """

    grid: LambdaGrid
    family: Family
    penalty: Penalty
    gamma: float
    mode: ScaleMode | None
    solver: str
    intercepts: np.ndarray
    betas: np.ndarray
    std_betas: np.ndarray
    iterations: np.ndarray
    objective: np.ndarray
    converged: np.ndarray
    status: list = field(default_factory=list)
    truncated: bool = False
    min_denominator: np.ndarray | None = None

    @property
    def lambdas(self) -> np.ndarray:
        return self.grid.values[: len(self.intercepts)]

    def __len__(self):
        return len(self.intercepts)

    def coef(self, k: int) -> CoefficientVector:
        return CoefficientVector(self.intercepts[k], self.betas[k], Scale.ORIGINAL)

    @property
    def coefs(self) -> list[CoefficientVector]:
        return [self.coef(k) for k in range(len(self))]

    def active_sets(self) -> list[np.ndarray]:
        return [np.flatnonzero(b) for b in self.betas]

    def predict_eta(self, X) -> np.ndarray:
        """Linear predictors, one column per fitted lambda."""
        return np.asarray(X, dtype=float) @ self.betas.T + self.intercepts


def lambda_max(design: StandardizedDesign) -> float:
    """Smallest lambda at which every penalized coefficient is zero."""
    n = design.n
    if design.family is Family.GAUSSIAN:
        z = design.Xs.T @ design.ys / n
    else:
        ybar = float(np.mean(design.ys))
        z = design.penalized.T @ (design.ys - ybar) / n
    return float(np.max(np.abs(z)))


def make_grid(lambda_max: float, lambda_min_ratio: float, count: int) -> LambdaGrid:
    """Log-equispaced grid from ``lambda_max`` down to ``lambda_max * ratio``."""
    if not lambda_max > 0:
        raise DegenerateProblemError(
            "lambda_max is 0: the response is orthogonal to every covariate")
    if not 0 < lambda_min_ratio < 1:
        raise ValueError("lambda_min_ratio must lie in (0, 1)")
    if int(count) < 2:
        raise ValueError("grid needs at least 2 values")
    logs = np.linspace(np.log(lambda_max), np.log(lambda_max * lambda_min_ratio), int(count))
    values = np.exp(logs)
    values[0] = lambda_max
    values.setflags(write=False)
    return LambdaGrid(values, float(lambda_max), float(lambda_min_ratio))


def default_lambda_min_ratio(n: int, p: int) -> float:
    return 0.001 if n > p else 0.05


def path_grid(design: StandardizedDesign, nlambda: int = 100,
              lambda_min_ratio: float | None = None) -> LambdaGrid:
    if lambda_min_ratio is None:
        lambda_min_ratio = default_lambda_min_ratio(design.n, design.p)
    lmax = lambda_max(design) * (1.0 + LAMBDA_MAX_INFLATION)
    return make_grid(lmax, lambda_min_ratio, nlambda)


def _saturated(design: StandardizedDesign, beta: np.ndarray) -> bool:
    eta = design.Xs @ beta
    pi = expit(eta)
    extreme = (pi < SATURATION_PROB) | (pi > 1 - SATURATION_PROB)
    y = design.ys
    ybar = float(np.mean(y))
    null_dev = -np.sum(y * np.log(ybar) + (1 - y) * np.log(1 - ybar))
    dev = np.sum(np.logaddexp(0.0, eta) - y * eta)
    active = np.count_nonzero(beta[1:])
    # with p < n a full active set is an ordinary fit, not saturation
    too_many = design.p >= design.n and active >= design.n
    return (extreme.mean() >= SATURATION_FRACTION or too_many
            or dev < SATURATION_DEVIANCE_RATIO * null_dev)


def fit_path(data: Dataset | StandardizedDesign, penalty=Penalty.MCP, gamma: float | None = None,
             mode=ScaleMode.ADAPTIVE, config: FitConfig = FitConfig(),
             nlambda: int = 100, lambda_min_ratio: float | None = None,
             lambdas=None, init=None, solver: str = "cd", lla_config=None) -> PathResult:
    """Fit a whole path from lambda_max downward with warm starts.

    Parameters
    ----------
    data : Dataset or StandardizedDesign
    penalty : Penalty or str
    gamma : float, optional
        Shape parameter; family default when omitted.
    mode : ScaleMode
        Binomial only.
    lambdas : array, optional
        Explicit decreasing grid; overrides ``nlambda``/``lambda_min_ratio``.
    init : array, optional
        Standardized starting coefficients for the first grid point
        (length p, or p + 1 with the intercept first for binomial data).
        Defaults to zero slopes (and the null intercept).
    solver : {"cd", "lla"}
    """
    from .lla import LlaConfig, lla_fit

    design = data if isinstance(data, StandardizedDesign) else standardize(data)
    spec0 = PenaltySpec(penalty, 0.0, gamma)
    binomial = design.family is Family.BINOMIAL
    mode = ScaleMode(mode) if binomial else None
    if solver not in ("cd", "lla"):
        raise ValueError(f"unknown solver {solver!r}")
    if solver == "lla":
        if binomial:
            raise ValueError("the LLA solver supports Gaussian models only")
        if spec0.family is Penalty.LASSO:
            solver = "cd"
        lla_config = lla_config or LlaConfig(outer_tol=config.tol)

    if lambdas is None:
        grid = path_grid(design, nlambda, lambda_min_ratio)
    else:
        values = np.array(lambdas, dtype=float)
        if values.ndim != 1 or len(values) < 1 or np.any(np.diff(values) >= 0) or np.any(values <= 0):
            raise ValueError("lambdas must be a strictly decreasing sequence of positive values")
        values.setflags(write=False)
        ratio = float(values[-1] / values[0]) if len(values) > 1 else 0.5
        grid = LambdaGrid(values, float(values[0]), min(ratio, 0.5))

    p1 = design.Xs.shape[1]
    if init is None:
        start = np.zeros(p1)
        if binomial:
            start[0] = null_intercept(design)
    else:
        start = np.array(init, dtype=float)
        if binomial and start.shape == (p1 - 1,):
            start = np.concatenate([[null_intercept(design)], start])
        if start.shape != (p1,):
            raise ValueError(f"init must have length {p1}")
    current = CoefficientVector(start[0] if binomial else 0.0,
                                start[1:] if binomial else start, Scale.STANDARDIZED)

    rows, results, statuses = [], [], []
    truncated = False
    for lam in grid.values:
        spec = spec0.with_lambda(lam)
        if binomial:
            res: FitResult = fit_logistic(design, spec, mode, current, config)
        elif solver == "lla":
            res = lla_fit(design, spec, current, lla_config)
        else:
            res = fit_linear(design, spec, current, config)
        current = res.coefs
        results.append(res)
        statuses.append(res.status)
        full = np.concatenate([[current.intercept], current.betas]) if binomial else current.betas
        rows.append(full)
        if binomial and _saturated(design, full):
            truncated = len(rows) < grid.count
            if truncated:
                statuses[-1] = "saturated"
            break

    std = np.array(rows)
    K = len(rows)
    intercepts = np.empty(K)
    betas = np.empty((K, design.p))
    for k, res in enumerate(results):
        orig = unstandardize(res.coefs, design)
        intercepts[k] = orig.intercept
        betas[k] = orig.betas
    return PathResult(
        grid=grid,
        family=design.family,
        penalty=spec0.family,
        gamma=spec0.gamma,
        mode=mode,
        solver=solver,
        intercepts=intercepts,
        betas=betas,
        std_betas=std,
        iterations=np.array([r.iterations for r in results], dtype=int),
        objective=np.array([r.objective for r in results]),
        converged=np.array([r.converged for r in results], dtype=bool),
        status=statuses,
        truncated=truncated,
        min_denominator=np.array([r.min_denominator for r in results]),
    )

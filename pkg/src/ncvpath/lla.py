"""Local linear approximation (LLA) baseline for MCP/SCAD least squares.

Each outer iteration linearizes the concave penalty at the current
coefficients, giving per-coordinate lasso weights ``p'(|beta_j|)``, and
solves the resulting weighted lasso. The inner solver is coordinate
descent on the weighted lasso, warm-started from the current iterate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .cd_linear import FitResult, linear_objective
from .design import CoefficientVector, Scale, StandardizedDesign
from .penalties import Penalty, PenaltySpec

MAJORIZATION_TOL = 1e-10


@dataclass(frozen=True)
class LlaConfig:
    """Outer and inner (weighted lasso) stopping rules.

    ``inner_tol`` defaults to a tenth of ``outer_tol`` so the outer change
    test is not dominated by inner-solve error.
    """

    outer_tol: float = 1e-7
    outer_max_iter: int = 1000
    inner_tol: float | None = None
    inner_max_iter: int = 10000

    def __post_init__(self):
        if self.inner_tol is None:
            object.__setattr__(self, "inner_tol", self.outer_tol / 10)
        if not (self.inner_tol > 0 and self.outer_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.inner_max_iter < 1 or self.outer_max_iter < 1:
            raise ValueError("iteration caps must be >= 1")


def lla_weights(spec: PenaltySpec, beta) -> np.ndarray:
    """Linearized penalty weights; a zero coefficient gets weight lambda."""
    beta = np.ascontiguousarray(beta, dtype=float)
    out = np.empty_like(beta)
    K.lla_weights(beta, *spec._args, out)
    return out


def weighted_lasso(design: StandardizedDesign, weights, init=None,
                   tol: float = 1e-7, max_iter: int = 10000):
    """Solve ``min 0.5/n ||y - X b||^2 + sum_j weights_j |b_j|`` by CD.

    Returns ``(beta, cycles, converged)``.
    """
    X = design.Xs
    beta = np.zeros(X.shape[1]) if init is None else np.array(init, dtype=float)
    r = np.ascontiguousarray(design.ys - X @ beta)
    it, ok = K.weighted_lasso_cd(X, beta, r, np.asarray(weights, dtype=float),
                                 float(tol), int(max_iter))
    return beta, int(it), bool(ok)


def lla_fit(design: StandardizedDesign, spec: PenaltySpec,
            init: CoefficientVector | None = None, config: LlaConfig = LlaConfig()) -> FitResult:
    """Minimize the MCP/SCAD least-squares objective by LLA.

    ``objective_trace`` holds the true objective after each outer step. The
    linearized penalty majorizes the concave penalty, so the trace must not
    increase; a rise beyond 1e-10 (relative) stops with status
    ``"objective_increase"``. ``iterations`` counts outer steps.
    """
    if design.has_intercept_column:
        raise ValueError("lla_fit supports Gaussian designs only")
    p = design.Xs.shape[1]
    beta = np.zeros(p) if init is None else np.array(init.betas, dtype=float)
    r = np.ascontiguousarray(design.ys - design.Xs @ beta)
    if spec.family is Penalty.LASSO:
        it, ok = K.weighted_lasso_cd(design.Xs, beta, r, np.full(p, spec.lam),
                                     float(config.inner_tol), int(config.inner_max_iter))
        obj = linear_objective(design, spec, beta)
        return FitResult(CoefficientVector(0.0, beta, Scale.STANDARDIZED), int(it), obj, bool(ok),
                         "converged" if ok else "max_iter", np.array([obj]))
    trace = np.empty(int(config.outer_max_iter) + 1)
    it, status = K.lla_cd(design.Xs, beta, r, *spec._args,
                          float(config.inner_tol), int(config.inner_max_iter),
                          float(config.outer_tol), int(config.outer_max_iter),
                          MAJORIZATION_TOL, trace)
    label = {K.OK: "converged", K.NOT_CONVERGED: "max_iter",
             K.OBJECTIVE_INCREASE: "objective_increase"}[status]
    return FitResult(
        coefs=CoefficientVector(0.0, beta, Scale.STANDARDIZED),
        iterations=int(it),
        objective=float(linear_objective(design, spec, beta)),
        converged=status == K.OK,
        status=label,
        objective_trace=trace[: it + 1].copy(),
    )


def lla_fit_path(data, penalty=Penalty.MCP, gamma=None, config: LlaConfig = LlaConfig(),
                 **kwargs):
    """``fit_path`` with LLA as the per-lambda solver."""
    from .path import fit_path

    return fit_path(data, penalty, gamma, solver="lla", lla_config=config, **kwargs)

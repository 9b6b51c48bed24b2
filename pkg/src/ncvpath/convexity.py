"""Local convexity diagnostics along a fitted path.

At each grid point the augmented set U(lambda) is the union of the active
sets at this and the next (smaller) grid value. ``c_star`` is the smallest
eigenvalue of the Gram matrix restricted to U (weighted and shifted by the
penalty curvature for logistic fits). Scanning down from lambda_max, the
first grid point failing the convexity condition is reported as
``lambda_star`` together with the last passing value above it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .cd_logistic import ScaleMode
from .design import Family, StandardizedDesign
from .penalties import Penalty


def min_eigenvalue(M) -> float:
    """Smallest eigenvalue of a symmetric matrix; +inf for an empty matrix."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return float("inf")
    M = 0.5 * (M + M.T)
    return float(np.linalg.eigvalsh(M)[0])


def convexity_bound(penalty: Penalty, gamma: float) -> float:
    """Smallest ``c_star`` for which the linear-model objective is convex."""
    if penalty is Penalty.MCP:
        return 1.0 / gamma
    if penalty is Penalty.SCAD:
        return 1.0 / (gamma - 1.0)
    return 0.0


@dataclass
class ConvexityReport:
    lambdas: np.ndarray
    active: list
    augmented: list
    c_star: np.ndarray
    locally_convex: np.ndarray
    lambda_star: float | None
    lambda_star_upper: float | None
    lambda_star_inf: float | None
    family: Family
    penalty: Penalty
    gamma: float

    @property
    def nonmonotone(self) -> bool:
        """Convex and nonconvex grid points interleave below lambda_star."""
        if self.lambda_star is None:
            return False
        k = int(np.argmax(~self.locally_convex))
        return bool(self.locally_convex[k:].any())

    def rows(self):
        for k, lam in enumerate(self.lambdas):
            yield {
                "lambda": float(lam),
                "active_size": len(self.active[k]),
                "augmented_size": len(self.augmented[k]),
                "c_star": float(self.c_star[k]),
                "locally_convex": bool(self.locally_convex[k]),
            }


def _curvature_matrix(design: StandardizedDesign, cols, std_beta, penalty, gamma, mode):
    n = design.n
    if design.family is Family.GAUSSIAN:
        XU = design.Xs[:, cols]
        return XU.T @ XU / n
    # intercept column always participates, unpenalized
    idx = np.concatenate([[0], np.asarray(cols, dtype=int) + 1])
    XU = design.Xs[:, idx]
    w = expit(design.Xs @ std_beta)
    w = w * (1.0 - w)
    M = (XU * w[:, None]).T @ XU / n
    shift = convexity_bound(penalty, gamma)
    d = np.full(len(idx), shift)
    if mode is ScaleMode.ADAPTIVE:
        d = np.diag(M) * shift
    d[0] = 0.0
    return M - np.diag(d)


def _is_convex(c, family, penalty, gamma):
    if family is Family.BINOMIAL:
        return c > 0
    if penalty is Penalty.LASSO:
        return True
    if np.isinf(c):
        return True
    if not c > 0:
        return False
    if penalty is Penalty.MCP:
        return gamma > 1.0 / c
    return gamma > 1.0 + 1.0 / c


def diagnose_path(path, design: StandardizedDesign) -> ConvexityReport:
    """Compute ``c_star`` and local convexity at every grid point of ``path``."""
    K = len(path)
    active = [np.flatnonzero(b) for b in path.betas]
    augmented = [np.union1d(active[k], active[k + 1]) if k + 1 < K else active[k]
                 for k in range(K)]
    c_star = np.empty(K)
    convex = np.empty(K, dtype=bool)
    for k in range(K):
        M = _curvature_matrix(design, augmented[k], path.std_betas[k],
                              path.penalty, path.gamma, path.mode)
        c_star[k] = min_eigenvalue(M)
        convex[k] = _is_convex(c_star[k], design.family, path.penalty, path.gamma)
    lambdas = np.array(path.lambdas)
    lambda_star = upper = inf = None
    if not convex.all():
        k = int(np.argmax(~convex))
        lambda_star = float(lambdas[k])
        upper = float(lambdas[k - 1]) if k > 0 else None
        passing = np.flatnonzero(convex)
        inf = float(lambdas[passing[-1]]) if len(passing) else None
    return ConvexityReport(
        lambdas=lambdas, active=active, augmented=augmented, c_star=c_star,
        locally_convex=convex, lambda_star=lambda_star, lambda_star_upper=upper,
        lambda_star_inf=inf, family=design.family, penalty=path.penalty, gamma=path.gamma,
    )

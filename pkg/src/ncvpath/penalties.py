"""Lasso, MCP and SCAD penalties and their closed-form coordinate solutions.

All functions take scalars. Vectorised use goes through the compiled
kernels in :mod:`ncvpath._kernels`, which share the same formulas.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _kernels as K

DEFAULT_GAMMA = {"mcp": 3.0, "scad": 3.7}


class Penalty(enum.Enum):
    LASSO = "lasso"
    MCP = "mcp"
    SCAD = "scad"

    @property
    def code(self) -> int:
        return {Penalty.LASSO: K.LASSO, Penalty.MCP: K.MCP, Penalty.SCAD: K.SCAD}[self]


class NonconvexUpdateError(ValueError):
    """A fixed-scale coordinate subproblem is not convex.

    Raised when the shape parameter is too small for the coordinate's
    curvature (MCP needs gamma > 1/v, SCAD needs gamma > 1 + 1/v). The
    univariate objective then has no stable minimizer.
    """

    def __init__(self, penalty, gamma, v, column=None):
        self.penalty = penalty
        self.gamma = gamma
        self.v = v
        self.column = column
        bound = 1.0 / v if penalty is Penalty.MCP else 1.0 + 1.0 / v
        where = "" if column is None else f" (column {column})"
        super().__init__(
            f"fixed-scale {penalty.value.upper()} update is nonconvex{where}: "
            f"gamma={gamma:g} must exceed {bound:g} for curvature v={v:g}"
        )


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family with regularization level ``lam`` and shape ``gamma``.

    ``gamma`` defaults to 3 for MCP and 3.7 for SCAD and is ignored for
    the lasso.
    """

    family: Penalty
    lam: float
    gamma: float | None = None

    def __post_init__(self):
        family = Penalty(self.family)
        object.__setattr__(self, "family", family)
        gamma = self.gamma
        if gamma is None:
            gamma = DEFAULT_GAMMA.get(family.value, math.inf)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "gamma", float(gamma))
        if not self.lam >= 0 or not math.isfinite(self.lam):
            raise ValueError(f"lambda must be a finite value >= 0, got {self.lam}")
        if family is Penalty.MCP and not self.gamma > 1:
            raise ValueError(f"MCP requires gamma > 1, got {self.gamma}")
        if family is Penalty.SCAD and not self.gamma > 2:
            raise ValueError(f"SCAD requires gamma > 2, got {self.gamma}")

    def with_lambda(self, lam: float) -> "PenaltySpec":
        return PenaltySpec(self.family, lam, self.gamma)

    @property
    def _args(self):
        # the lasso kernels never read gamma; pass a finite placeholder
        gamma = self.gamma if math.isfinite(self.gamma) else 1.0
        return self.lam, gamma, self.family.code


def soft_threshold(z: float, lam: float) -> float:
    """Soft-thresholding operator S(z, lam)."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return K.soft(float(z), float(lam))


def penalty_value(spec: PenaltySpec, theta: float) -> float:
    if theta < 0:
        raise ValueError(f"penalty is defined on theta >= 0, got {theta}")
    return K.pen_value(float(theta), *spec._args)


def penalty_derivative(spec: PenaltySpec, theta: float) -> float:
    """Rate of penalization p'(theta) for theta > 0.

    The penalties are not differentiable at zero; the thresholding
    operators handle that point.
    """
    if not theta > 0:
        raise ValueError(f"penalty derivative requires theta > 0, got {theta}")
    return K.pen_derivative(float(theta), *spec._args)


def univariate_solution(spec: PenaltySpec, z: float) -> float:
    """Global minimizer of ``0.5*(z - b)**2 + p(|b|)``.

    Soft thresholding for the lasso, firm thresholding for MCP and the
    three-piece SCAD rule.
    """
    return K.univariate(float(z), *spec._args)


def weighted_update(spec: PenaltySpec, z: float, v: float) -> float:
    """Fixed-scale minimizer of ``0.5*v*b**2 - z*b + p(|b|)``.

    Parameters
    ----------
    spec : PenaltySpec
    z : float
        Weighted score ``n^-1 x_j' W r + v b_j``.
    v : float
        Coordinate curvature ``n^-1 x_j' W x_j``, positive.

    Raises
    ------
    NonconvexUpdateError
        If gamma <= 1/v (MCP) or gamma <= 1 + 1/v (SCAD).
    """
    if not v > 0:
        raise ValueError(f"v must be positive, got {v}")
    lam, gamma, code = spec._args
    if not K.weighted_valid(float(v), gamma, code):
        raise NonconvexUpdateError(spec.family, spec.gamma, v)
    return K.weighted(float(z), float(v), lam, gamma, code)


def adaptive_rescaled_update(spec: PenaltySpec, z: float, v: float) -> float:
    """Adaptively rescaled update ``f(z, lam, gamma) / v``.

    For MCP this coincides with the fixed-scale update using shape
    ``gamma / v``; for SCAD it is taken as the definition.
    """
    if not v > 0:
        raise ValueError(f"v must be positive, got {v}")
    return K.univariate(float(z), *spec._args) / v


def penalty_total(spec: PenaltySpec, beta) -> float:
    """Sum of the penalty over the entries of ``beta``."""
    return sum(penalty_value(spec, abs(float(b))) for b in beta)

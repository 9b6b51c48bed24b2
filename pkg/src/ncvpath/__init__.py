"""Coordinate descent paths for MCP-, SCAD- and lasso-penalized regression."""

from .cd_linear import FitConfig, FitResult, fit_linear
from .cd_logistic import ScaleMode, fit_logistic
from .design import CoefficientVector, Dataset, Family, standardize, unstandardize
from .path import PathResult, fit_path, lambda_max, make_grid
from .penalties import NonconvexUpdateError, Penalty, PenaltySpec

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector", "Dataset", "Family", "FitConfig", "FitResult",
    "NonconvexUpdateError", "PathResult", "Penalty", "PenaltySpec", "ScaleMode",
    "fit_linear", "fit_logistic", "fit_path", "lambda_max", "make_grid",
    "standardize", "unstandardize",
]

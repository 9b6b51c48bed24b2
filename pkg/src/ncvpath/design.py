"""Datasets, standardization and back-transformation of coefficients."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field

import numpy as np


class Family(enum.Enum):
    GAUSSIAN = "gaussian"
    BINOMIAL = "binomial"


class Scale(enum.Enum):
    STANDARDIZED = "standardized"
    ORIGINAL = "original"


class DataError(ValueError):
    """Input data violates a dataset requirement."""


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Covariates ``X`` (n x p) and response ``y`` on the original scale."""

    X: np.ndarray
    y: np.ndarray
    family: Family = Family.GAUSSIAN
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        family = Family(self.family)
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2:
            raise DataError("X must be a 2-d array")
        n, p = X.shape
        if y.shape != (n,):
            raise DataError(f"y must have length {n}, got shape {y.shape}")
        if n < 2 or p < 1:
            raise DataError(f"need n >= 2 and p >= 1, got n={n}, p={p}")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("data contain non-finite values")
        names = self.feature_names
        if names is None:
            names = tuple(f"x{j + 1}" for j in range(p))
        names = tuple(str(s) for s in names)
        if len(names) != p:
            raise DataError("feature_names length does not match X")
        sd = X.std(axis=0)
        for j in np.flatnonzero(~(sd > 0)):
            raise DataError(f"column {names[j]!r} has zero variance")
        if family is Family.BINOMIAL:
            if not np.all((y == 0) | (y == 1)):
                raise DataError("binomial response must be coded 0/1")
            if y.min() == y.max():
                raise DataError("binomial response contains a single class")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def subset(self, rows) -> "Dataset":
        return Dataset(self.X[rows], self.y[rows], self.family, self.feature_names)


@dataclass(frozen=True, eq=False)
class StandardizedDesign:
    """Centered, unit-scale design.

    Every column of ``Xs`` has mean 0 and ``mean(x**2) == 1`` (divisor n).
    For binomial data ``Xs`` carries a leading column of ones for the
    unpenalized intercept and ``ys`` is the 0/1 response; for Gaussian data
    ``ys`` is centered.
    """

    Xs: np.ndarray
    ys: np.ndarray
    column_means: np.ndarray
    column_scales: np.ndarray
    y_mean: float
    family: Family
    has_intercept_column: bool = field(default=False)

    @property
    def n(self) -> int:
        return self.Xs.shape[0]

    @property
    def p(self) -> int:
        return self.column_means.shape[0]

    @property
    def penalized(self) -> np.ndarray:
        """Standardized penalized columns (intercept column dropped)."""
        return self.Xs[:, 1:] if self.has_intercept_column else self.Xs


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    intercept: float
    betas: np.ndarray
    scale: Scale = Scale.ORIGINAL

    def __post_init__(self):
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "betas", _frozen(self.betas))
        object.__setattr__(self, "scale", Scale(self.scale))

    def linear_predictor(self, X) -> np.ndarray:
        return self.intercept + np.asarray(X, dtype=float) @ self.betas


def standardize(data: Dataset) -> StandardizedDesign:
    X = data.X
    n = data.n
    means = X.mean(axis=0)
    centered = X - means
    scales = np.sqrt((centered**2).sum(axis=0) / n)
    Xs = centered / scales
    if data.family is Family.BINOMIAL:
        Xs = np.column_stack([np.ones(n), Xs])
        ys = data.y.copy()
        y_mean = float(data.y.mean())
    else:
        y_mean = float(data.y.mean())
        ys = data.y - y_mean
    return StandardizedDesign(
        Xs=_frozen(np.asfortranarray(Xs)),
        ys=_frozen(ys),
        column_means=_frozen(means),
        column_scales=_frozen(scales),
        y_mean=y_mean,
        family=data.family,
        has_intercept_column=data.family is Family.BINOMIAL,
    )


def unstandardize(coefs: CoefficientVector, design: StandardizedDesign) -> CoefficientVector:
    """Map standardized coefficients back to the original covariate scale.

    For Gaussian fits the standardized intercept is ignored and replaced by
    ``y_mean``; for binomial fits it is the fitted intercept.
    """
    if coefs.scale is not Scale.STANDARDIZED:
        raise ValueError("unstandardize expects standardized coefficients")
    if coefs.betas.shape != (design.p,):
        raise ValueError(f"expected {design.p} coefficients, got {coefs.betas.shape[0]}")
    betas = coefs.betas / design.column_scales
    if design.family is Family.GAUSSIAN:
        base = design.y_mean
    else:
        base = coefs.intercept
    intercept = base - float(betas @ design.column_means)
    return CoefficientVector(intercept, betas, Scale.ORIGINAL)


def read_csv(path, response: str, family=Family.GAUSSIAN) -> Dataset:
    """Load a header-row CSV; ``response`` names the outcome column.

    Every other column is a covariate and must parse as a finite real.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if response not in header:
        raise DataError(f"response column {response!r} not found in {path}")
    width = len(header)
    values = np.empty((len(rows), width))
    for i, row in enumerate(rows, start=2):
        if len(row) != width:
            raise DataError(f"{path}:{i}: expected {width} fields, got {len(row)}")
        for k, cell in enumerate(row):
            try:
                values[i - 2, k] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}:{i}: column {header[k]!r} value {cell!r} is not numeric"
                ) from None
    if not np.all(np.isfinite(values)):
        raise DataError(f"{path}: non-finite values are not allowed")
    k = header.index(response)
    cols = [c for c in range(width) if c != k]
    return Dataset(values[:, cols], values[:, k], family, tuple(header[c] for c in cols))


def write_csv(path, data: Dataset, response: str = "y") -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*data.feature_names, response])
        for xrow, yi in zip(data.X, data.y):
            writer.writerow([repr(float(v)) for v in xrow] + [repr(float(yi))])

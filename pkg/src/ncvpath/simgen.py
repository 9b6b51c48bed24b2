"""Seeded synthetic datasets for the simulation settings.

Randomness comes from numpy's PCG64 generator. A seed is expanded with
``SeedSequence(seed).spawn(3)`` into independent streams for the design,
the coefficients and the response, so changing ``n`` does not reshuffle
the coefficient draw. Replicate ``i`` of a study seeded with ``s`` uses
``replicate_seeds(s, reps)[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .design import Dataset, Family


@dataclass(frozen=True)
class FourSpike:
    """Coefficients (+s, +s, -s, -s) on the first four covariates."""

    s: float = 1.0
    count: int = 4


@dataclass(frozen=True)
class SparseExp:
    """``count`` exponential(rate) magnitudes with random signs and positions."""

    count: int = 5
    rate: float = 3.0


@dataclass(frozen=True)
class DenseNormal:
    """``count`` N(0, sd^2) coefficients at random positions."""

    count: int = 100
    sd: float = 3.0


@dataclass(frozen=True)
class SimSpec:
    n: int
    p: int
    signal: FourSpike | SparseExp | DenseNormal = FourSpike()
    rho: float = 0.0
    family: Family = Family.GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be >= 1")
        if not 0 <= self.rho < 1:
            raise ValueError("rho must lie in [0, 1)")
        if self.signal.count > self.p:
            raise ValueError(f"signal needs {self.signal.count} covariates but p={self.p}")


def replicate_seeds(seed: int, reps: int) -> list[int]:
    """Independent 32-bit seeds for ``reps`` replicates of a study."""
    children = np.random.SeedSequence(seed).spawn(reps)
    return [int(c.generate_state(1)[0]) for c in children]


def design_matrix(n, p, rho, rng) -> np.ndarray:
    """Standard normal columns with pairwise correlation ``rho`` (shared factor)."""
    Z = rng.standard_normal((n, p))
    if rho == 0:
        return Z
    z0 = rng.standard_normal((n, 1))
    return np.sqrt(rho) * z0 + np.sqrt(1.0 - rho) * Z


def coefficients(signal, p, rng) -> np.ndarray:
    beta = np.zeros(p)
    if isinstance(signal, FourSpike):
        beta[:4] = [signal.s, signal.s, -signal.s, -signal.s]
        return beta
    pos = rng.choice(p, size=signal.count, replace=False)
    if isinstance(signal, SparseExp):
        mag = rng.exponential(1.0 / signal.rate, size=signal.count)
        sign = rng.choice([-1.0, 1.0], size=signal.count)
        beta[pos] = sign * mag
    else:
        beta[pos] = rng.normal(0.0, signal.sd, size=signal.count)
    return beta


def generate(spec: SimSpec, X=None):
    """Draw a dataset; returns ``(Dataset, true_beta)``.

    Passing ``X`` holds the design fixed across replicates (only the
    coefficients and response are redrawn).
    """
    s_design, s_coef, s_resp = np.random.SeedSequence(spec.seed).spawn(3)
    if X is None:
        X = design_matrix(spec.n, spec.p, spec.rho, np.random.default_rng(s_design))
    else:
        X = np.asarray(X, dtype=float)
        if X.shape != (spec.n, spec.p):
            raise ValueError("fixed design has the wrong shape")
    beta = coefficients(spec.signal, spec.p, np.random.default_rng(s_coef))
    eta = X @ beta
    rng = np.random.default_rng(s_resp)
    if spec.family is Family.GAUSSIAN:
        y = eta + rng.standard_normal(spec.n)
    else:
        y = (rng.random(spec.n) < expit(eta)).astype(float)
    return Dataset(X, y, spec.family), beta

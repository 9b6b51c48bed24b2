import json
import pathlib

import numpy as np
import pytest

from ncvpath.design import Dataset, standardize

ORACLES = json.loads((pathlib.Path(__file__).parent / "oracles" / "oracles.json").read_text())


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


def linear_problem(n, p, seed, rho=0.0, k=4, noise=1.0):
    """Gaussian design (optionally equicorrelated) with k unit-size signals."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if rho:
        X = np.sqrt(rho) * rng.standard_normal((n, 1)) + np.sqrt(1 - rho) * X
    beta = np.zeros(p)
    k = min(k, p)
    beta[:k] = [1.0, -1.0, 0.5, -0.5][:k] if k <= 4 else rng.normal(size=k)
    y = X @ beta + noise * rng.standard_normal(n)
    return Dataset(X, y, "gaussian")


@pytest.fixture
def small_design():
    return standardize(linear_problem(60, 8, seed=11))


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion.

    Call ``criterion(k, ok, detail)``; the line is printed immediately and
    repeated in the terminal summary so it is visible without ``-s``.
    """
    def record(k, ok, detail=""):
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _CRITERIA[k] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[k])

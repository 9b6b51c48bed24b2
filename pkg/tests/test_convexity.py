import numpy as np
import pytest
from scipy.special import expit

from conftest import linear_problem
from ncvpath.cd_logistic import ScaleMode
from ncvpath.convexity import convexity_bound, diagnose_path, min_eigenvalue
from ncvpath.design import Dataset, standardize
from ncvpath.path import fit_path


def test_min_eigenvalue_examples():
    assert min_eigenvalue(np.eye(4)) == pytest.approx(1.0)
    assert min_eigenvalue(np.array([[1.0, 0.9], [0.9, 1.0]])) == pytest.approx(0.1, abs=1e-12)
    assert min_eigenvalue(np.zeros((0, 0))) == np.inf
    rng = np.random.default_rng(0)
    A = rng.normal(size=(5, 8))
    assert min_eigenvalue(A.T @ A / 5) <= 1e-10


def test_min_eigenvalue_symmetrizes():
    M = np.array([[2.0, 1.0], [0.0, 2.0]])
    assert min_eigenvalue(M) == pytest.approx(1.5)


def test_bounds():
    assert convexity_bound("mcp" and __import__("ncvpath").Penalty.MCP, 4.0) == 0.25
    assert convexity_bound(__import__("ncvpath").Penalty.SCAD, 3.0) == 0.5


def test_globally_convex_regime_flags_nothing():
    data = linear_problem(100, 10, seed=1, rho=0.5)
    d = standardize(data)
    c = min_eigenvalue(d.Xs.T @ d.Xs / d.n)
    report = diagnose_path(fit_path(d, "mcp", 1.05 / c, nlambda=40), d)
    assert report.locally_convex.all() and report.lambda_star is None


def test_single_orthonormal_column_is_convex():
    rng = np.random.default_rng(2)
    x = rng.normal(size=40)
    data = Dataset(x[:, None], x + rng.normal(size=40), "gaussian")
    report = diagnose_path(fit_path(data, "mcp", 3.0, nlambda=20), standardize(data))
    assert report.lambda_star is None
    assert np.all(report.c_star[1:] == pytest.approx(1.0))


def test_high_dimensional_flags_nonconvex_region():
    data = linear_problem(20, 50, seed=3)
    d = standardize(data)
    report = diagnose_path(fit_path(d, "mcp", 3.0), d)
    assert report.lambda_star is not None
    k = int(np.argmax(~report.locally_convex))
    assert report.lambdas[k] == report.lambda_star
    assert report.locally_convex[:k].all()
    assert report.lambda_star_upper == report.lambdas[k - 1]


def test_augmented_set_is_union_with_next():
    data = linear_problem(40, 15, seed=4)
    d = standardize(data)
    path = fit_path(d, "scad", nlambda=25)
    report = diagnose_path(path, d)
    for k in range(len(path) - 1):
        expected = np.union1d(np.flatnonzero(path.betas[k]), np.flatnonzero(path.betas[k + 1]))
        np.testing.assert_array_equal(report.augmented[k], expected)


def test_logistic_intercept_only_is_convex():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(50, 3))
    y = (rng.random(50) < 0.4).astype(float)
    d = standardize(Dataset(X, y, "binomial"))
    path = fit_path(d, "mcp", 3.0, lambdas=[10.0, 9.0])
    report = diagnose_path(path, d)
    pi = expit(path.std_betas[0][0])
    assert report.c_star[0] == pytest.approx(pi * (1 - pi), rel=1e-10)
    assert report.locally_convex.all()


@pytest.mark.parametrize("mode", [ScaleMode.ADAPTIVE, ScaleMode.FIXED])
def test_logistic_matrix_matches_direct_evaluation(mode):
    rng = np.random.default_rng(6)
    X = rng.normal(size=(120, 4))
    y = (rng.random(120) < expit(X[:, 0] - X[:, 1])).astype(float)
    d = standardize(Dataset(X, y, "binomial"))
    gamma = 20.0
    path = fit_path(d, "mcp", gamma, mode, nlambda=15)
    report = diagnose_path(path, d)
    k = 10
    U = report.augmented[k]
    cols = np.concatenate([[0], U + 1])
    b = path.std_betas[k]
    w = expit(d.Xs @ b) * (1 - expit(d.Xs @ b))
    M = (d.Xs[:, cols] * w[:, None]).T @ d.Xs[:, cols] / d.n
    D = np.full(len(cols), 1 / gamma) if mode is ScaleMode.FIXED else np.diag(M) / gamma
    D[0] = 0
    assert report.c_star[k] == pytest.approx(np.linalg.eigvalsh(M - np.diag(D))[0], abs=1e-12)


def test_column_permutation_invariance():
    data = linear_problem(30, 12, seed=7)
    perm = np.random.default_rng(0).permutation(12)
    a = diagnose_path(fit_path(data, nlambda=30), standardize(data))
    pdata = Dataset(data.X[:, perm], data.y, "gaussian")
    b = diagnose_path(fit_path(pdata, nlambda=30), standardize(pdata))
    np.testing.assert_allclose(a.c_star, b.c_star, atol=1e-10)


def test_rows_and_nonmonotone_flag():
    data = linear_problem(20, 50, seed=8)
    report = diagnose_path(fit_path(data, "mcp", 3.0, nlambda=40), standardize(data))
    rows = list(report.rows())
    assert len(rows) == len(report.lambdas)
    assert set(rows[0]) == {"lambda", "active_size", "augmented_size", "c_star", "locally_convex"}
    k = int(np.argmax(~report.locally_convex))
    assert report.nonmonotone == bool(report.locally_convex[k:].any())

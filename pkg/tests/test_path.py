import numpy as np
import pytest
from scipy.special import expit

from conftest import linear_problem
from ncvpath.cd_linear import FitConfig, fit_linear
from ncvpath.design import (CoefficientVector, Dataset, Family, Scale, StandardizedDesign,
                            standardize)
from ncvpath.path import (DegenerateProblemError, default_lambda_min_ratio, fit_path, lambda_max,
                          make_grid, path_grid)
from ncvpath.penalties import PenaltySpec


def test_lambda_max_hand_example():
    d = StandardizedDesign(np.array([[1.0], [-1.0]], order="F"), np.array([2.0, -2.0]),
                           np.zeros(1), np.ones(1), 0.0, Family.GAUSSIAN, False)
    assert lambda_max(d) == 2.0


def test_lambda_max_binomial_balanced():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(30, 4))
    y = np.array([0.0, 1.0] * 15)
    d = standardize(Dataset(X, y, "binomial"))
    expected = np.max(np.abs(d.penalized.T @ (y - 0.5))) / 30
    assert lambda_max(d) == pytest.approx(expected, rel=1e-14)


def test_make_grid_examples():
    g = make_grid(1.0, 0.01, 3)
    np.testing.assert_allclose(g.values, [1.0, 0.1, 0.01], rtol=1e-14)
    g = make_grid(2.0, 0.05, 100)
    assert g.count == 100 and g.values[0] == 2.0
    assert g.values[-1] == pytest.approx(0.1, rel=1e-13)
    g = make_grid(5.0, 0.001, 100)
    ratios = g.values[1:] / g.values[:-1]
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)
    assert g.values[0] / g.values[-1] == pytest.approx(1000.0, rel=1e-12)


def test_make_grid_errors():
    with pytest.raises(DegenerateProblemError):
        make_grid(0.0, 0.1, 10)
    with pytest.raises(ValueError):
        make_grid(1.0, 1.5, 10)
    with pytest.raises(ValueError):
        make_grid(1.0, 0.1, 1)


def test_default_ratio():
    assert default_lambda_min_ratio(100, 10) == 0.001
    assert default_lambda_min_ratio(20, 50) == 0.05
    assert default_lambda_min_ratio(50, 50) == 0.05


def test_orthogonal_response_is_degenerate():
    X = np.array([[1.0, 2.0], [-1.0, 0.5], [1.0, -1.0], [-1.0, 0.3]])
    y = np.zeros(4)
    with pytest.raises(DegenerateProblemError):
        fit_path(Dataset(X, y + 1.0, "gaussian"))


@pytest.mark.parametrize("fam", ["gaussian", "binomial"])
def test_first_point_is_null(fam):
    rng = np.random.default_rng(2)
    X = rng.normal(size=(50, 6))
    y = X[:, 0] + rng.normal(size=50)
    if fam == "binomial":
        y = (y > 0).astype(float)
    path = fit_path(Dataset(X, y, fam), nlambda=10)
    np.testing.assert_array_equal(path.betas[0], 0.0)
    assert np.count_nonzero(path.betas[1]) >= 1 or fam == "binomial"


def test_lasso_path_matches_reference(oracles):
    o = oracles["lasso_path"]
    rng = np.random.default_rng(o["seed"])
    X = rng.standard_normal((100, 10))
    y = X[:, :3] @ np.array([1.0, -0.5, 0.25]) + rng.standard_normal(100)
    path = fit_path(Dataset(X, y, "gaussian"), "lasso", lambdas=o["lambdas"])
    for k, ref in zip(o["indices"], o["coefs"]):
        np.testing.assert_allclose(path.std_betas[k], ref, atol=1e-4)


def test_huge_gamma_path_is_lasso_path():
    data = linear_problem(100, 20, seed=3)
    a = fit_path(data, "mcp", 1e8, config=FitConfig(tol=1e-10))
    b = fit_path(data, "lasso", config=FitConfig(tol=1e-10))
    assert np.abs(a.betas - b.betas).max() < 1e-6


def test_coefficients_on_original_scale():
    data = linear_problem(80, 5, seed=4)
    X = data.X * np.array([1, 10, 0.1, 3, 7]) + 4.0
    data = Dataset(X, data.y, "gaussian")
    path = fit_path(data, nlambda=20)
    eta = path.predict_eta(X)
    d = standardize(data)
    for k in (0, 10, 19):
        np.testing.assert_allclose(eta[:, k], d.Xs @ path.std_betas[k] + d.y_mean, atol=1e-9)


def test_cold_start_agrees_in_convex_regime():
    data = linear_problem(120, 8, seed=5, rho=0.2)
    d = standardize(data)
    c = np.linalg.eigvalsh(d.Xs.T @ d.Xs / d.n)[0]
    cfg = FitConfig(tol=1e-11)
    path = fit_path(d, "mcp", 1.1 / c, config=cfg, nlambda=30)
    for k in (5, 15, 29):
        cold = fit_linear(d, PenaltySpec("mcp", path.lambdas[k], 1.1 / c), config=cfg)
        np.testing.assert_allclose(cold.coefs.betas, path.std_betas[k], atol=1e-6)


def test_finer_grid_halves_max_jump():
    """Doubling the grid count halves the largest jump, up to the log-grid step ratio.

    On a log-equispaced grid the widest step in lambda shrinks by
    (1 - r**(1/199)) / (1 - r**(1/99)), slightly above one half, and on a
    segment where the path is linear in lambda the jump shrinks by exactly
    that factor.
    """
    data = linear_problem(100, 8, seed=6)
    d = standardize(data)
    c = np.linalg.eigvalsh(d.Xs.T @ d.Xs / d.n)[0]
    ratio = 0.05

    def jump(count):
        path = fit_path(d, "mcp", 1.5 / c, nlambda=count, lambda_min_ratio=ratio,
                        config=FitConfig(tol=1e-12))
        return np.abs(np.diff(path.std_betas, axis=0)).max()

    step_ratio = (1 - ratio ** (1 / 199)) / (1 - ratio ** (1 / 99))
    assert step_ratio == pytest.approx(0.5, abs=0.002)
    assert jump(200) <= step_ratio * jump(100) * (1 + 1e-6)


def test_explicit_grid_validation():
    data = linear_problem(30, 3, seed=7)
    with pytest.raises(ValueError):
        fit_path(data, lambdas=[0.1, 0.2])
    with pytest.raises(ValueError):
        fit_path(data, lambdas=[0.1, -0.2])


def test_init_vector_used_for_first_point():
    data = linear_problem(50, 4, seed=8)
    d = standardize(data)
    lam = path_grid(d, 5).values
    path = fit_path(d, "lasso", lambdas=lam[2:], init=np.ones(4))
    ref = fit_linear(d, PenaltySpec("lasso", lam[2]),
                     CoefficientVector(0.0, np.ones(4), Scale.STANDARDIZED))
    np.testing.assert_allclose(path.std_betas[0], ref.coefs.betas)


def test_logistic_saturation_truncates():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(30, 5))
    y = (X[:, 0] > 0).astype(float)  # perfectly separable
    path = fit_path(Dataset(X, y, "binomial"), "mcp", 3.0)
    assert path.truncated and path.status[-1] == "saturated"
    assert len(path) < 100


def test_binomial_path_predicts_probabilities():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(200, 5))
    y = (rng.random(200) < expit(X[:, 0] - X[:, 1])).astype(float)
    path = fit_path(Dataset(X, y, "binomial"), nlambda=30)
    assert path.std_betas.shape[1] == 6
    assert path.converged.all()
    ybar = y.mean()
    assert path.intercepts[0] == pytest.approx(np.log(ybar / (1 - ybar)), abs=1e-10)


def test_unknown_solver():
    with pytest.raises(ValueError):
        fit_path(linear_problem(20, 3, 0), solver="lars")

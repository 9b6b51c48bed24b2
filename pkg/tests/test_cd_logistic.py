import numpy as np
import pytest
from scipy.special import expit

from ncvpath.cd_linear import FitConfig, fit_linear
from ncvpath.cd_logistic import (PROB_EPS, ScaleMode, fit_logistic, irls_refresh,
                                 logistic_coordinate_update, logistic_objective, null_intercept)
from ncvpath.design import CoefficientVector, Dataset, Scale, standardize
from ncvpath.path import lambda_max
from ncvpath.penalties import NonconvexUpdateError, PenaltySpec


def binomial_design(n=150, p=6, seed=0, signal=1.0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    eta = signal * (X[:, 0] - X[:, 1]) + 0.2
    y = (rng.random(n) < expit(eta)).astype(float)
    return standardize(Dataset(X, y, "binomial"))


def test_null_state():
    d = binomial_design()
    s = irls_refresh(np.zeros(d.p + 1), d)
    np.testing.assert_array_equal(s.pi, 0.5)
    np.testing.assert_array_equal(s.w, 0.25)
    np.testing.assert_allclose(s.v, 0.25, atol=1e-14)
    np.testing.assert_allclose(s.r, (d.ys - 0.5) / 0.25)


def test_clamping_keeps_weights_positive():
    d = binomial_design()
    beta = np.zeros(d.p + 1)
    beta[0] = 60.0
    s = irls_refresh(beta, d)
    assert np.all(s.pi <= 1 - PROB_EPS) and np.all(s.w > 0)
    assert np.all(s.v <= 0.25)


def test_one_step_is_newton_step(oracles):
    o = oracles["newton_step"]
    rng = np.random.default_rng(o["seed"])
    x = rng.standard_normal(60)
    y = (rng.random(60) < expit(0.4 + 1.2 * x)).astype(float)
    d = standardize(Dataset(x[:, None], y, "binomial"))
    s = irls_refresh(np.zeros(2), d)
    spec = PenaltySpec("mcp", 0.0, 3.0)
    for j in range(2):
        logistic_coordinate_update(j, s, d, spec)
    np.testing.assert_allclose(s.beta, o["beta"], atol=1e-12)


def test_balanced_intercept_stays_zero():
    rng = np.random.default_rng(3)
    d = standardize(Dataset(rng.normal(size=(20, 2)), np.array([0.0, 1.0] * 10), "binomial"))
    s = irls_refresh(np.zeros(3), d)
    assert logistic_coordinate_update(0, s, d, PenaltySpec("mcp", 0.1)) == 0.0


def test_fixed_scale_small_gamma_rejected():
    d = binomial_design()
    s = irls_refresh(np.zeros(d.p + 1), d)
    with pytest.raises(NonconvexUpdateError):
        logistic_coordinate_update(1, s, d, PenaltySpec("mcp", 0.01, 3.7), ScaleMode.FIXED)
    with pytest.raises(NonconvexUpdateError):
        fit_logistic(d, PenaltySpec("mcp", 0.01, 3.7), ScaleMode.FIXED)


def test_adaptive_update_example():
    # force w = 1/4 so v_j = 1/4, then place the score at z_j = 0.15
    d = binomial_design(n=40, p=2, seed=5)
    s = irls_refresh(np.zeros(3), d)
    s.w[:] = 0.25
    s.v[:] = 0.25
    x = d.Xs[:, 1]
    s.r = 0.15 * d.n / (0.25 * (x @ x)) * x
    logistic_coordinate_update(1, s, d, PenaltySpec("mcp", 0.1, 3.0), ScaleMode.ADAPTIVE)
    assert s.beta[1] == pytest.approx(0.3, abs=1e-12)


def test_unit_weights_reproduce_linear_update():
    d = binomial_design(seed=6)
    beta = np.zeros(d.p + 1)
    s = irls_refresh(beta, d)
    s.w[:] = 1.0
    s.v = (d.Xs**2).mean(axis=0)
    target = d.ys - d.ys.mean()
    s.r = target.copy()
    spec = PenaltySpec("scad", 0.05)
    for j in range(1, d.p + 1):
        logistic_coordinate_update(j, s, d, spec, ScaleMode.ADAPTIVE)
    from ncvpath.design import StandardizedDesign
    lin = StandardizedDesign(np.asfortranarray(d.Xs[:, 1:]), target, d.column_means,
                             d.column_scales, 0.0, d.family, False)
    ref = fit_linear(lin, spec, config=FitConfig(max_iter=1)).coefs.betas
    np.testing.assert_allclose(s.beta[1:], ref, atol=1e-14)


def test_null_model_at_lambda_max():
    d = binomial_design(seed=7)
    res = fit_logistic(d, PenaltySpec("mcp", lambda_max(d) * (1 + 1e-9)))
    np.testing.assert_array_equal(res.coefs.betas, 0.0)
    ybar = d.ys.mean()
    assert res.coefs.intercept == pytest.approx(np.log(ybar / (1 - ybar)), abs=1e-12)
    assert null_intercept(d) == pytest.approx(np.log(ybar / (1 - ybar)))


def test_lasso_matches_generic_optimizer(oracles):
    o = oracles["logistic_lasso"]
    rng = np.random.default_rng(o["seed"])
    X = rng.standard_normal((200, 5))
    eta = 0.3 + X @ np.array([1.0, -1.0, 0.5, 0.0, 0.0])
    y = (rng.random(200) < expit(eta)).astype(float)
    d = standardize(Dataset(X, y, "binomial"))
    res = fit_logistic(d, PenaltySpec("lasso", o["lambda"]), config=FitConfig(tol=1e-9))
    got = np.concatenate([[res.coefs.intercept], res.coefs.betas])
    np.testing.assert_allclose(got, o["coef"], atol=1e-4)
    assert res.objective <= o["objective"] + 1e-10


@pytest.mark.parametrize("seed", range(5))
def test_fixed_scale_objective_nonincreasing(seed):
    d = binomial_design(seed=seed)
    res = fit_logistic(d, PenaltySpec("mcp", 0.03, 20.0), ScaleMode.FIXED, config=FitConfig(tol=1e-9))
    assert res.status == "converged"
    tr = res.objective_trace
    assert np.all(np.diff(tr) <= 1e-8 * np.abs(tr[:-1]))


def test_adaptive_mcp_is_coordinatewise_minimizer_of_rescaled_objective():
    """Perturbing one slope never lowers the quadratic model with gamma_j = gamma / v_j."""
    d = binomial_design(seed=8, n=300)
    spec = PenaltySpec("mcp", 0.03, 3.0)
    res = fit_logistic(d, spec, config=FitConfig(tol=1e-12))
    beta = np.concatenate([[res.coefs.intercept], res.coefs.betas])
    s = irls_refresh(beta, d)
    n = d.n
    for j in range(1, d.p + 1):
        sj = PenaltySpec("mcp", spec.lam, spec.gamma / s.v[j])
        x = d.Xs[:, j]

        def q(b):
            r = s.r - (b - beta[j]) * x
            pen = sj.lam * abs(b) - b * b / (2 * sj.gamma) if abs(b) <= sj.gamma * sj.lam \
                else 0.5 * sj.gamma * sj.lam**2
            return 0.5 * np.sum(s.w * r * r) / n + pen

        base = q(beta[j])
        for delta in (1e-4, -1e-4):
            assert q(beta[j] + delta) >= base - 1e-10


def test_v_bounded_by_max_weight():
    d = binomial_design(seed=9)
    rng = np.random.default_rng(0)
    for _ in range(10):
        s = irls_refresh(rng.normal(size=d.p + 1), d)
        assert np.all(s.v[1:] <= s.w.max() + 1e-15)
        assert s.w.max() <= 0.25


def test_reports_min_denominator():
    d = binomial_design(seed=10)
    res = fit_logistic(d, PenaltySpec("mcp", 0.05, 3.0))
    assert res.min_denominator > 0
    assert res.objective == pytest.approx(
        logistic_objective(d, PenaltySpec("mcp", 0.05, 3.0),
                           np.concatenate([[res.coefs.intercept], res.coefs.betas])))


def test_init_must_be_standardized():
    d = binomial_design()
    with pytest.raises(ValueError):
        fit_logistic(d, PenaltySpec("mcp", 0.1), init=CoefficientVector(0.0, np.zeros(d.p), Scale.ORIGINAL))

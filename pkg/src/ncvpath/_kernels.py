"""Compiled scalar penalty kernels and coordinate-descent sweeps.

Everything here works on plain floats and contiguous arrays so numba can
compile it; the public modules wrap these with validation and types.
Penalty families are passed as small integer codes.
"""

import math

import numpy as np
from numba import njit

LASSO = 0
MCP = 1
SCAD = 2

# status codes returned by the sweeps
OK = 0
NOT_CONVERGED = 1
NONCONVEX_UPDATE = 2
OBJECTIVE_INCREASE = 3


@njit(cache=True)
def soft(z, lam):
    if z > lam:
        return z - lam
    if z < -lam:
        return z + lam
    return 0.0


@njit(cache=True)
def pen_value(theta, lam, gamma, family):
    if family == LASSO:
        return lam * theta
    if family == MCP:
        if theta <= gamma * lam:
            return lam * theta - theta * theta / (2.0 * gamma)
        return 0.5 * gamma * lam * lam
    # SCAD
    if theta <= lam:
        return lam * theta
    if theta <= gamma * lam:
        return (gamma * lam * theta - 0.5 * (theta * theta + lam * lam)) / (gamma - 1.0)
    return lam * lam * (gamma * gamma - 1.0) / (2.0 * (gamma - 1.0))


@njit(cache=True)
def pen_derivative(theta, lam, gamma, family):
    if family == LASSO:
        return lam
    if family == MCP:
        if theta <= gamma * lam:
            return lam - theta / gamma
        return 0.0
    if theta <= lam:
        return lam
    if theta <= gamma * lam:
        return (gamma * lam - theta) / (gamma - 1.0)
    return 0.0


@njit(cache=True)
def univariate(z, lam, gamma, family):
    """Minimizer of 0.5*(z - b)**2 + p(|b|) on unit-scale data."""
    if family == LASSO:
        return soft(z, lam)
    az = abs(z)
    if family == MCP:
        if az <= gamma * lam:
            return soft(z, lam) / (1.0 - 1.0 / gamma)
        return z
    if az <= 2.0 * lam:
        return soft(z, lam)
    if az <= gamma * lam:
        return soft(z, gamma * lam / (gamma - 1.0)) / (1.0 - 1.0 / (gamma - 1.0))
    return z


@njit(cache=True)
def weighted_valid(v, gamma, family):
    if family == MCP:
        return gamma * v > 1.0
    if family == SCAD:
        return (gamma - 1.0) * v > 1.0
    return True


@njit(cache=True)
def weighted(z, v, lam, gamma, family):
    """Fixed-scale minimizer of 0.5*v*b**2 - z*b + p(|b|).

    Caller checks ``weighted_valid`` first.
    """
    if family == LASSO:
        return soft(z, lam) / v
    az = abs(z)
    if family == MCP:
        if az <= v * gamma * lam:
            return soft(z, lam) / (v - 1.0 / gamma)
        return z / v
    if az <= lam * (v + 1.0):
        return soft(z, lam) / v
    if az <= v * gamma * lam:
        return soft(z, gamma * lam / (gamma - 1.0)) / (v - 1.0 / (gamma - 1.0))
    return z / v


@njit(cache=True)
def weighted_denominator(v, gamma, family, adaptive):
    if family == LASSO:
        return v
    if family == MCP:
        if adaptive:
            return v * (1.0 - 1.0 / gamma)
        return v - 1.0 / gamma
    if adaptive:
        return v * (1.0 - 1.0 / (gamma - 1.0))
    return v - 1.0 / (gamma - 1.0)


@njit(cache=True)
def penalty_sum(beta, start, lam, gamma, family):
    total = 0.0
    for j in range(start, beta.shape[0]):
        total += pen_value(abs(beta[j]), lam, gamma, family)
    return total


@njit(cache=True)
def linear_objective(r, beta, lam, gamma, family):
    n = r.shape[0]
    rss = 0.0
    for i in range(n):
        rss += r[i] * r[i]
    return rss / (2.0 * n) + penalty_sum(beta, 0, lam, gamma, family)


@njit(cache=True, fastmath=True)
def column_dot(X, j, r):
    """``X[:, j] @ r``; reassociation is allowed so the reduction vectorizes."""
    acc = 0.0
    for i in range(X.shape[0]):
        acc += X[i, j] * r[i]
    return acc


@njit(cache=True)
def linear_update(X, r, beta, j, lam, gamma, family):
    """One coordinate step; returns the change in beta[j]."""
    n = X.shape[0]
    z = column_dot(X, j, r) / n + beta[j]
    new = univariate(z, lam, gamma, family)
    delta = new - beta[j]
    if delta != 0.0:
        for i in range(n):
            r[i] -= delta * X[i, j]
        beta[j] = new
    return delta


@njit(cache=True)
def linear_cd(X, beta, r, lam, gamma, family, tol, max_iter, trace):
    """Cyclic CD for least squares. ``beta`` and ``r`` are updated in place.

    ``trace[k]`` receives the objective after cycle k (trace[0] is the start).
    Returns (cycles, converged).
    """
    p = X.shape[1]
    trace[0] = linear_objective(r, beta, lam, gamma, family)
    it = 0
    while it < max_iter:
        it += 1
        max_change = 0.0
        for j in range(p):
            d = abs(linear_update(X, r, beta, j, lam, gamma, family))
            if d > max_change:
                max_change = d
        trace[it] = linear_objective(r, beta, lam, gamma, family)
        if max_change < tol:
            return it, True
    return it, False


@njit(cache=True)
def weighted_lasso_cd(X, beta, r, weights, tol, max_iter):
    """CD for 0.5/n*||y - X b||^2 + sum_j weights[j]*|b_j| (unit-scale columns)."""
    n, p = X.shape
    it = 0
    while it < max_iter:
        it += 1
        max_change = 0.0
        for j in range(p):
            z = column_dot(X, j, r) / n + beta[j]
            new = soft(z, weights[j])
            delta = new - beta[j]
            if delta != 0.0:
                for i in range(n):
                    r[i] -= delta * X[i, j]
                beta[j] = new
                if abs(delta) > max_change:
                    max_change = abs(delta)
        if max_change < tol:
            return it, True
    return it, False


@njit(cache=True)
def sigmoid(eta):
    if eta >= 0.0:
        return 1.0 / (1.0 + math.exp(-eta))
    e = math.exp(eta)
    return e / (1.0 + e)


@njit(cache=True)
def log1pexp(eta):
    if eta > 0.0:
        return eta + math.log1p(math.exp(-eta))
    return math.log1p(math.exp(eta))


@njit(cache=True)
def logistic_objective(eta, y, beta, lam, gamma, family):
    """Mean negative log-likelihood plus penalty; beta[0] is the intercept."""
    n = eta.shape[0]
    nll = 0.0
    for i in range(n):
        nll += log1pexp(eta[i]) - y[i] * eta[i]
    return nll / n + penalty_sum(beta, 1, lam, gamma, family)


@njit(cache=True)
def irls_weights(eta, y, eps, pi, w, r):
    n = eta.shape[0]
    for i in range(n):
        prob = sigmoid(eta[i])
        if prob < eps:
            prob = eps
        elif prob > 1.0 - eps:
            prob = 1.0 - eps
        pi[i] = prob
        w[i] = prob * (1.0 - prob)
        r[i] = (y[i] - prob) / w[i]


@njit(cache=True)
def logistic_cd(X, y, beta, eta, lam, gamma, family, adaptive, eps, tol,
                max_iter, rel_increase_tol, trace, info):
    """Outer IRLS refresh followed by one full CD cycle, repeated.

    Column 0 of ``X`` is the unpenalized intercept. ``beta`` and ``eta``
    are updated in place. ``info`` receives [min update denominator, offending column and
    its curvature for a nonconvex fixed-scale update].
    Returns (outer iterations, status).
    """
    n, p1 = X.shape
    pi = np.empty(n)
    w = np.empty(n)
    r = np.empty(n)
    info[0] = np.inf
    info[1] = -1.0
    trace[0] = logistic_objective(eta, y, beta, lam, gamma, family)
    it = 0
    while it < max_iter:
        it += 1
        irls_weights(eta, y, eps, pi, w, r)
        max_change = 0.0
        for j in range(p1):
            v = 0.0
            acc = 0.0
            for i in range(n):
                xw = X[i, j] * w[i]
                v += xw * X[i, j]
                acc += xw * r[i]
            v /= n
            z = acc / n + v * beta[j]
            if j == 0:
                new = z / v
                den = v
            elif adaptive:
                new = univariate(z, lam, gamma, family) / v
                den = weighted_denominator(v, gamma, family, True)
            else:
                if not weighted_valid(v, gamma, family):
                    info[1] = j
                    info[2] = v
                    return it, NONCONVEX_UPDATE
                new = weighted(z, v, lam, gamma, family)
                den = weighted_denominator(v, gamma, family, False)
            if den < info[0]:
                info[0] = den
            delta = new - beta[j]
            if delta != 0.0:
                for i in range(n):
                    r[i] -= delta * X[i, j]
                    eta[i] += delta * X[i, j]
                beta[j] = new
                if abs(delta) > max_change:
                    max_change = abs(delta)
        trace[it] = logistic_objective(eta, y, beta, lam, gamma, family)
        prev = trace[it - 1]
        if trace[it] - prev > rel_increase_tol * max(1.0, abs(prev)):
            return it, OBJECTIVE_INCREASE
        if max_change < tol:
            return it, OK
    return it, NOT_CONVERGED


@njit(cache=True)
def lla_weights(beta, lam, gamma, family, out):
    for j in range(beta.shape[0]):
        if beta[j] == 0.0:
            out[j] = lam
        else:
            out[j] = pen_derivative(abs(beta[j]), lam, gamma, family)


@njit(cache=True)
def lla_cd(X, beta, r, lam, gamma, family, inner_tol, inner_max_iter,
           outer_tol, outer_max_iter, rel_increase_tol, trace):
    """LLA outer loop around ``weighted_lasso_cd``; ``r`` stays current.

    ``trace[k]`` is the true objective after outer step k.
    Returns (outer iterations, status).
    """
    p = X.shape[1]
    weights = np.empty(p)
    old = np.empty(p)
    trace[0] = linear_objective(r, beta, lam, gamma, family)
    it = 0
    while it < outer_max_iter:
        it += 1
        lla_weights(beta, lam, gamma, family, weights)
        old[:] = beta
        weighted_lasso_cd(X, beta, r, weights, inner_tol, inner_max_iter)
        change = 0.0
        for j in range(p):
            d = abs(beta[j] - old[j])
            if d > change:
                change = d
        trace[it] = linear_objective(r, beta, lam, gamma, family)
        if trace[it] - trace[it - 1] > rel_increase_tol * max(1.0, abs(trace[it - 1])):
            return it, OBJECTIVE_INCREASE
        if change < outer_tol:
            return it, OK
    return it, NOT_CONVERGED

"""Independent oracles used by the tests.

Everything here is deliberately written from scratch against the model
definitions (finite differences, arbitrary-precision pmf, Poisson-limit
recursion) and must stay independent of the package internals it checks.
"""

import math

import mpmath
import numpy as np

from nbglarma.model import GlarmaParams, compute_state


def fd_gradient(f, x0, h=1e-6):
    """Central-difference gradient of scalar f at x0."""
    x0 = np.asarray(x0, dtype=np.float64)
    g = np.empty(x0.size)
    for k in range(x0.size):
        e = np.zeros(x0.size)
        e[k] = h
        g[k] = (f(x0 + e) - f(x0 - e)) / (2.0 * h)
    return g


def fd_jacobian(f, x0, h=1e-6):
    """Central-difference Jacobian of vector-valued f; columns index x."""
    x0 = np.asarray(x0, dtype=np.float64)
    cols = []
    for k in range(x0.size):
        e = np.zeros(x0.size)
        e[k] = h
        cols.append((f(x0 + e) - f(x0 - e)) / (2.0 * h))
    return np.stack(cols, axis=-1)


def nb_log_pmf_mpmath(y, w, alpha, dps=50):
    """NB log pmf via arbitrary-precision gamma functions."""
    with mpmath.workdps(dps):
        y_m, w_m, a_m = mpmath.mpf(int(y)), mpmath.mpf(w), mpmath.mpf(alpha)
        mu = mpmath.e**w_m
        val = (
            mpmath.loggamma(a_m + y_m)
            - mpmath.loggamma(a_m)
            - mpmath.loggamma(y_m + 1)
            + a_m * mpmath.log(a_m / (a_m + mu))
            + y_m * mpmath.log(mu / (a_m + mu))
        )
        return float(val)


def poisson_log_pmf(y, w):
    """log Poisson(y; mean exp(w))."""
    return float(y * w - math.exp(w) - math.lgamma(y + 1.0))


def poisson_glarma_loglik(beta, gamma, y, x):
    """Log-likelihood of the Poisson-limit feedback model.

    Same predictor recursion with residuals E_t = Y_t exp(-W_t) - 1 and
    Poisson observation terms; serves as the alpha -> infinity oracle.
    """
    beta = np.asarray(beta, dtype=np.float64)
    gamma = np.asarray(gamma, dtype=np.float64)
    y = np.asarray(y)
    n = y.size
    q = gamma.size
    e = np.zeros(n)
    total = 0.0
    for t in range(n):
        w = float(x[t] @ beta)
        for j in range(1, min(q, t) + 1):
            w += gamma[j - 1] * e[t - j]
        e[t] = y[t] * math.exp(-w) - 1.0
        total += poisson_log_pmf(y[t], w)
    return total


def nb_glm_score_information(beta, alpha, y, x):
    """Score and observed information of the gamma-free NB GLM, direct form."""
    y = np.asarray(y, dtype=np.float64)
    mu = np.exp(np.clip(x @ beta, -30.0, 30.0))
    score = x.T @ (y - (alpha + y) * mu / (alpha + mu))
    wts = (alpha + y) * alpha * mu / (alpha + mu) ** 2
    info = (x * wts[:, None]).T @ x
    return score, info


def random_instance(seed, n_max=50, p_max=5, q_max=2, alpha_range=(0.5, 5.0)):
    """A random small GLARMA instance for derivative checks.

    y is drawn from the model itself so the expansion point is realistic;
    parameters are kept moderate so no exp clamp activates.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, n_max + 1))
    p = int(rng.integers(1, p_max + 1))
    q = int(rng.integers(1, q_max + 1))
    x = np.hstack([np.ones((n, 1)), rng.uniform(-1.0, 1.0, size=(n, p))])
    beta = rng.normal(scale=0.4, size=p + 1)
    gamma = rng.uniform(-0.4, 0.4, size=q)
    alpha = float(rng.uniform(*alpha_range))
    params = GlarmaParams(beta, gamma, alpha)

    e = np.zeros(n)
    y = np.empty(n, dtype=np.int64)
    for t in range(n):
        w = float(x[t] @ beta)
        for j in range(1, min(q, t) + 1):
            w += gamma[j - 1] * e[t - j]
        mu = math.exp(w)
        lam = rng.gamma(alpha, mu / alpha)
        y[t] = rng.poisson(lam)
        e[t] = (y[t] - mu) / (mu + mu * mu / alpha)
    # evaluation point near but not at the truth
    params_eval = GlarmaParams(beta + rng.normal(scale=0.05, size=p + 1),
                               gamma + rng.normal(scale=0.05, size=q), alpha)
    return params_eval, y, x


def glarma_w(params: GlarmaParams, y, x):
    return compute_state(params, y, x).w

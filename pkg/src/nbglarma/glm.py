"""Classical negative binomial GLM (log link), no ARMA part.

Used twice by the selection pipeline: to initialize (beta, alpha) on the
full design and to re-estimate them on the selected columns. beta is
fitted by IRLS at fixed alpha; alpha by Newton on the profile
log-likelihood in log(alpha); the two alternate until both stabilize.

Fitting with a rank-deficient design (p+1 > n, as in short expression
series) is refused by default and switches the IRLS solve to the
minimum-norm least-squares solution when allow_singular=True.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma, psi

from .errors import ConfigurationError, NumericError
from .model import GlarmaParams, W_CAP, log_likelihood, nb_log_pmf, validate_counts, validate_design

ALPHA_MIN = 1e-3
ALPHA_MAX = 1e6


@dataclass
class GlmFit:
    beta_hat: np.ndarray
    alpha_hat: float
    converged: bool
    iterations: int
    loglik: float
    alpha_at_bound: bool = False


def _mu(eta):
    return np.exp(np.clip(eta, -W_CAP, W_CAP))


def _glm_loglik(y, eta, alpha):
    return float(np.sum(nb_log_pmf(y, eta, alpha)))


def moment_alpha(y) -> float:
    """Method-of-moments overdispersion start, clamped; 10 when var <= mean."""
    m = float(np.mean(y))
    v = float(np.var(y))
    if v <= m or m <= 0.0:
        return 10.0
    return float(np.clip(m * m / (v - m), ALPHA_MIN, ALPHA_MAX))


def _irls_beta(y, x, alpha, beta_start, tol=1e-10, max_iter=200):
    """Reweighted Newton for beta at fixed alpha.

    Uses the observed-information weights (alpha+y) alpha mu / (alpha+mu)^2
    rather than their expectation: plain Fisher scoring can enter a
    2-cycle on flat likelihood ridges at small alpha, while the observed
    Hessian converges quadratically. Steps are halved whenever the
    log-likelihood would decrease.
    """
    beta = beta_start.copy()
    eta = x @ beta
    ll = _glm_loglik(y, eta, alpha)
    for _ in range(max_iter):
        mu = _mu(eta)
        score = x.T @ (alpha * (y - mu) / (alpha + mu))
        w = (alpha + y) * alpha * mu / (alpha + mu) ** 2
        info = (x * w[:, None]).T @ x
        try:
            chol = np.linalg.cholesky(info)
            step = np.linalg.solve(chol.T, np.linalg.solve(chol, score))
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(info, score, rcond=None)
        if not np.all(np.isfinite(step)):
            raise NumericError("IRLS produced a non-finite update")
        scale = 1.0
        for _ in range(31):
            cand = beta + scale * step
            ll_new = _glm_loglik(y, x @ cand, alpha)
            if np.isfinite(ll_new) and ll_new >= ll - 1e-12 * (1.0 + abs(ll)):
                break
            scale *= 0.5
        beta = beta + scale * step
        eta = x @ beta
        ll = _glm_loglik(y, eta, alpha)
        if np.max(np.abs(scale * step)) < tol:
            break
    return beta


def _alpha_profile_newton(y, mu, alpha_start, tol=1e-10, max_iter=100):
    """Maximize the profile log-likelihood over log(alpha) at fixed mu."""
    u = float(np.log(np.clip(alpha_start, ALPHA_MIN, ALPHA_MAX)))
    lo, hi = np.log(ALPHA_MIN), np.log(ALPHA_MAX)
    log_mu = np.log(mu)

    def ll_at(a):
        return float(np.sum(nb_log_pmf(y, log_mu, a)))

    ll = ll_at(np.exp(u))
    for _ in range(max_iter):
        a = np.exp(u)
        d1a = float(np.sum(psi(a + y) - psi(a) + np.log(a) + 1.0
                           - np.log(a + mu) - (a + y) / (a + mu)))
        d2a = float(np.sum(polygamma(1, a + y) - polygamma(1, a) + 1.0 / a
                           - 1.0 / (a + mu) - (mu - y) / (a + mu) ** 2))
        d1 = a * d1a
        d2 = a * d1a + a * a * d2a
        if d2 < 0 and np.isfinite(d2):
            step = -d1 / d2
        else:
            step = np.sign(d1) * 0.5
        if step == 0.0:
            break
        for _ in range(31):
            u_new = float(np.clip(u + step, lo, hi))
            ll_new = ll_at(np.exp(u_new))
            if np.isfinite(ll_new) and ll_new >= ll - 1e-12 * (1.0 + abs(ll)):
                break
            step *= 0.5
        moved = abs(u_new - u)
        u, ll = u_new, ll_new
        if moved < tol:
            break
    at_bound = u <= lo + 1e-12 or u >= hi - 1e-12
    return float(np.exp(u)), at_bound


def fit_nb_glm(y, x, allow_singular: bool = False, max_rounds: int = 50) -> GlmFit:
    """Joint (beta, alpha) maximum likelihood fit of the NB GLM."""
    y = validate_counts(y)
    x = validate_design(x, y.size)
    n, p1 = x.shape
    if not allow_singular:
        if n < p1 or np.linalg.matrix_rank(x) < p1:
            raise ConfigurationError(
                f"design is rank-deficient ({n} rows, {p1} columns); "
                "pass allow_singular=True for a minimum-norm fit"
            )

    beta, *_ = np.linalg.lstsq(x, np.log(y + 0.5), rcond=None)
    alpha = moment_alpha(y)
    converged = False
    at_bound = False
    rounds = 0
    for _ in range(max_rounds):
        rounds += 1
        beta_new = _irls_beta(y, x, alpha, beta)
        alpha_new, at_bound = _alpha_profile_newton(y, _mu(x @ beta_new), alpha)
        dbeta = float(np.max(np.abs(beta_new - beta)))
        dloga = abs(np.log(alpha_new) - np.log(alpha))
        beta, alpha = beta_new, alpha_new
        if dbeta < 1e-8 and dloga < 1e-8:
            converged = True
            break
    ll = log_likelihood(GlarmaParams(beta, np.zeros(1), alpha), y, x)
    return GlmFit(beta_hat=beta, alpha_hat=float(alpha), converged=converged,
                  iterations=rounds, loglik=ll, alpha_at_bound=at_bound)


def reestimate(y, x, selected, allow_singular: bool = False) -> GlmFit:
    """Refit the GLM on the intercept plus the selected columns.

    The returned beta_hat is embedded back into full length with zeros at
    the unselected positions.
    """
    y = validate_counts(y)
    x = validate_design(x, y.size)
    p1 = x.shape[1]
    cols = sorted({0} | {int(i) for i in selected})
    if cols[0] < 0 or cols[-1] >= p1:
        raise ConfigurationError(f"selected indices out of range 0..{p1 - 1}: {cols}")
    fit = fit_nb_glm(y, x[:, cols], allow_singular=allow_singular)
    beta_full = np.zeros(p1)
    beta_full[cols] = fit.beta_hat
    return GlmFit(beta_hat=beta_full, alpha_hat=fit.alpha_hat, converged=fit.converged,
                  iterations=fit.iterations, loglik=fit.loglik,
                  alpha_at_bound=fit.alpha_at_bound)

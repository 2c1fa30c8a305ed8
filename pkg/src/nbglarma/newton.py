"""Newton-Raphson estimation of the ARMA feedback coefficients.

Maximizes the conditional log-likelihood over gamma with beta and alpha
frozen. The raw Newton step uses the gamma block of the score and
Hessian; far from the optimum the block may be indefinite, so the solve
falls back to a small ridge and every step is halved until the
log-likelihood does not decrease (beyond 1e-8 relative slack).
"""

from dataclasses import dataclass, field

import numpy as np

from .derivatives import gamma_score_hessian
from .errors import NumericError
from .model import GlarmaParams, log_likelihood

RIDGE_SCALE = 1e-6
MONOTONE_SLACK = 1e-8


@dataclass
class NewtonConfig:
    tol: float = 1e-6
    max_iter: int = 100
    max_halvings: int = 30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class NewtonResult:
    gamma_hat: np.ndarray
    iterations: int
    converged: bool
    final_step_norm: float
    loglik: float = field(default=float("nan"))


def _solve_direction(hess_gg: np.ndarray, score: np.ndarray) -> np.ndarray:
    """Newton direction -H^{-1} g via Cholesky of -H, ridged until definite.

    Away from the optimum -H may be indefinite; the ridge escalates until
    the factorization succeeds so the returned direction is always an
    ascent direction (PD solve of the score).
    """
    if not (np.all(np.isfinite(hess_gg)) and np.all(np.isfinite(score))):
        raise NumericError("non-finite score or Hessian in Newton step")
    neg = -hess_gg
    eye = np.eye(neg.shape[0])
    ridge = 0.0
    for _ in range(41):
        try:
            chol = np.linalg.cholesky(neg + ridge * eye)
            return np.linalg.solve(chol.T, np.linalg.solve(chol, score))
        except np.linalg.LinAlgError:
            if ridge == 0.0:
                ridge = RIDGE_SCALE * (1.0 + np.abs(np.diag(neg)).max())
            else:
                ridge *= 10.0
    raise NumericError("gamma Hessian block not factorizable after ridge escalation")


def estimate_gamma(beta0, alpha0: float, gamma0, y, x,
                   cfg: NewtonConfig | None = None) -> NewtonResult:
    """Iterate gamma <- gamma - H_gg^{-1} g at fixed (beta0, alpha0).

    Stops when the sup-norm of the update falls below cfg.tol. A
    non-converged run is returned with converged=False rather than
    raised; the caller decides what to do with it.
    """
    if cfg is None:
        cfg = NewtonConfig()
    beta0 = np.asarray(beta0, dtype=np.float64)
    gamma = np.asarray(gamma0, dtype=np.float64).copy()
    alpha0 = float(alpha0)

    params = GlarmaParams(beta0, gamma, alpha0)
    score, hess, state = gamma_score_hessian(params, y, x)
    loglik = log_likelihood(params, y, x, state)

    step_norm = np.inf
    iterations = 0
    for _ in range(cfg.max_iter):
        iterations += 1
        direction = _solve_direction(hess, score)
        scale = 1.0
        accepted = False
        for _ in range(cfg.max_halvings + 1):
            candidate = gamma + scale * direction
            cand_params = GlarmaParams(beta0, candidate, alpha0)
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    cand_score, cand_hess, cand_state = gamma_score_hessian(cand_params, y, x)
                    cand_loglik = log_likelihood(cand_params, y, x, cand_state)
            except NumericError:
                scale *= 0.5
                continue
            usable = (
                np.isfinite(cand_loglik)
                and np.all(np.isfinite(cand_score))
                and np.all(np.isfinite(cand_hess))
            )
            if usable and cand_loglik >= loglik - MONOTONE_SLACK * (1.0 + abs(loglik)):
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            return NewtonResult(gamma, iterations, False, step_norm, loglik)
        step_norm = float(np.max(np.abs(candidate - gamma)))
        gamma = candidate
        score, hess, loglik = cand_score, cand_hess, cand_loglik
        if step_norm < cfg.tol:
            return NewtonResult(gamma, iterations, True, step_norm, loglik)
    return NewtonResult(gamma, iterations, False, step_norm, loglik)

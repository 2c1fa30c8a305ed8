"""Quadratic approximation of the log-likelihood in beta.

A second-order Taylor expansion of L around beta0 (gamma and alpha
frozen) is recast as an ordinary least-squares problem: with
H = -d2L/dbeta dbeta' = U diag(ev) U' and eigenvalues clipped away from
zero,

    Xcal = ev^{1/2} U',
    Ycal = Xcal beta0 + ev^{-1/2} U' grad,

the negated quadratic approximation equals 0.5 ||Ycal - Xcal beta||^2 up
to a constant. The clip floor makes ev^{-1/2} well defined when H is
only positive semidefinite (or slightly indefinite away from the
optimum).
"""

from dataclasses import dataclass

import numpy as np

from .derivatives import likelihood_gradient, likelihood_hessian, w_first_derivatives
from .errors import NumericError
from .model import GlarmaParams, compute_state

CLIP_EPS = 1e-8


@dataclass
class QuadraticProblem:
    """Calibrated least-squares form of the quadratic approximation."""

    y_cal: np.ndarray   # length p+1
    x_cal: np.ndarray   # (p+1) x (p+1), rows scaled by sqrt(eigenvalue)
    eigvals: np.ndarray # clipped eigenvalues of -d2L/dbeta dbeta'
    u: np.ndarray       # orthogonal eigenvector matrix

    @property
    def n_coef(self) -> int:
        return self.y_cal.size

    def gram(self) -> np.ndarray:
        return self.x_cal.T @ self.x_cal

    def xty(self) -> np.ndarray:
        return self.x_cal.T @ self.y_cal


def build_quadratic(beta0, gamma_hat, alpha0, y, x, clip_eps: float = CLIP_EPS) -> QuadraticProblem:
    """Form (Ycal, Xcal) at the expansion point (beta0, gamma_hat, alpha0)."""
    beta0 = np.asarray(beta0, dtype=np.float64)
    params = GlarmaParams(beta0, gamma_hat, alpha0)
    state = compute_state(params, y, x)
    dw = w_first_derivatives(params, y, x, state, "beta")
    grad = likelihood_gradient(params, y, x, "beta", state, dw)
    hess = likelihood_hessian(params, y, x, "beta", state, dw)
    neg_hess = -0.5 * (hess + hess.T)
    if not np.all(np.isfinite(neg_hess)) or not np.all(np.isfinite(grad)):
        raise NumericError("non-finite gradient or Hessian at the expansion point")

    eigvals, u = np.linalg.eigh(neg_hess)
    lam_max = float(eigvals.max())
    if not np.isfinite(lam_max) or lam_max <= 0.0:
        raise NumericError("curvature matrix has no positive eigenvalue")
    clipped = np.maximum(eigvals, clip_eps * lam_max)
    sqrt_ev = np.sqrt(clipped)
    x_cal = sqrt_ev[:, None] * u.T
    y_cal = x_cal @ beta0 + (u.T @ grad) / sqrt_ev
    return QuadraticProblem(y_cal=y_cal, x_cal=x_cal, eigvals=clipped, u=u)

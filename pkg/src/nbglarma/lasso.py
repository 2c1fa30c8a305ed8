"""L1-penalized solutions of the quadratic problem along a lambda grid.

All p+1 coordinates are penalized, intercept included; re-estimation
later repairs the intercept shrinkage. The grid follows the usual
convention: 100 log-spaced values from lam_max = max_j |X_j'Y| down to
1e-4 lam_max, solved by warm-started cyclic coordinate descent through
the selected kernel backend.
"""

from dataclasses import dataclass, field

import numpy as np

from ._backend import cd_path, cd_solve
from .errors import ConfigurationError
from .quadratic import QuadraticProblem

N_LAMBDAS = 100
LAMBDA_MIN_RATIO = 1e-4
MAX_SWEEPS = 1000
KKT_TOL = 1e-8


def lambda_grid(qp: QuadraticProblem, n_lambdas: int = N_LAMBDAS,
                min_ratio: float = LAMBDA_MIN_RATIO) -> np.ndarray:
    """Decreasing log-spaced grid anchored at the smallest lam giving beta=0."""
    lam_max = float(np.abs(qp.xty()).max())
    if lam_max <= 0.0:
        lam_max = 1.0
    return np.geomspace(lam_max, lam_max * min_ratio, n_lambdas)


def _cd_tolerances(G, c):
    """Stopping tolerance in beta units bounding the KKT drift in X'r units."""
    corr_tol = KKT_TOL * max(1.0, float(np.abs(c).max(initial=0.0)))
    row_l1 = float(np.abs(G).sum(axis=1).max(initial=0.0))
    return corr_tol / max(row_l1, 1e-300)


@dataclass
class LassoPath:
    lambdas: np.ndarray
    betas: np.ndarray  # (p+1) x n_lambdas
    cv_mean: np.ndarray | None = field(default=None)
    cv_se: np.ndarray | None = field(default=None)


def solve_penalized(G, c, lam: float, beta0=None, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Single-lam solve on the Gram form; beta0 is an optional warm start."""
    c = np.asarray(c, dtype=np.float64)
    if beta0 is None:
        beta0 = np.zeros(c.size)
    beta, _ = cd_solve(G, c, float(lam), beta0, _cd_tolerances(G, c), max_sweeps)
    return beta


def lasso_path(qp: QuadraticProblem, lambdas=None) -> LassoPath:
    """Solutions of 0.5||Ycal - Xcal b||^2 + lam ||b||_1 along the grid."""
    if lambdas is None:
        lambdas = lambda_grid(qp)
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if lambdas.size < 1 or np.any(np.diff(lambdas) >= 0) or np.any(lambdas < 0):
        raise ConfigurationError("lambdas must be strictly decreasing and nonnegative")
    G = qp.gram()
    c = qp.xty()
    betas, _ = cd_path(G, c, lambdas, _cd_tolerances(G, c), MAX_SWEEPS)
    return LassoPath(lambdas=lambdas, betas=betas)


def cross_validate(qp: QuadraticProblem, lambdas=None, folds: int = 10, seed: int = 0):
    """K-fold CV over the rows of (Ycal, Xcal).

    Returns (lambda_cv, cv_mean, cv_se): the lam minimizing the mean
    held-out squared error, and the per-lam mean and standard error.
    """
    if lambdas is None:
        lambdas = lambda_grid(qp)
    lambdas = np.asarray(lambdas, dtype=np.float64)
    p1 = qp.n_coef
    if not (2 <= folds <= p1):
        raise ConfigurationError(f"folds must be in [2, {p1}], got {folds}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(p1)
    fold_ids = np.array_split(perm, folds)

    errs = np.empty((folds, lambdas.size))
    for f, test_rows in enumerate(fold_ids):
        mask = np.ones(p1, dtype=bool)
        mask[test_rows] = False
        x_tr = qp.x_cal[mask]
        y_tr = qp.y_cal[mask]
        G = x_tr.T @ x_tr
        c = x_tr.T @ y_tr
        betas, _ = cd_path(G, c, lambdas, _cd_tolerances(G, c), MAX_SWEEPS)
        resid = qp.y_cal[test_rows, None] - qp.x_cal[test_rows] @ betas
        errs[f] = np.sum(resid**2, axis=0)
    cv_mean = errs.mean(axis=0)
    cv_se = errs.std(axis=0, ddof=1) / np.sqrt(folds)
    lambda_cv = float(lambdas[int(np.argmin(cv_mean))])
    return lambda_cv, cv_mean, cv_se

"""Stability selection over row subsamples of the quadratic problem.

The rows of (Ycal, Xcal) are subsampled without replacement at half
size; each subsample is solved at one fixed lam (the smallest grid value
for ss_min, the cross-validated one for ss_cv) and the per-coordinate
nonzero frequencies are thresholded. Subsample draws use seeds derived
from (seed, subsample index), so the result does not depend on
evaluation order.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import cd_solve
from .errors import ConfigurationError
from .lasso import MAX_SWEEPS, _cd_tolerances, cross_validate, lambda_grid
from .quadratic import QuadraticProblem

LAMBDA_RULES = ("ss_min", "ss_cv")
N_SUBSAMPLES = 1000


@dataclass
class SelectionReport:
    frequencies: np.ndarray
    threshold: float
    lambda_rule: str
    lambda_value: float
    selected: np.ndarray  # sorted coefficient indices with freq >= threshold
    n_subsamples: int
    seed: int


def selection_frequencies(qp: QuadraticProblem, lam: float,
                          n_subsamples: int = N_SUBSAMPLES, seed: int = 0) -> np.ndarray:
    """Fraction of subsamples in which each coordinate is nonzero at lam."""
    p1 = qp.n_coef
    m = p1 // 2
    counts = np.zeros(p1)
    zeros = np.zeros(p1)
    for s in range(n_subsamples):
        rng = np.random.default_rng([seed, s])
        rows = rng.choice(p1, size=m, replace=False)
        xs = qp.x_cal[rows]
        ys = qp.y_cal[rows]
        G = xs.T @ xs
        c = xs.T @ ys
        beta, _ = cd_solve(G, c, float(lam), zeros, _cd_tolerances(G, c), MAX_SWEEPS)
        counts[beta != 0.0] += 1.0
    return counts / n_subsamples


def stability_select(qp: QuadraticProblem, lambda_rule: str = "ss_cv",
                     threshold: float = 0.7, n_subsamples: int = N_SUBSAMPLES,
                     seed: int = 0, lambdas=None, lambda_value: float | None = None,
                     cv_folds: int = 10) -> SelectionReport:
    """Run stability selection and threshold the selection frequencies.

    lambda_value overrides the rule when the caller has already resolved
    the lam (e.g. to share one CV pass across uses).
    """
    if lambda_rule not in LAMBDA_RULES:
        raise ConfigurationError(f"lambda_rule must be one of {LAMBDA_RULES}")
    if not 0.0 < threshold < 1.0:
        raise ConfigurationError("threshold must lie strictly between 0 and 1")
    if qp.n_coef < 4:
        raise ConfigurationError("stability selection needs at least 3 covariates")
    if lambdas is None:
        lambdas = lambda_grid(qp)
    if lambda_value is None:
        if lambda_rule == "ss_min":
            lambda_value = float(np.min(lambdas))
        else:
            lambda_value, _, _ = cross_validate(qp, lambdas, folds=cv_folds, seed=seed)

    freq = selection_frequencies(qp, lambda_value, n_subsamples, seed)
    selected = np.flatnonzero(freq >= threshold)
    return SelectionReport(frequencies=freq, threshold=float(threshold),
                           lambda_rule=lambda_rule, lambda_value=float(lambda_value),
                           selected=selected, n_subsamples=int(n_subsamples), seed=int(seed))

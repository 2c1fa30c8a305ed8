"""Negative binomial GLARMA model core.

The observation at time t is conditionally negative binomial with mean
exp(W_t) and overdispersion alpha, where the linear predictor

    W_t = beta' x_t + sum_{j=1..q} gamma_j E_{t-j}

feeds back the score-type working residuals

    E_t = (Y_t exp(-W_t) - 1) / (1 + exp(W_t)/alpha),   E_t = 0 for t <= 0.

This module holds the validated domain types, the sequential state
recursion, the NB log-pmf and the conditional log-likelihood. Everything
here is a pure function of its inputs.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, NumericError

# Exponentials are evaluated with the predictor clamped to +-W_CAP; the
# predictor itself is kept unclamped so optimizer excursions stay visible.
W_CAP = 30.0


def validate_counts(y) -> np.ndarray:
    """Validate and convert a count series to an int64 vector."""
    arr = np.asarray(y)
    if arr.ndim != 1 or arr.size < 1:
        raise ConfigurationError("count series must be a non-empty 1-D vector")
    if not np.issubdtype(arr.dtype, np.integer):
        as_float = np.asarray(arr, dtype=np.float64)
        if not np.all(np.isfinite(as_float)) or np.any(as_float != np.floor(as_float)):
            raise ConfigurationError("count series entries must be integers")
        arr = as_float
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ConfigurationError("count series entries must be nonnegative")
    return arr


def validate_design(x, n_obs: int | None = None) -> np.ndarray:
    """Validate a design matrix: finite, 2-D, leading column of ones."""
    mat = np.ascontiguousarray(x, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise ConfigurationError("design matrix must be 2-D and non-empty")
    if not np.all(np.isfinite(mat)):
        raise ConfigurationError("design matrix contains non-finite entries")
    if not np.all(mat[:, 0] == 1.0):
        raise ConfigurationError("design matrix column 0 must be constant 1 (intercept)")
    if n_obs is not None and mat.shape[0] != n_obs:
        raise ConfigurationError(
            f"design has {mat.shape[0]} rows but series has {n_obs} observations"
        )
    return mat


@dataclass(frozen=True)
class GlarmaParams:
    """Full parameter triple: regression beta, ARMA feedback gamma, alpha > 0."""

    beta: np.ndarray
    gamma: np.ndarray
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=np.float64).ravel())
        object.__setattr__(self, "gamma", np.asarray(self.gamma, dtype=np.float64).ravel())
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.gamma.size < 1:
            raise ConfigurationError("gamma must have length q >= 1")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ConfigurationError("alpha must be a positive finite real")

    @property
    def q(self) -> int:
        return self.gamma.size

    @property
    def delta(self) -> np.ndarray:
        """Stacked (beta, gamma) vector."""
        return np.concatenate([self.beta, self.gamma])


@dataclass
class GlarmaState:
    """Per-t workspaces: predictor w, residuals e, clamped mean mu."""

    w: np.ndarray
    e: np.ndarray
    mu: np.ndarray


def compute_state(params: GlarmaParams, y, x) -> GlarmaState:
    """Run the GLARMA recursion, returning W_t, E_t and mu_t for t = 1..n.

    Lags with t - j <= 0 contribute zero. Raises NumericError if the
    predictor leaves the representable range (divergent parameters).
    """
    y = validate_counts(y)
    x = validate_design(x, y.size)
    if params.beta.size != x.shape[1]:
        raise ConfigurationError(
            f"beta has length {params.beta.size} but design has {x.shape[1]} columns"
        )
    n = y.size
    q = params.q
    gamma = params.gamma
    alpha = params.alpha

    bx = x @ params.beta
    w = np.empty(n)
    e = np.empty(n)
    mu = np.empty(n)
    for t in range(n):
        wt = bx[t]
        for j in range(1, min(q, t) + 1):
            wt += gamma[j - 1] * e[t - j]
        if not math.isfinite(wt):
            raise NumericError(f"non-finite predictor W at t={t + 1}")
        wc = wt if -W_CAP <= wt <= W_CAP else (W_CAP if wt > 0 else -W_CAP)
        m = math.exp(wc)
        et = (y[t] * math.exp(-wc) - 1.0) / (1.0 + m / alpha)
        if not math.isfinite(et):
            raise NumericError(f"non-finite residual E at t={t + 1}")
        w[t] = wt
        e[t] = et
        mu[t] = m
    return GlarmaState(w=w, e=e, mu=mu)


def nb_log_pmf(y, w, alpha):
    """Log pmf of NB(mean exp(w), overdispersion alpha), elementwise.

    log f = logGamma(alpha+y) - logGamma(alpha) - logGamma(y+1)
            + alpha log alpha + y w - (alpha+y) log(alpha + exp(w)).
    """
    y = np.asarray(y)
    w = np.asarray(w, dtype=np.float64)
    if np.any(y < 0) or np.any(y != np.floor(y)):
        raise ConfigurationError("y must be a nonnegative integer")
    alpha = float(alpha)
    if not (np.isfinite(alpha) and alpha > 0):
        raise ConfigurationError("alpha must be a positive finite real")
    # log(alpha + exp(w)) via logaddexp: exact and overflow-free, so the
    # pmf stays bounded even when the optimizer pushes w far out.
    out = (
        gammaln(alpha + y)
        - gammaln(alpha)
        - gammaln(y + 1.0)
        + alpha * math.log(alpha)
        + y * w
        - (alpha + y) * np.logaddexp(math.log(alpha), w)
    )
    if out.ndim == 0:
        return float(out)
    return out


def log_likelihood(params: GlarmaParams, y, x, state: GlarmaState | None = None) -> float:
    """Conditional log-likelihood L(delta, alpha) summed over t = 1..n."""
    y = validate_counts(y)
    if state is None:
        state = compute_state(params, y, x)
    return float(np.sum(nb_log_pmf(y, state.w, params.alpha)))

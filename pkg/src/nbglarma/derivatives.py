"""First and second derivatives of the GLARMA predictor and log-likelihood.

The predictor recursion makes every W_t depend on all earlier parameters,
so its derivatives satisfy recursions of their own. Two per-t factors
drive everything (mu is the clamped exp(W)):

    b_t  = E_t + (1 + E_t mu_t/alpha) / (1 + mu_t/alpha)
    c2_t = E_t + 2 (E_t mu_t^2/alpha + Y_t) / (alpha (1 + mu_t/alpha)^2)
               + (1 - E_t mu_t/alpha) / (1 + mu_t/alpha)

b is the coefficient of the first-derivative recursion (dE_t = -b_t dW_t)
and -c2 is the derivative of b in W, which is what the second-derivative
recursion needs. Both are computed once per t and reused across all
parameter pairs.

Derivatives can be restricted to the beta block, the gamma block, or the
full stacked parameter; the gamma block is what the Newton step consumes,
the beta block feeds the quadratic approximation, and the full versions
exist for diagnostics. Second derivatives are accumulated with a rolling
window of the last q matrices so the Hessian never materializes the full
n-stack.
"""

import numpy as np

from .errors import ConfigurationError
from .model import GlarmaParams, GlarmaState, compute_state, validate_counts, validate_design

BLOCKS = ("full", "beta", "gamma")


def _factors(y, state: GlarmaState, alpha: float):
    """Per-t recursion factors (b, c2) and likelihood weights (gw, cw).

    gw_t = Y_t - (alpha+Y_t) mu_t/(alpha+mu_t) multiplies dW in the score;
    cw_t = (alpha+Y_t) mu_t/(alpha+mu_t) (1 - mu_t/(alpha+mu_t)) multiplies
    the outer product dW dW' in the Hessian.
    """
    mu = state.mu
    e = state.e
    ratio = mu / alpha
    denom = 1.0 + ratio
    b = e + (1.0 + e * ratio) / denom
    c2 = e + 2.0 * (e * mu * ratio + y) / (alpha * denom**2) + (1.0 - e * ratio) / denom
    frac = mu / (alpha + mu)
    gw = y - (alpha + y) * frac
    cw = (alpha + y) * frac * (1.0 - frac)
    return b, c2, gw, cw


def _check_block(block: str):
    if block not in BLOCKS:
        raise ConfigurationError(f"block must be one of {BLOCKS}, got {block!r}")


def _dw_base(block, n, p1, q, x, e):
    """Constant term of the first-derivative recursion, n x d."""
    if block == "beta":
        return x.copy()
    cols_gamma = np.zeros((n, q))
    for lag in range(1, q + 1):
        cols_gamma[lag:, lag - 1] = e[: n - lag]
    if block == "gamma":
        return cols_gamma
    return np.hstack([x, cols_gamma])


def w_first_derivatives(params: GlarmaParams, y, x, state: GlarmaState | None = None,
                        block: str = "full") -> np.ndarray:
    """Rows t of the output are the derivative of W_t in the chosen block.

    dW_t/dbeta_k  = x_tk    - sum_j gamma_j b_{t-j} dW_{t-j}/dbeta_k
    dW_t/dgamma_l = E_{t-l} - sum_j gamma_j b_{t-j} dW_{t-j}/dgamma_l

    with E_s = 0 and zero derivative rows for s <= 0.
    """
    _check_block(block)
    y = validate_counts(y)
    x = validate_design(x, y.size)
    if state is None:
        state = compute_state(params, y, x)
    n = y.size
    q = params.q
    gamma = params.gamma
    b, _, _, _ = _factors(y, state, params.alpha)

    dw = _dw_base(block, n, x.shape[1], q, x, state.e)
    for t in range(1, n):
        row = dw[t]
        for j in range(1, min(q, t) + 1):
            s = t - j
            row -= (gamma[j - 1] * b[s]) * dw[s]
    return dw


def _second_derivative_step(t, q, gamma, b, c2, dw, prev, gamma_offset):
    """One matrix of the second-derivative recursion at index t.

    prev maps s -> d2W_s for the last q steps. gamma_offset is the column
    index where the gamma block starts, or None when the block has no
    gamma columns (then the lead terms vanish identically).
    """
    d = dw.shape[1]
    m = np.zeros((d, d))
    if gamma_offset is not None:
        lead = np.zeros((d, d))
        for lag in range(1, q + 1):
            s = t - lag
            if s >= 0:
                lead[gamma_offset + lag - 1, :] += b[s] * dw[s]
        m -= lead + lead.T
    for j in range(1, min(q, t) + 1):
        s = t - j
        m += gamma[j - 1] * (c2[s] * np.outer(dw[s], dw[s]) - b[s] * prev[s])
    return m


def w_second_derivatives(params: GlarmaParams, y, x, state: GlarmaState | None = None,
                         dw: np.ndarray | None = None, block: str = "full") -> np.ndarray:
    """Stacked second derivatives of W_t, shape (n, d, d) for the block.

    The beta-beta and gamma-gamma recursions follow the closed-form
    expressions; the beta-gamma cross block uses the same bracket and
    curvature factors with a single lead term, and is checked against
    finite differences in the tests.
    """
    _check_block(block)
    y = validate_counts(y)
    x = validate_design(x, y.size)
    if state is None:
        state = compute_state(params, y, x)
    if dw is None:
        dw = w_first_derivatives(params, y, x, state, block)
    n = y.size
    q = params.q
    b, c2, _, _ = _factors(y, state, params.alpha)
    if block == "beta":
        goff = None
    elif block == "gamma":
        goff = 0
    else:
        goff = x.shape[1]

    d = dw.shape[1]
    out = np.zeros((n, d, d))
    for t in range(n):
        out[t] = _second_derivative_step(t, q, params.gamma, b, c2, dw, out, goff)
    return out


def likelihood_gradient(params: GlarmaParams, y, x, block: str = "full",
                        state: GlarmaState | None = None,
                        dw: np.ndarray | None = None) -> np.ndarray:
    """Score of the conditional log-likelihood for the chosen block."""
    _check_block(block)
    y = validate_counts(y)
    x = validate_design(x, y.size)
    if state is None:
        state = compute_state(params, y, x)
    if dw is None:
        dw = w_first_derivatives(params, y, x, state, block)
    _, _, gw, _ = _factors(y, state, params.alpha)
    return dw.T @ gw


def likelihood_hessian(params: GlarmaParams, y, x, block: str = "full",
                       state: GlarmaState | None = None,
                       dw: np.ndarray | None = None) -> np.ndarray:
    """Hessian of the conditional log-likelihood for the chosen block.

    H = sum_t gw_t d2W_t - sum_t cw_t dW_t dW_t'. The d2W stack is not
    materialized; only the last q matrices are kept.
    """
    _check_block(block)
    y = validate_counts(y)
    x = validate_design(x, y.size)
    if state is None:
        state = compute_state(params, y, x)
    if dw is None:
        dw = w_first_derivatives(params, y, x, state, block)
    n = y.size
    q = params.q
    b, c2, gw, cw = _factors(y, state, params.alpha)
    if block == "beta":
        goff = None
    elif block == "gamma":
        goff = 0
    else:
        goff = x.shape[1]

    d = dw.shape[1]
    hess = np.zeros((d, d))
    window: dict[int, np.ndarray] = {}
    for t in range(n):
        m = _second_derivative_step(t, q, params.gamma, b, c2, dw, window, goff)
        hess += gw[t] * m
        window[t] = m
        window.pop(t - q, None)
    hess -= (dw * cw[:, None]).T @ dw
    return hess


def gamma_score_hessian(params: GlarmaParams, y, x):
    """Score and Hessian restricted to gamma, sharing one state pass.

    Returns (score, hessian, loglik_state) where loglik_state is the
    computed GlarmaState for reuse by the caller.
    """
    y = validate_counts(y)
    x = validate_design(x, y.size)
    state = compute_state(params, y, x)
    dw = w_first_derivatives(params, y, x, state, "gamma")
    score = likelihood_gradient(params, y, x, "gamma", state, dw)
    hess = likelihood_hessian(params, y, x, "gamma", state, dw)
    return score, hess, state

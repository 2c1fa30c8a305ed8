"""Synthetic NB GLARMA data: Fourier covariates and gamma-Poisson sampling."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, SimulationError

MU_OVERFLOW = 1e12


def default_gamma(q: int) -> np.ndarray:
    """Benchmark feedback truth: 0.5 for q=1, (0.5, 0.25) for q=2, halving on."""
    return 0.5 ** np.arange(1, q + 1)


@dataclass
class SimConfig:
    n: int
    q: int
    gamma_true: np.ndarray | None = None
    p: int = 100
    alpha_true: float = 2.0
    sparsity: float = 0.05
    f: float = 0.7
    beta_range: tuple[float, float] = (-0.64, 1.73)
    n_replicates: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.p < 1 or self.q < 1:
            raise ConfigurationError("n, p and q must all be >= 1")
        if not 0.0 <= self.sparsity <= 1.0:
            raise ConfigurationError("sparsity must lie in [0, 1]")
        if not self.alpha_true > 0:
            raise ConfigurationError("alpha_true must be positive")
        if self.gamma_true is None:
            self.gamma_true = default_gamma(self.q)
        self.gamma_true = np.asarray(self.gamma_true, dtype=np.float64).ravel()
        if self.gamma_true.size != self.q:
            raise ConfigurationError("gamma_true must have length q")


def fourier_design(n: int, p: int, f: float = 0.7) -> np.ndarray:
    """Intercept plus cosine columns for i <= p//2 and sine columns above."""
    if n < 1 or p < 1:
        raise ConfigurationError("n and p must be >= 1")
    t = np.arange(1, n + 1, dtype=np.float64)
    x = np.ones((n, p + 1))
    half = p // 2
    for i in range(1, p + 1):
        angle = 2.0 * math.pi * i * t * f / n
        x[:, i] = np.cos(angle) if i <= half else np.sin(angle)
    return x


def draw_sparse_beta(cfg: SimConfig, seed: int | None = None) -> np.ndarray:
    """Sparse truth: round(sparsity*p) nonzeros among 1..p, uniform values.

    The intercept stays 0 so the count scale is set by alpha and the
    Fourier terms alone.
    """
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    k = int(math.floor(cfg.sparsity * cfg.p + 0.5))
    beta = np.zeros(cfg.p + 1)
    if k > 0:
        positions = rng.choice(np.arange(1, cfg.p + 1), size=k, replace=False)
        beta[positions] = rng.uniform(cfg.beta_range[0], cfg.beta_range[1], size=k)
    return beta


def simulate_series(cfg: SimConfig, beta_true, seed: int | None = None,
                    x: np.ndarray | None = None):
    """Sample one series from the generative model. Returns (y, x).

    W_t accumulates the feedback of past residuals, then
    Y_t ~ NB(exp(W_t), alpha) drawn as a gamma-Poisson mixture and the
    residual E_t = (Y_t - mu_t)/(mu_t + mu_t^2/alpha) is fed forward.
    """
    beta_true = np.asarray(beta_true, dtype=np.float64).ravel()
    if beta_true.size != cfg.p + 1:
        raise ConfigurationError(f"beta_true must have length {cfg.p + 1}")
    if x is None:
        x = fourier_design(cfg.n, cfg.p, cfg.f)
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    alpha = cfg.alpha_true
    gamma = cfg.gamma_true
    q = cfg.q

    bx = x @ beta_true
    y = np.empty(cfg.n, dtype=np.int64)
    e = np.empty(cfg.n)
    for t in range(cfg.n):
        w = bx[t]
        for j in range(1, min(q, t) + 1):
            w += gamma[j - 1] * e[t - j]
        mu = math.exp(w) if w < 710 else math.inf
        if not mu < MU_OVERFLOW:
            raise SimulationError(f"mean process exploded at t={t + 1} (mu={mu:.3g})")
        lam = rng.gamma(shape=alpha, scale=mu / alpha)
        y[t] = rng.poisson(lam)
        e[t] = (y[t] - mu) / (mu + mu * mu / alpha)
    return y, x

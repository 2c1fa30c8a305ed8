"""Support-recovery benchmark: four selection rules on shared simulations.

Each replicate draws a sparse truth, simulates a series, runs one
estimation pass (GLM initialization, Newton for the feedback
coefficients, quadratic approximation), then applies the selection rules
to the same quadratic problem:

    ss_cv      stability selection at the cross-validated lam
    ss_min     stability selection at the smallest grid lam
    lasso_cv   single lasso fit at the cross-validated lam
    lasso_best single lasso fit at the truth-oracle lam (upper bound,
               not usable in practice)

Thresholds only matter for the ss rules; lasso rows are repeated per
threshold so every (method, threshold, replicate) cell exists in the
output. Rows carry a status column instead of being dropped on failure.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, MetricsError, NbGlarmaError
from .glm import fit_nb_glm, reestimate
from .lasso import cross_validate, lambda_grid, lasso_path
from .newton import NewtonConfig, estimate_gamma
from .quadratic import build_quadratic
from .seeding import derive_seed
from .simulate import SimConfig, draw_sparse_beta, simulate_series
from .stability import selection_frequencies

METHODS = ("ss_cv", "ss_min", "lasso_cv", "lasso_best")
DEFAULT_THRESHOLDS = (0.5, 0.6, 0.7, 0.8, 0.9)


@dataclass
class EvalMetrics:
    tpr: float
    fpr: float
    threshold_used: float = math.nan
    runtime_seconds: float = math.nan


def tpr_fpr(selected, true_support, p: int, threshold_used: float = math.nan,
            runtime_seconds: float = math.nan) -> EvalMetrics:
    """True/false positive rates over covariate indices 1..p (no intercept)."""
    truth = {int(i) for i in true_support}
    if not truth:
        raise MetricsError("true support is empty; rates are undefined")
    sel = {int(i) for i in selected}
    for idx in truth | sel:
        if not 1 <= idx <= p:
            raise ConfigurationError(f"index {idx} outside 1..{p}")
    tpr = len(sel & truth) / len(truth)
    n_null = p - len(truth)
    fpr = len(sel - truth) / n_null if n_null > 0 else 0.0
    return EvalMetrics(tpr=tpr, fpr=fpr, threshold_used=threshold_used,
                       runtime_seconds=runtime_seconds)


def _covariates(indices) -> list[int]:
    return [int(i) for i in indices if i >= 1]


def _support_of(beta) -> list[int]:
    return [int(i) for i in np.flatnonzero(np.asarray(beta)[1:] != 0.0) + 1]


def _row(cfg: SimConfig, method, threshold, rep, metrics: EvalMetrics | None,
         gamma_hat, alpha_hat, runtime, status) -> dict:
    return {
        "n": cfg.n, "q": cfg.q, "p": cfg.p, "alpha_true": cfg.alpha_true,
        "sparsity": cfg.sparsity, "method": method, "threshold": threshold,
        "replicate": rep,
        "tpr": metrics.tpr if metrics else math.nan,
        "fpr": metrics.fpr if metrics else math.nan,
        "tpr_minus_fpr": metrics.tpr - metrics.fpr if metrics else math.nan,
        "gamma_hat": list(gamma_hat) if gamma_hat is not None else [math.nan] * cfg.q,
        "alpha_hat": alpha_hat, "runtime_s": runtime, "status": status,
    }


def _replicate_rows(cfg: SimConfig, methods, thresholds, n_subsamples, rep,
                    newton_cfg: NewtonConfig) -> list[dict]:
    seed_truth = derive_seed(cfg.seed, rep, 1)
    seed_series = derive_seed(cfg.seed, rep, 2)
    seed_select = derive_seed(cfg.seed, rep, 3)
    beta_true = draw_sparse_beta(cfg, seed_truth)
    y, x = simulate_series(cfg, beta_true, seed_series)
    truth = _support_of(beta_true)

    t0 = time.perf_counter()
    glm0 = fit_nb_glm(y, x, allow_singular=True)
    newton = estimate_gamma(glm0.beta_hat, glm0.alpha_hat, np.zeros(cfg.q), y, x, newton_cfg)
    qp = build_quadratic(glm0.beta_hat, newton.gamma_hat, glm0.alpha_hat, y, x)
    lambdas = lambda_grid(qp)
    shared_time = time.perf_counter() - t0

    cv_lambda = cv_time = None
    path = path_time = None
    if "ss_cv" in methods or "lasso_cv" in methods:
        t0 = time.perf_counter()
        cv_lambda, _, _ = cross_validate(qp, lambdas, folds=10, seed=seed_select)
        cv_time = time.perf_counter() - t0
    if "lasso_cv" in methods or "lasso_best" in methods:
        t0 = time.perf_counter()
        path = lasso_path(qp, lambdas)
        path_time = time.perf_counter() - t0

    rows = []
    for method in methods:
        t0 = time.perf_counter()
        if method in ("ss_cv", "ss_min"):
            lam = cv_lambda if method == "ss_cv" else float(lambdas.min())
            freq = selection_frequencies(qp, lam, n_subsamples, seed_select)
            base_time = shared_time + (cv_time if method == "ss_cv" else 0.0)
            stab_time = time.perf_counter() - t0
            for th in thresholds:
                t1 = time.perf_counter()
                selected = _covariates(np.flatnonzero(freq >= th))
                refit = reestimate(y, x, selected, allow_singular=True)
                metrics = tpr_fpr(selected, truth, cfg.p, threshold_used=th)
                runtime = base_time + stab_time + (time.perf_counter() - t1)
                rows.append(_row(cfg, method, th, rep, metrics, newton.gamma_hat,
                                 refit.alpha_hat, runtime, "ok"))
        else:
            if method == "lasso_cv":
                col = int(np.argmin(np.abs(path.lambdas - cv_lambda)))
                base_time = shared_time + cv_time + path_time
            elif method == "lasso_best":
                diffs = [
                    (lambda m: m.tpr - m.fpr)(
                        tpr_fpr(_covariates(np.flatnonzero(path.betas[:, j] != 0.0)),
                                truth, cfg.p))
                    for j in range(path.lambdas.size)
                ]
                col = int(np.argmax(diffs))
                base_time = shared_time + path_time
            else:
                raise ConfigurationError(f"unknown method {method!r}")
            selected = _covariates(np.flatnonzero(path.betas[:, col] != 0.0))
            refit = reestimate(y, x, selected, allow_singular=True)
            metrics = tpr_fpr(selected, truth, cfg.p)
            runtime = base_time + (time.perf_counter() - t0)
            for th in thresholds:
                rows.append(_row(cfg, method, th, rep, metrics, newton.gamma_hat,
                                 refit.alpha_hat, runtime, "ok"))
    return rows


def run_benchmark(cfg: SimConfig, methods=METHODS, thresholds=DEFAULT_THRESHOLDS,
                  n_subsamples: int = 1000, newton_cfg: NewtonConfig | None = None) -> list[dict]:
    """Tidy rows for every (method, threshold, replicate) of one (n, q) cell."""
    for m in methods:
        if m not in METHODS:
            raise ConfigurationError(f"unknown method {m!r}; choose from {METHODS}")
    if newton_cfg is None:
        newton_cfg = NewtonConfig()
    rows = []
    for rep in range(cfg.n_replicates):
        try:
            rows.extend(_replicate_rows(cfg, methods, thresholds, n_subsamples,
                                        rep, newton_cfg))
        except NbGlarmaError as exc:
            status = f"error:{type(exc).__name__}"
            for method in methods:
                for th in thresholds:
                    rows.append(_row(cfg, method, th, rep, None, None,
                                     math.nan, math.nan, status))
    return rows


def summarize(rows) -> list[dict]:
    """Per-cell means and standard deviations over the ok replicates."""
    cells: dict[tuple, list[dict]] = {}
    for r in rows:
        key = (r["n"], r["q"], r["p"], r["method"], r["threshold"])
        cells.setdefault(key, []).append(r)
    out = []
    for key in sorted(cells, key=str):
        group = cells[key]
        ok = [r for r in group if r["status"] == "ok"]
        summary = {
            "n": key[0], "q": key[1], "p": key[2], "method": key[3],
            "threshold": key[4], "n_replicates": len(group), "n_ok": len(ok),
        }
        for name in ("tpr", "fpr", "tpr_minus_fpr", "runtime_s"):
            vals = np.array([r[name] for r in ok])
            summary[f"{name}_mean"] = float(vals.mean()) if ok else math.nan
            summary[f"{name}_sd"] = float(vals.std(ddof=1)) if len(ok) > 1 else math.nan
        out.append(summary)
    return out

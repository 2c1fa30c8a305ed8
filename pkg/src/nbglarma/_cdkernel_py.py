"""Pure-Python twin of the compiled coordinate-descent kernel.

Same update sequence and arithmetic as _cdkernel.pyx (per-element numpy
operations mirror the C loops), so the two backends agree to the last
ulp on the same inputs. This one is selected at import time when the
extension is unavailable or NBGLARMA_BACKEND=py is set.
"""

import numpy as np


def _sweep(G, c, lam, beta, s, active_only):
    maxd = 0.0
    for j in range(c.size):
        bj = beta[j]
        if active_only and bj == 0.0:
            continue
        gjj = G[j, j]
        rho = c[j] - s[j] + gjj * bj
        if gjj <= 0.0:
            bnew = 0.0
        elif rho > lam:
            bnew = (rho - lam) / gjj
        elif rho < -lam:
            bnew = (rho + lam) / gjj
        else:
            bnew = 0.0
        delta = bnew - bj
        if delta != 0.0:
            s += delta * G[j]
            beta[j] = bnew
            ad = abs(delta)
            if ad > maxd:
                maxd = ad
    return maxd


def _solve(G, c, lam, beta, s, tol, max_sweeps):
    sweeps = 0
    while sweeps < max_sweeps:
        maxd = _sweep(G, c, lam, beta, s, False)
        sweeps += 1
        if maxd <= tol:
            return sweeps
        while sweeps < max_sweeps:
            maxd = _sweep(G, c, lam, beta, s, True)
            sweeps += 1
            if maxd <= tol:
                break
    return sweeps


def _init_s(G, beta):
    s = np.zeros(beta.size)
    for k in range(beta.size):
        bk = beta[k]
        if bk != 0.0:
            s += G[k] * bk
    return s


def cd_solve(G, c, lam, beta0, tol, max_sweeps):
    """Solve at a single lam from a warm start. Returns (beta, sweeps)."""
    G = np.ascontiguousarray(G, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    beta = np.array(beta0, dtype=np.float64, copy=True)
    s = _init_s(G, beta)
    sweeps = _solve(G, c, float(lam), beta, s, float(tol), int(max_sweeps))
    return beta, sweeps


def cd_path(G, c, lambdas, tol, max_sweeps):
    """Warm-started path over a decreasing lam grid. Returns (betas, sweeps).

    betas has shape (p, n_lambdas); max_sweeps applies per grid point.
    """
    G = np.ascontiguousarray(G, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    lams = np.ascontiguousarray(lambdas, dtype=np.float64)
    p = c.size
    betas = np.zeros((p, lams.size))
    beta = np.zeros(p)
    s = np.zeros(p)
    total = 0
    for l in range(lams.size):
        total += _solve(G, c, float(lams[l]), beta, s, float(tol), int(max_sweeps))
        betas[:, l] = beta
    return betas, total

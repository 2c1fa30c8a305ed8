# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cyclic coordinate descent for 0.5||Y - X b||^2 + lam ||b||_1.

Works on the Gram form (G = X'X, c = X'Y) with covariance updates: the
vector s = G b is maintained incrementally so each coordinate update is
O(p) only when the coordinate actually moves. A full sweep alternates
with active-set sweeps until a full sweep leaves every coordinate stable
within tol, which bounds the KKT violation by tol * max_j sum_k |G_jk|.

The pure-Python twin in _cdkernel_py.py performs the identical update
sequence; keep the two in sync.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef double _sweep(double[:, ::1] G, double[::1] c, double lam,
                   double[::1] beta, double[::1] s, Py_ssize_t p,
                   bint active_only) noexcept nogil:
    cdef Py_ssize_t j, k
    cdef double gjj, rho, bnew, delta, ad
    cdef double maxd = 0.0
    for j in range(p):
        if active_only and beta[j] == 0.0:
            continue
        gjj = G[j, j]
        rho = c[j] - s[j] + gjj * beta[j]
        if gjj <= 0.0:
            bnew = 0.0
        elif rho > lam:
            bnew = (rho - lam) / gjj
        elif rho < -lam:
            bnew = (rho + lam) / gjj
        else:
            bnew = 0.0
        delta = bnew - beta[j]
        if delta != 0.0:
            for k in range(p):
                s[k] += delta * G[j, k]
            beta[j] = bnew
            ad = delta if delta >= 0.0 else -delta
            if ad > maxd:
                maxd = ad
    return maxd


cdef Py_ssize_t _solve(double[:, ::1] G, double[::1] c, double lam,
                       double[::1] beta, double[::1] s, Py_ssize_t p,
                       double tol, Py_ssize_t max_sweeps) noexcept nogil:
    cdef double maxd
    cdef Py_ssize_t sweeps = 0
    while sweeps < max_sweeps:
        maxd = _sweep(G, c, lam, beta, s, p, 0)
        sweeps += 1
        if maxd <= tol:
            return sweeps
        while sweeps < max_sweeps:
            maxd = _sweep(G, c, lam, beta, s, p, 1)
            sweeps += 1
            if maxd <= tol:
                break
    return sweeps


cdef void _init_s(double[:, ::1] G, double[::1] beta, double[::1] s,
                  Py_ssize_t p) noexcept nogil:
    cdef Py_ssize_t j, k
    cdef double bk
    for j in range(p):
        s[j] = 0.0
    for k in range(p):
        bk = beta[k]
        if bk != 0.0:
            for j in range(p):
                s[j] += G[k, j] * bk


def cd_solve(G, c, double lam, beta0, double tol, Py_ssize_t max_sweeps):
    """Solve at a single lam from a warm start. Returns (beta, sweeps)."""
    cdef cnp.ndarray[double, ndim=2, mode="c"] Ga = np.ascontiguousarray(G, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] beta = np.array(beta0, dtype=np.float64, copy=True)
    cdef Py_ssize_t p = ca.shape[0]
    cdef cnp.ndarray[double, ndim=1, mode="c"] s = np.empty(p, dtype=np.float64)
    _init_s(Ga, beta, s, p)
    cdef Py_ssize_t sweeps = _solve(Ga, ca, lam, beta, s, p, tol, max_sweeps)
    return beta, int(sweeps)


def cd_path(G, c, lambdas, double tol, Py_ssize_t max_sweeps):
    """Warm-started path over a decreasing lam grid. Returns (betas, sweeps).

    betas has shape (p, n_lambdas); max_sweeps applies per grid point.
    """
    cdef cnp.ndarray[double, ndim=2, mode="c"] Ga = np.ascontiguousarray(G, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] ca = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] lams = np.ascontiguousarray(lambdas, dtype=np.float64)
    cdef Py_ssize_t p = ca.shape[0]
    cdef Py_ssize_t nlam = lams.shape[0]
    cdef cnp.ndarray[double, ndim=2, mode="c"] betas = np.zeros((p, nlam), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] beta = np.zeros(p, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] s = np.zeros(p, dtype=np.float64)
    cdef Py_ssize_t l
    cdef Py_ssize_t total = 0
    for l in range(nlam):
        total += _solve(Ga, ca, lams[l], beta, s, p, tol, max_sweeps)
        betas[:, l] = beta
    return betas, int(total)

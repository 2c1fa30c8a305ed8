"""Predictor and likelihood derivatives against finite-difference oracles."""

import numpy as np
import pytest

from nbglarma.derivatives import (
    likelihood_gradient,
    likelihood_hessian,
    w_first_derivatives,
    w_second_derivatives,
)
from nbglarma.model import GlarmaParams, compute_state, log_likelihood

from .oracles import fd_gradient, fd_jacobian, glarma_w, nb_glm_score_information, random_instance


def _split(delta, p1):
    return delta[:p1], delta[p1:]


class TestFirstDerivatives:
    def test_base_cases(self):
        params, y, x = random_instance(0)
        dw = w_first_derivatives(params, y, x)
        p1 = x.shape[1]
        np.testing.assert_array_equal(dw[0, :p1], x[0])
        np.testing.assert_array_equal(dw[0, p1:], 0.0)

    def test_second_row_gamma_is_lagged_residual(self):
        params, y, x = random_instance(1, q_max=2)
        state = compute_state(params, y, x)
        dw = w_first_derivatives(params, y, x, state, "gamma")
        assert dw[1, 0] == state.e[0]
        if params.q > 1:
            assert dw[1, 1] == 0.0

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_finite_differences(self, seed):
        params, y, x = random_instance(seed, n_max=20, p_max=3, q_max=2)
        p1 = x.shape[1]
        dw = w_first_derivatives(params, y, x)

        def wmap(delta):
            b, g = _split(delta, p1)
            return glarma_w(GlarmaParams(b, g, params.alpha), y, x)

        fd = fd_jacobian(wmap, params.delta, h=1e-6)
        scale = max(np.max(np.abs(fd)), 1.0)
        assert np.max(np.abs(dw - fd)) / scale < 1e-5


class TestSecondDerivatives:
    def test_base_cases_exact_zero(self):
        params, y, x = random_instance(2, q_max=2)
        d2 = w_second_derivatives(params, y, x)
        p1 = x.shape[1]
        assert np.all(d2[0] == 0.0)
        # gamma-gamma block is exactly zero at t = 2 as well
        assert np.all(d2[1, p1:, p1:] == 0.0)

    def test_symmetry(self):
        params, y, x = random_instance(4)
        d2 = w_second_derivatives(params, y, x)
        np.testing.assert_array_equal(d2, np.transpose(d2, (0, 2, 1)))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_finite_differences_of_dw(self, seed):
        params, y, x = random_instance(100 + seed, n_max=15, p_max=2, q_max=2)
        p1 = x.shape[1]
        d2 = w_second_derivatives(params, y, x)

        def dwmap(delta):
            b, g = _split(delta, p1)
            return w_first_derivatives(GlarmaParams(b, g, params.alpha), y, x)

        fd = fd_jacobian(dwmap, params.delta, h=1e-4)
        scale = max(np.max(np.abs(fd)), 1.0)
        assert np.max(np.abs(d2 - fd)) / scale < 1e-3

    def test_blocks_agree_with_full(self):
        params, y, x = random_instance(42)
        p1 = x.shape[1]
        full = w_second_derivatives(params, y, x)
        bb = w_second_derivatives(params, y, x, block="beta")
        gg = w_second_derivatives(params, y, x, block="gamma")
        np.testing.assert_allclose(full[:, :p1, :p1], bb, rtol=1e-12)
        np.testing.assert_allclose(full[:, p1:, p1:], gg, rtol=1e-12)


class TestLikelihoodDerivatives:
    def test_gradient_zero_at_fitted_means(self):
        # Y_t = exp(W_t) for all t makes every score weight vanish
        beta = np.array([np.log(4.0)])
        x = np.ones((12, 1))
        y = np.full(12, 4)
        g = likelihood_gradient(GlarmaParams(beta, [0.3], 2.0), y, x)
        np.testing.assert_allclose(g, 0.0, atol=1e-12)

    def test_glm_reduction_at_zero_gamma(self):
        params, y, x = random_instance(21)
        p1 = x.shape[1]
        glm_params = GlarmaParams(params.beta, np.zeros(params.q), params.alpha)
        g = likelihood_gradient(glm_params, y, x, "beta")
        h = likelihood_hessian(glm_params, y, x, "beta")
        score, info = nb_glm_score_information(params.beta, params.alpha, y, x)
        np.testing.assert_allclose(g, score, rtol=1e-8)
        np.testing.assert_allclose(h, -info, rtol=1e-8)

    def test_intercept_only_hessian_hand_formula(self):
        beta = np.array([0.4])
        alpha = 1.7
        x = np.ones((20, 1))
        y = np.random.default_rng(3).poisson(2.0, size=20)
        h = likelihood_hessian(GlarmaParams(beta, [0.0], alpha), y, x, "beta")
        mu = np.exp(0.4)
        expected = -np.sum((alpha + y) * alpha * mu / (alpha + mu) ** 2)
        assert h[0, 0] == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("seed", range(20))
    def test_gradient_matches_finite_differences(self, seed):
        params, y, x = random_instance(200 + seed, n_max=50, p_max=5, q_max=2)
        p1 = x.shape[1]
        g = likelihood_gradient(params, y, x)

        def ll(delta):
            b, gam = _split(delta, p1)
            return log_likelihood(GlarmaParams(b, gam, params.alpha), y, x)

        fd = fd_gradient(ll, params.delta, h=1e-6)
        scale = max(np.max(np.abs(fd)), 1.0)
        assert np.max(np.abs(g - fd)) / scale < 1e-5

    @pytest.mark.parametrize("seed", range(8))
    def test_hessian_matches_gradient_differences(self, seed):
        params, y, x = random_instance(300 + seed, n_max=30, p_max=3, q_max=2)
        p1 = x.shape[1]
        h = likelihood_hessian(params, y, x)

        def grad(delta):
            b, gam = _split(delta, p1)
            return likelihood_gradient(GlarmaParams(b, gam, params.alpha), y, x)

        fd = fd_jacobian(grad, params.delta, h=1e-4)
        scale = max(np.max(np.abs(fd)), 1.0)
        assert np.max(np.abs(h - fd)) / scale < 1e-3

    def test_hessian_symmetric(self):
        params, y, x = random_instance(31)
        h = likelihood_hessian(params, y, x)
        assert np.max(np.abs(h - h.T)) < 1e-10 * max(np.max(np.abs(h)), 1.0)

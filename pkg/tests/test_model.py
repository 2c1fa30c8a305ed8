"""Model core: state recursion, NB pmf, conditional log-likelihood."""

import math

import numpy as np
import pytest

from nbglarma.errors import ConfigurationError
from nbglarma.model import (
    GlarmaParams,
    compute_state,
    log_likelihood,
    nb_log_pmf,
    validate_counts,
    validate_design,
)

from .oracles import nb_log_pmf_mpmath, poisson_glarma_loglik, poisson_log_pmf, random_instance


class TestValidation:
    def test_counts_reject_negative(self):
        with pytest.raises(ConfigurationError):
            validate_counts([1, -2, 3])

    def test_counts_reject_fractional(self):
        with pytest.raises(ConfigurationError):
            validate_counts([1.0, 2.5])

    def test_counts_accept_integral_floats(self):
        assert validate_counts([1.0, 2.0]).dtype == np.int64

    def test_design_requires_intercept_column(self):
        with pytest.raises(ConfigurationError):
            validate_design(np.array([[1.0, 2.0], [0.5, 3.0]]))

    def test_design_row_count_must_match(self):
        with pytest.raises(ConfigurationError):
            validate_design(np.ones((3, 2)), n_obs=4)

    def test_params_require_positive_alpha(self):
        with pytest.raises(ConfigurationError):
            GlarmaParams([0.0], [0.1], 0.0)

    def test_params_require_nonempty_gamma(self):
        with pytest.raises(ConfigurationError):
            GlarmaParams([0.0], [], 1.0)


class TestComputeState:
    def test_zero_gamma_gives_pure_glm_predictor(self):
        rng = np.random.default_rng(1)
        x = np.hstack([np.ones((40, 1)), rng.normal(size=(40, 3))])
        beta = rng.normal(size=4)
        y = rng.poisson(2.0, size=40)
        st = compute_state(GlarmaParams(beta, [0.0, 0.0], 1.5), y, x)
        np.testing.assert_allclose(st.w, x @ beta, rtol=1e-14)

    def test_single_step_example(self):
        # beta'x_1 = 0, Y_1 = 2, alpha = 1: W_1 = 0, E_1 = (2 - 1)/(1 + 1)
        st = compute_state(GlarmaParams([0.0, 0.0], [0.5], 1.0), [2], [[1.0, 0.0]])
        assert st.w[0] == 0.0
        assert st.e[0] == 0.5

    def test_residual_vanishes_at_fitted_mean(self):
        # Y_t = exp(W_t) exactly -> E_t = 0 for all t
        beta = np.array([math.log(3.0)])
        x = np.ones((10, 1))
        y = np.full(10, 3)
        st = compute_state(GlarmaParams(beta, [0.4], 2.0), y, x)
        np.testing.assert_allclose(st.e, 0.0, atol=1e-15)
        np.testing.assert_allclose(st.mu, 3.0, rtol=1e-15)

    def test_eq3_equivalence_at_zero_gamma(self):
        # E_t = (Y_t - mu_t)/(mu_t + mu_t^2/alpha) in the direct parameterization
        rng = np.random.default_rng(7)
        x = np.hstack([np.ones((30, 1)), rng.normal(size=(30, 2))])
        beta = rng.normal(scale=0.5, size=3)
        alpha = 1.3
        y = rng.poisson(3.0, size=30)
        st = compute_state(GlarmaParams(beta, [0.0], alpha), y, x)
        mu = np.exp(x @ beta)
        np.testing.assert_allclose(st.e, (y - mu) / (mu + mu**2 / alpha), rtol=1e-12)

    def test_causality(self):
        # changing Y_s moves W_t only for t > s and E_t only for t >= s
        params, y, x = random_instance(3)
        st = compute_state(params, y, x)
        y2 = y.copy()
        s = 10
        y2[s] += 5
        st2 = compute_state(params, y2, x)
        np.testing.assert_array_equal(st.w[: s + 1], st2.w[: s + 1])
        np.testing.assert_array_equal(st.e[:s], st2.e[:s])
        assert st.e[s] != st2.e[s]
        assert np.any(st.w[s + 1:] != st2.w[s + 1:])


class TestNbLogPmf:
    def test_zero_count_zero_predictor(self):
        assert nb_log_pmf(0, 0.0, 1.0) == pytest.approx(-math.log(2.0), abs=1e-12)

    def test_zero_count_closed_form(self):
        for w in (-1.0, 0.3, 2.0):
            for alpha in (0.5, 2.0, 7.0):
                expected = alpha * math.log(alpha) - alpha * math.log(alpha + math.exp(w))
                assert nb_log_pmf(0, w, alpha) == pytest.approx(expected, rel=1e-12)

    def test_against_arbitrary_precision_oracle(self):
        assert nb_log_pmf(3, 0.2, 2.0) == pytest.approx(
            nb_log_pmf_mpmath(3, 0.2, 2.0), rel=1e-12
        )

    @pytest.mark.parametrize("y,w,alpha", [(0, -1.0, 0.7), (5, 1.2, 3.0), (17, 2.5, 0.9)])
    def test_oracle_grid(self, y, w, alpha):
        assert nb_log_pmf(y, w, alpha) == pytest.approx(
            nb_log_pmf_mpmath(y, w, alpha), rel=1e-12
        )

    def test_normalization_tail(self):
        # pmf sums to 1 with tail mass below 1e-9 at desk parameters
        for w, alpha in [(0.0, 1.0), (1.5, 2.0), (2.0, 0.5)]:
            ys = np.arange(0, 4000)
            total = np.exp(nb_log_pmf(ys, w, alpha)).sum()
            assert abs(total - 1.0) < 1e-9

    def test_poisson_limit(self):
        alpha = 1e8
        for w in (-3.0, 0.0, 1.0, 3.0):
            for y in (0, 1, 5, 20, 50):
                assert abs(nb_log_pmf(y, w, alpha) - poisson_log_pmf(y, w)) < 1e-3

    def test_rejects_negative_count(self):
        with pytest.raises(ConfigurationError):
            nb_log_pmf(-1, 0.0, 1.0)


class TestLogLikelihood:
    def test_single_term(self):
        params = GlarmaParams([0.0], [0.0], 1.0)
        assert log_likelihood(params, [0], [[1.0]]) == pytest.approx(-math.log(2.0))

    def test_zero_gamma_reduces_to_glm(self):
        rng = np.random.default_rng(5)
        x = np.hstack([np.ones((25, 1)), rng.normal(size=(25, 2))])
        beta = rng.normal(scale=0.4, size=3)
        y = rng.poisson(2.0, size=25)
        ll = log_likelihood(GlarmaParams(beta, [0.0, 0.0], 2.0), y, x)
        direct = float(np.sum(nb_log_pmf(y, x @ beta, 2.0)))
        assert ll == pytest.approx(direct, rel=1e-14)

    def test_poisson_limit_glarma(self):
        params, y, x = random_instance(11, n_max=50)
        big = GlarmaParams(params.beta, params.gamma, 1e8)
        oracle = poisson_glarma_loglik(params.beta, params.gamma, y, x)
        assert abs(log_likelihood(big, y, x) - oracle) < 1e-3

    def test_column_permutation_invariance(self):
        params, y, x = random_instance(13)
        p1 = x.shape[1]
        perm = np.concatenate([[0], 1 + np.random.default_rng(0).permutation(p1 - 1)])
        ll = log_likelihood(params, y, x)
        ll_perm = log_likelihood(
            GlarmaParams(params.beta[perm], params.gamma, params.alpha), y, x[:, perm]
        )
        assert ll_perm == pytest.approx(ll, rel=1e-14)

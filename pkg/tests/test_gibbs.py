"""Gibbs driver: conditional wrappers, cycle semantics, invariance."""

import math
from functools import partial

import numpy as np
import pytest
from scipy.stats import norm

from unigibbs import (
    GibbsState,
    InvalidStartError,
    LogisticData,
    RngStream,
    UnivariateTarget,
    conditional_eval,
    conditional_grad,
    gibbs_cycle,
    ks_stat,
    logistic_log_posterior,
    logistic_log_posterior_grad,
    make_control,
    run_chain,
    simulate_logistic_data,
    slice_step,
)

from conftest import central_diff_1d, ks_critical


def sq_norm_density(x):
    return -0.5 * float(np.dot(x, x))


def sq_norm_grad(x):
    return -np.asarray(x, dtype=float)


def bivariate_gauss(rho):
    prec = np.linalg.inv(np.array([[1.0, rho], [rho, 1.0]]))

    def f(x):
        return -0.5 * float(x @ prec @ x)

    def fg(x):
        return -(prec @ x)

    return f, fg


class TestConditionalEval:
    def test_substitution(self):
        assert conditional_eval(sq_norm_density, np.zeros(2), 0, 3.0) == -4.5

    def test_identity_replacement(self):
        x = np.array([1.0, 2.0])
        assert conditional_eval(sq_norm_density, x, 1, 2.0) == sq_norm_density(x)

    def test_matches_manual_replacement(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(1, 8))
            a = rng.normal(size=(n, n))
            psd = a @ a.T

            def f(v):
                return -0.5 * float(v @ psd @ v)

            x = rng.normal(size=n)
            k = int(rng.integers(0, n))
            xk = float(rng.normal())
            replaced = x.copy()
            replaced[k] = xk
            assert conditional_eval(f, x, k, xk) == f(replaced)

    def test_equals_joint_at_current_value(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            x = rng.normal(size=4)
            k = int(rng.integers(0, 4))
            assert conditional_eval(sq_norm_density, x, k, x[k]) == sq_norm_density(x)

    def test_caller_array_not_mutated(self):
        x = np.array([1.0, 2.0, 3.0])
        conditional_eval(sq_norm_density, x, 0, 99.0)
        assert np.array_equal(x, [1.0, 2.0, 3.0])

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            conditional_eval(sq_norm_density, np.zeros(2), 2, 0.0)
        with pytest.raises(IndexError):
            conditional_grad(sq_norm_grad, np.zeros(2), -1, 0.0)


class TestConditionalGrad:
    def test_substitution(self):
        assert conditional_grad(sq_norm_grad, np.zeros(2), 0, 3.0) == -3.0

    def test_zero_at_origin(self):
        assert conditional_grad(sq_norm_grad, np.zeros(2), 1, 0.0) == 0.0

    def test_matches_finite_differences_on_logistic(self):
        rng = RngStream(12)
        X, _bt, y = simulate_logistic_data(60, 3, rng)
        data = LogisticData(X, y, sigma=10.0)
        f = partial(logistic_log_posterior, data=data)
        fg = partial(logistic_log_posterior_grad, data=data)
        check = np.random.default_rng(9)
        for _ in range(50):
            x = check.normal(size=3)
            k = int(check.integers(0, 3))
            xk = float(check.normal())
            got = conditional_grad(fg, x, k, xk)
            want = central_diff_1d(lambda v: conditional_eval(f, x, k, v), xk)
            assert got == pytest.approx(want, rel=1e-5, abs=1e-8)


class TestGibbsCycle:
    def test_single_coordinate_reduces_to_slice_step(self):
        control = make_control(1)
        for seed in (0, 5, 17):
            state = GibbsState(np.array([0.3]))
            out = gibbs_cycle(state, sq_norm_density, control, RngStream(seed))
            target = UnivariateTarget(lambda v: -0.5 * v * v)
            direct = slice_step(target, 0.3, 1.0, 0, RngStream(seed))
            assert out.x[0] == direct
            assert out.cycle_count == 1

    def test_correlated_gaussian_covariance(self):
        f, _ = bivariate_gauss(0.9)
        control = make_control(2)
        rng = RngStream(3)
        chain = run_chain(np.zeros(2), f, control, 20_000, rng)
        cov = np.cov(chain.draws.T)
        target = np.array([[1.0, 0.9], [0.9, 1.0]])
        assert np.max(np.abs(cov - target)) < 0.05

    def test_zero_density_start_names_coordinate(self):
        control = make_control(2)
        with pytest.raises(InvalidStartError, match="coordinate 0"):
            gibbs_cycle(GibbsState(np.zeros(2)), lambda x: -math.inf, control, RngStream(0))

    def test_sequential_update_within_cycle(self):
        # evaluations for the second coordinate must already see the first
        # coordinate's fresh value
        seen = []

        def recording(x):
            seen.append(x.copy())
            return sq_norm_density(x)

        x0 = np.array([10.0, 20.0])
        out = gibbs_cycle(GibbsState(x0), recording, make_control(2), RngStream(1))
        assert out.x[0] != 10.0 and out.x[1] != 20.0
        second_step = [v for v in seen if v[1] != 20.0]
        assert second_step, "no evaluations recorded for the second coordinate"
        for v in second_step:
            assert v[0] == out.x[0]

    def test_mixed_engines(self):
        f, fg = bivariate_gauss(0.5)
        control = make_control(2, engine=["slice", "ars"])
        rng = RngStream(7)
        chain = run_chain(np.zeros(2), f, control, 4000, rng, fg=fg)
        assert np.max(np.abs(chain.draws.mean(axis=0))) < 0.08

    def test_ars_requires_gradient(self):
        control = make_control(1, engine="ars")
        with pytest.raises(ValueError, match="gradient"):
            gibbs_cycle(GibbsState(np.zeros(1)), sq_norm_density, control, RngStream(0))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dims"):
            gibbs_cycle(GibbsState(np.zeros(3)), sq_norm_density, make_control(2), RngStream(0))

    def test_invariance_of_joint_distribution(self):
        # start a population of points as exact draws from the bivariate
        # normal; one full cycle each must preserve both marginals and the
        # correlation
        rho = 0.9
        n = 5000
        f, _ = bivariate_gauss(rho)
        control = make_control(2)
        rng = RngStream(21)
        z = rng.normal(size=(n, 2))
        pts = np.column_stack([z[:, 0], rho * z[:, 0] + math.sqrt(1 - rho * rho) * z[:, 1]])
        out = np.empty_like(pts)
        for i in range(n):
            out[i] = gibbs_cycle(GibbsState(pts[i]), f, control, rng).x
        crit = ks_critical(n, 0.001)
        assert ks_stat(out[:, 0], norm.cdf) < crit
        assert ks_stat(out[:, 1], norm.cdf) < crit
        assert abs(np.corrcoef(out.T)[0, 1] - rho) < 0.04


class TestRunChain:
    def test_shape_and_names(self):
        rng = RngStream(0)
        X, _bt, y = simulate_logistic_data(200, 5, rng)
        data = LogisticData(X, y)
        f = partial(logistic_log_posterior, data=data)
        chain = run_chain(np.zeros(5), f, make_control(5), 100, rng)
        assert chain.draws.shape == (100, 5)
        assert chain.names == ("x1", "x2", "x3", "x4", "x5")

    def test_single_sample_equals_one_cycle(self):
        control = make_control(2)
        chain = run_chain(np.zeros(2), sq_norm_density, control, 1, RngStream(9))
        cycle = gibbs_cycle(GibbsState(np.zeros(2)), sq_norm_density, control, RngStream(9))
        assert np.array_equal(chain.draws[0], cycle.x)

    def test_reproducible(self):
        control = make_control(2)
        a = run_chain(np.zeros(2), sq_norm_density, control, 50, RngStream(4))
        b = run_chain(np.zeros(2), sq_norm_density, control, 50, RngStream(4))
        assert np.array_equal(a.draws, b.draws)
        assert a.seed == b.seed == 4

    def test_invalid_sample_count(self):
        with pytest.raises(ValueError):
            run_chain(np.zeros(1), sq_norm_density, make_control(1), 0, RngStream(0))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbnorm import (
    InsufficientDataError,
    InvalidParameterError,
    KernelSpec,
    ShapeError,
    gamma_null_params,
    gram_matrix,
    hsic_b,
    hsic_independence_test,
    median_heuristic,
    permutation_independence_test,
)
from kbnorm.special import gamma_quantile

from oracles import explicit_hsic

# (1 - exp(-1/2))^2 / 4 via mpmath
HSIC_TWO_POINTS = 0.0387045304365438685969811750448
ONE = KernelSpec.fixed(1.0)


def test_constant_y_gives_zero(rng):
    X = rng.normal(size=(30, 2))
    assert hsic_b(X, np.ones((30, 3)), ky=ONE) == pytest.approx(0.0, abs=1e-12)


def test_two_point_closed_form():
    assert hsic_b([0.0, 1.0], [0.0, 1.0], ONE, ONE) == pytest.approx(HSIC_TWO_POINTS, abs=1e-15)


@pytest.mark.parametrize("seed", range(8))
def test_matches_explicit_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 40))
    X = rng.normal(size=(n, 2))
    Y = X[:, :1] ** 2 + rng.normal(size=(n, 1))
    expected = explicit_hsic(X, Y, median_heuristic(X), median_heuristic(Y))
    assert hsic_b(X, Y) == pytest.approx(expected, abs=1e-10)


def test_symmetry_and_joint_permutation(rng):
    X = rng.normal(size=(40, 3))
    Y = np.sin(X[:, :2]) + 0.3 * rng.normal(size=(40, 2))
    kx, ky = KernelSpec.fixed(1.3), KernelSpec()
    base = hsic_b(X, Y, kx, ky)
    assert hsic_b(Y, X, ky, kx) == pytest.approx(base, abs=1e-12)
    perm = rng.permutation(40)
    assert hsic_b(X[perm], Y[perm], kx, ky) == pytest.approx(base, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 30))
def test_nonnegative(seed, n):
    rng = np.random.default_rng(seed)
    assert hsic_b(rng.normal(size=(n, 2)), rng.standard_cauchy(size=(n, 1))) >= 0.0


def test_row_mismatch(rng):
    with pytest.raises(ShapeError):
        hsic_b(rng.normal(size=(5, 1)), rng.normal(size=(6, 1)))


class TestGammaNull:
    def test_shape_times_scale_is_n_times_mean(self, rng):
        X, Y = rng.normal(size=(2, 50, 2))
        K, L = gram_matrix(X), gram_matrix(Y)
        params = gamma_null_params(K, L)
        n = 50
        mu_x = (K.sum() - n) / (n * (n - 1))
        mu_y = (L.sum() - n) / (n * (n - 1))
        mean = (1 + mu_x * mu_y - mu_x - mu_y) / n
        assert params.shape * params.scale == pytest.approx(n * mean, rel=1e-12)

    def test_too_small(self):
        with pytest.raises(InsufficientDataError):
            gamma_null_params(np.eye(5), np.eye(5))

    def test_scale_invariant_with_median_kernels(self, rng):
        X = rng.normal(size=(80, 3)) * [1.0, 5.0, 0.2] + 3.0
        Y = rng.exponential(size=(80, 2))
        raw = gamma_null_params(gram_matrix(X), gram_matrix(Y))
        Xs = (X - X.mean(0)) / X.std(0).mean()
        Ys = (Y - Y.mean(0)) / Y.std(0).mean()
        std = gamma_null_params(gram_matrix(Xs), gram_matrix(Ys))
        assert std.shape == pytest.approx(raw.shape, rel=1e-9)
        assert std.scale == pytest.approx(raw.scale, rel=1e-9)


class TestIndependenceTest:
    def test_outcome_contract(self, rng):
        X, Y = rng.normal(size=(2, 120, 2))
        out = hsic_independence_test(X, Y, 0.05)
        assert out.statistic == pytest.approx(120 * hsic_b(X, Y), rel=1e-12)
        assert out.threshold == pytest.approx(gamma_quantile(out.null_params, 0.95), rel=1e-12)
        assert out.reject == (out.statistic > out.threshold) == (out.p_value < 0.05)

    def test_perfect_dependence_rejects(self, rng):
        X = rng.normal(size=(200, 2))
        out = hsic_independence_test(X, X.copy())
        assert out.reject
        perm = permutation_independence_test(X, X.copy(), shuffles=200, seed=1)
        assert perm.reject

    def test_threshold_monotone_in_alpha(self, rng):
        X, Y = rng.normal(size=(2, 60, 1))
        assert hsic_independence_test(X, Y, 0.5).threshold < hsic_independence_test(X, Y, 0.05).threshold

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
    def test_bad_alpha(self, rng, alpha):
        X, Y = rng.normal(size=(2, 20, 1))
        with pytest.raises(InvalidParameterError):
            hsic_independence_test(X, Y, alpha)


class TestPermutation:
    def test_dependent_pair_minimal_p(self, rng):
        X = rng.normal(size=(80, 2))
        out = permutation_independence_test(X, 2 * X + 1, shuffles=199, seed=3)
        assert out.p_value == 1 / 200
        assert out.reject and out.statistic > out.threshold

    def test_deterministic(self, rng):
        X, Y = rng.normal(size=(2, 50, 2))
        a = permutation_independence_test(X, Y, shuffles=150, seed=9)
        b = permutation_independence_test(X, Y, shuffles=150, seed=9)
        assert a == b

    def test_reject_matches_threshold(self):
        for seed in range(25):
            rng = np.random.default_rng(seed)
            X = rng.normal(size=(30, 1))
            Y = 0.4 * X + rng.normal(size=(30, 1))
            out = permutation_independence_test(X, Y, alpha=0.1, shuffles=100, seed=seed)
            assert out.reject == (out.statistic > out.threshold) == (out.p_value < 0.1)

    def test_too_few_shuffles(self, rng):
        X, Y = rng.normal(size=(2, 20, 1))
        with pytest.raises(InvalidParameterError):
            permutation_independence_test(X, Y, shuffles=50)

    def test_null_p_values_roughly_uniform(self):
        from scipy.stats import kstest

        pvals = []
        for seed in range(200):
            rng = np.random.default_rng(1000 + seed)
            X, Y = rng.normal(size=(2, 40, 2))
            pvals.append(permutation_independence_test(X, Y, shuffles=100, seed=seed).p_value)
        assert kstest(pvals, "uniform").statistic < 0.1

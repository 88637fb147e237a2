"""HSIC independence test with a gamma-approximated null and a permutation oracle."""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateNullError, InsufficientDataError, InvalidParameterError, ShapeError
from .kernels import KernelSpec, as_sample, center_gram, gram_matrix
from .outcome import PermutationNull, TestOutcome
from .special import GammaParams, gamma_quantile, gamma_sf

_MEDIAN = KernelSpec()


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def paired(X, Y):
    X = as_sample(X, "X")
    Y = as_sample(Y, "Y")
    if X.shape[0] != Y.shape[0]:
        raise ShapeError(f"X and Y need equal row counts, got {X.shape[0]} and {Y.shape[0]}")
    if X.shape[0] < 2:
        raise InsufficientDataError("a paired sample needs at least 2 rows")
    return X, Y


def _centered_grams(X, Y, kx, ky):
    K = gram_matrix(X, kx)
    L = gram_matrix(Y, ky)
    return K, L, center_gram(K), center_gram(L)


def _hsic_from_centered(Kc, Lc) -> float:
    n = Kc.shape[0]
    # Tr(HKH HLH) for symmetric matrices is the elementwise product sum
    value = float(np.sum(Kc * Lc)) / (n * n)
    return 0.0 if value < 1e-12 and value > -1e-12 else value


def hsic_b(X, Y, kx: KernelSpec = _MEDIAN, ky: KernelSpec = _MEDIAN) -> float:
    """Biased HSIC estimate (1/n^2) Tr(K H L H)."""
    X, Y = paired(X, Y)
    _, _, Kc, Lc = _centered_grams(X, Y, kx, ky)
    return max(_hsic_from_centered(Kc, Lc), 0.0)


def gamma_null_params(K, L) -> GammaParams:
    """Two-moment gamma fit to the null law of n * HSIC_b.

    Mean and variance estimators follow Gretton et al. (2008).
    """
    K = np.asarray(K, dtype=float)
    L = np.asarray(L, dtype=float)
    if K.shape != L.shape or K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ShapeError(f"K and L must be equal square matrices, got {K.shape}, {L.shape}")
    n = K.shape[0]
    if n < 6:
        raise InsufficientDataError(f"gamma null needs n >= 6, got n={n}")
    return _gamma_params(K, L, center_gram(K), center_gram(L))


def _gamma_params(K, L, Kc, Lc) -> GammaParams:
    n = K.shape[0]
    pairs = n * (n - 1)
    mu_x = (K.sum() - np.trace(K)) / pairs
    mu_y = (L.sum() - np.trace(L)) / pairs
    mean = (1.0 + mu_x * mu_y - mu_x - mu_y) / n

    B = (Kc * Lc) ** 2
    var = (B.sum() - np.trace(B)) / pairs
    var *= 2.0 * (n - 4) * (n - 5) / (n * (n - 1.0) * (n - 2.0) * (n - 3.0))
    if not (mean > 0 and var > 0):
        raise DegenerateNullError(f"null moments not positive (mean={mean}, var={var})")
    return GammaParams(shape=float(mean * mean / var), scale=float(n * var / mean))


def hsic_independence_test(
    X, Y, alpha: float = 0.05, kx: KernelSpec = _MEDIAN, ky: KernelSpec = _MEDIAN
) -> TestOutcome:
    """Gamma-approximation test of X independent of Y on statistic n * HSIC_b."""
    alpha = check_alpha(alpha)
    X, Y = paired(X, Y)
    n = X.shape[0]
    if n < 6:
        raise InsufficientDataError(f"gamma null needs n >= 6, got n={n}")
    K, L, Kc, Lc = _centered_grams(X, Y, kx, ky)
    stat = n * max(_hsic_from_centered(Kc, Lc), 0.0)
    params = _gamma_params(K, L, Kc, Lc)
    threshold = gamma_quantile(params, 1.0 - alpha)
    p_value = gamma_sf(params, stat)
    return TestOutcome(
        statistic=stat,
        threshold=threshold,
        p_value=p_value,
        reject=bool(stat > threshold),
        alpha=alpha,
        null_params=params,
        info={"n": n},
    )


def permutation_independence_test(
    X,
    Y,
    alpha: float = 0.05,
    kx: KernelSpec = _MEDIAN,
    ky: KernelSpec = _MEDIAN,
    shuffles: int = 500,
    seed=None,
) -> TestOutcome:
    """Permutation null: rows of Y are shuffled against fixed X.

    p = (1 + #{shuffled >= observed}) / (shuffles + 1).
    """
    alpha = check_alpha(alpha)
    if shuffles < 100:
        raise InvalidParameterError(f"need at least 100 shuffles, got {shuffles}")
    X, Y = paired(X, Y)
    n = X.shape[0]
    _, _, Kc, Lc = _centered_grams(X, Y, kx, ky)
    observed = n * max(_hsic_from_centered(Kc, Lc), 0.0)

    rng = np.random.default_rng(seed)
    null = np.empty(shuffles)
    for b in range(shuffles):
        perm = rng.permutation(n)
        # a permuted Gram of a centered Gram is still centered
        null[b] = np.sum(Kc * Lc[np.ix_(perm, perm)]) / n
    exceed = int(np.count_nonzero(null >= observed))
    p_value = (1 + exceed) / (shuffles + 1)

    # reject <=> p < alpha <=> exceed <= j - 1 <=> observed > j-th largest null value,
    # where j counts the attainable p-values m / (shuffles + 1) below alpha
    j = int(np.count_nonzero(np.arange(1, shuffles + 2) / (shuffles + 1) < alpha))
    threshold = float(np.sort(null)[::-1][j - 1]) if j >= 1 else math.inf
    return TestOutcome(
        statistic=observed,
        threshold=threshold,
        p_value=p_value,
        reject=bool(p_value < alpha),
        alpha=alpha,
        null_params=PermutationNull(shuffles=shuffles, seed=seed if isinstance(seed, int) else None),
        info={"n": n},
    )

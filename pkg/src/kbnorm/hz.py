"""Henze-Zirkler multivariate normality test with its log-normal null."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, solve_triangular
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateNullError, InvalidParameterError, SingularCovarianceError
from .hsic import check_alpha
from .kernels import as_sample
from .outcome import TestOutcome
from .special import LogNormalParams, lognormal_quantile, lognormal_sf

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class MahalanobisCache:
    """Squared Mahalanobis distances under the 1/n empirical covariance.

    ``D_pair_condensed`` holds D_ij for i < j in ``pdist`` order; the full
    matrix is materialized on demand.
    """

    S: np.ndarray
    S_inv: np.ndarray
    D_pair_condensed: np.ndarray
    D_center: np.ndarray
    x_bar: np.ndarray

    @property
    def n(self) -> int:
        return self.D_center.shape[0]

    @property
    def d(self) -> int:
        return self.x_bar.shape[0]

    @property
    def D_pair(self) -> np.ndarray:
        return squareform(self.D_pair_condensed)


def mahalanobis_cache(sample) -> MahalanobisCache:
    X = as_sample(sample)
    n, d = X.shape
    if n <= d:
        raise SingularCovarianceError(f"covariance is singular: n={n} <= d={d}")
    x_bar = X.mean(axis=0)
    Xc = X - x_bar
    S = Xc.T @ Xc / n
    S = 0.5 * (S + S.T)
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularCovarianceError(f"covariance condition number {cond:.3g} exceeds {MAX_CONDITION:g}")
    try:
        chol, lower = cho_factor(S, lower=True)
    except LinAlgError as exc:
        raise SingularCovarianceError(f"covariance is not positive definite: {exc}") from exc
    chol = np.tril(chol)
    # whitened rows z_i = C^{-1}(x_i - x_bar), so D_ij = ||z_i - z_j||^2
    Z = solve_triangular(chol, Xc.T, lower=True).T
    eye_inv = solve_triangular(chol, np.eye(d), lower=True)
    S_inv = eye_inv.T @ eye_inv
    return MahalanobisCache(
        S=S,
        S_inv=S_inv,
        D_pair_condensed=pdist(Z, "sqeuclidean"),
        D_center=np.einsum("ij,ij->i", Z, Z),
        x_bar=x_bar,
    )


def hz_bandwidth(n: int, d: int) -> float:
    """Henze-Zirkler smoothing parameter (n(2d+1)/4)^(1/(d+4)) / sqrt(2)."""
    if n < 1 or d < 1:
        raise InvalidParameterError(f"n and d must be positive, got n={n}, d={d}")
    return (n * (2 * d + 1) / 4.0) ** (1.0 / (d + 4)) / math.sqrt(2.0)


def hz_statistic_from_cache(cache: MahalanobisCache, h: float) -> float:
    n, d = cache.n, cache.d
    h2 = h * h
    # ordered double sum: n diagonal terms (D_ii = 0) plus each i<j pair twice
    pair_sum = n + 2.0 * np.exp(-0.5 * h2 * cache.D_pair_condensed).sum()
    center_sum = np.exp(-h2 / (2.0 * (1.0 + h2)) * cache.D_center).sum()
    return float(
        pair_sum / n
        - 2.0 * (1.0 + h2) ** (-d / 2.0) * center_sum
        + n * (1.0 + 2.0 * h2) ** (-d / 2.0)
    )


def hz_statistic(sample, h: float) -> float:
    if not h > 0:
        raise InvalidParameterError(f"h must be positive, got {h}")
    return hz_statistic_from_cache(mahalanobis_cache(sample), h)


@dataclass(frozen=True)
class HzNull:
    mean: float
    variance: float
    lognormal: LogNormalParams
    h: float
    a: float
    w_h: float


def hz_null(n: int, d: int, h: float) -> HzNull:
    """Log-normal null of the HZ statistic by moment matching.

    ``n`` is accepted for interface symmetry; the asymptotic moments depend on
    d and h only.
    """
    if n < 1 or d < 1 or not h > 0:
        raise InvalidParameterError(f"need n, d >= 1 and h > 0, got n={n}, d={d}, h={h}")
    h2 = h * h
    h4 = h2 * h2
    h8 = h4 * h4
    a = 1.0 + 2.0 * h2
    w = (1.0 + h2) * (1.0 + 3.0 * h2)
    dd2 = d * (d + 2.0)
    mean = 1.0 - a ** (-d / 2.0) * (1.0 + d * h2 / a + dd2 * h4 / (2.0 * a * a))
    variance = (
        2.0 * (1.0 + 4.0 * h2) ** (-d / 2.0)
        + 2.0 * a ** (-d) * (1.0 + 2.0 * d * h4 / a**2 + 3.0 * dd2 * h8 / (4.0 * a**4))
        - 4.0 * w ** (-d / 2.0) * (1.0 + 3.0 * d * h4 / (2.0 * w) + dd2 * h8 / (2.0 * w * w))
    )
    if not (mean > 0 and variance > 0):
        raise DegenerateNullError(f"HZ null moments not positive (mean={mean}, variance={variance})")
    log_var = math.log1p(variance / (mean * mean))
    lognormal = LogNormalParams(log_mean=math.log(mean) - log_var / 2.0, log_sd=math.sqrt(log_var))
    return HzNull(mean=mean, variance=variance, lognormal=lognormal, h=h, a=a, w_h=w)


def hz_normality_test(sample, alpha: float = 0.05) -> TestOutcome:
    """Henze-Zirkler test with the recommended bandwidth.

    Raises SingularCovarianceError when the test is inapplicable (n <= d or
    singular covariance); it never silently accepts.
    """
    alpha = check_alpha(alpha)
    X = as_sample(sample)
    n, d = X.shape
    h = hz_bandwidth(n, d)
    cache = mahalanobis_cache(X)
    stat = hz_statistic_from_cache(cache, h)
    null = hz_null(n, d, h)
    threshold = lognormal_quantile(null.lognormal, 1.0 - alpha)
    p_value = lognormal_sf(null.lognormal, stat) if stat > 0 else 1.0
    return TestOutcome(
        statistic=stat,
        threshold=threshold,
        p_value=p_value,
        reject=bool(p_value < alpha),
        alpha=alpha,
        null_params=null.lognormal,
        info={"n": n, "d": d, "h": h, "null_mean": null.mean, "null_variance": null.variance},
    )

"""Scalar special functions for the gamma (HSIC) and log-normal (HZ) nulls.

The regularized incomplete gamma function uses the usual split: power series
below ``a + 1`` and a Lentz continued fraction above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

from .errors import InvalidParameterError

_EPS = 1e-15
_TINY = 1e-300
_STD_NORMAL = NormalDist()


@dataclass(frozen=True)
class GammaParams:
    """Gamma law with shape ``u`` and scale ``v`` (mean u*v)."""

    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise InvalidParameterError(
                f"gamma parameters must be positive, got shape={self.shape}, scale={self.scale}"
            )

    @property
    def mean(self) -> float:
        return self.shape * self.scale


@dataclass(frozen=True)
class LogNormalParams:
    log_mean: float
    log_sd: float

    def __post_init__(self):
        if not self.log_sd > 0:
            raise InvalidParameterError(f"log_sd must be positive, got {self.log_sd}")


def std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def std_normal_ppf(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"probability must lie in (0, 1), got {p}")
    return _STD_NORMAL.inv_cdf(p)


def _max_iter(a: float) -> int:
    return 1000 + int(10 * math.sqrt(a))


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) by the power series; valid (and fast) for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_max_iter(a)):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_contfrac(a: float, x: float) -> float:
    # Q(a, x) by modified Lentz; valid for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _max_iter(a)):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _check_gamma_args(a: float, x: float) -> None:
    if not (a > 0 and math.isfinite(a)):
        raise InvalidParameterError(f"shape must be positive and finite, got {a}")
    if not x >= 0:
        raise InvalidParameterError(f"argument must be non-negative, got {x}")


def reg_lower_incomplete_gamma(a: float, x: float) -> float:
    """P(a, x) = gamma(a, x) / Gamma(a)."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_contfrac(a, x))


def reg_upper_incomplete_gamma(a: float, x: float) -> float:
    """Q(a, x) = 1 - P(a, x), computed directly in the upper tail."""
    _check_gamma_args(a, x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_contfrac(a, x))


def gamma_pdf_unit(a: float, x: float) -> float:
    if x <= 0.0:
        return 0.0
    return math.exp((a - 1.0) * math.log(x) - x - math.lgamma(a))


def gamma_sf(params: GammaParams, t: float) -> float:
    if t <= 0:
        return 1.0
    return reg_upper_incomplete_gamma(params.shape, t / params.scale)


def gamma_quantile(params: GammaParams, p: float) -> float:
    """Inverse gamma CDF.

    Works on log(y) with a geometric bracket, so tiny quantiles of small
    shapes are reachable; Newton steps are taken when they stay inside the
    bracket, otherwise the bracket is bisected.
    """
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"probability must lie in (0, 1), got {p}")
    a = params.shape
    upper = p > 0.5
    q = 1.0 - p

    def resid(y):
        # increasing in y; the tail with the smaller probability is evaluated directly
        if upper:
            return q - reg_upper_incomplete_gamma(a, y)
        return reg_lower_incomplete_gamma(a, y) - p

    # leading series term P(a, y) ~ y^a / Gamma(a + 1) gives a good small-y start
    log_guess = (math.log(p) + math.lgamma(a + 1.0)) / a
    y = math.exp(min(log_guess, math.log(max(1.0, a))))
    lo = hi = y
    while resid(lo) > 0.0:
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    while resid(hi) < 0.0:
        hi *= 2.0
        if hi > 1e300:
            raise InvalidParameterError("quantile bracket diverged")

    t_lo, t_hi = math.log(lo), math.log(hi)
    t = math.log(y) if t_lo < math.log(y) < t_hi else 0.5 * (t_lo + t_hi)
    for _ in range(400):
        y = math.exp(t)
        r = resid(y)
        if r == 0.0:
            break
        if r < 0.0:
            t_lo = t
        else:
            t_hi = t
        slope = gamma_pdf_unit(a, y) * y
        t_new = t - r / slope if slope > 0.0 else math.nan
        if not t_lo < t_new < t_hi:
            t_new = 0.5 * (t_lo + t_hi)
        if abs(t_new - t) <= 1e-15 * max(1.0, abs(t)) or t_hi - t_lo <= 1e-15 * max(1.0, abs(t)):
            t = t_new
            break
        t = t_new
    return math.exp(t) * params.scale


def lognormal_sf(params: LogNormalParams, t: float) -> float:
    """P(T > t) for log T ~ N(log_mean, log_sd^2)."""
    if not t > 0:
        raise InvalidParameterError(f"log-normal argument must be positive, got {t}")
    z = (math.log(t) - params.log_mean) / params.log_sd
    return std_normal_cdf(-z)


def lognormal_quantile(params: LogNormalParams, p: float) -> float:
    return math.exp(params.log_mean + params.log_sd * std_normal_ppf(p))

import math

import numpy as np
import pytest
from scipy import special as sp

from kbnorm import GammaParams, InvalidParameterError, LogNormalParams
from kbnorm.special import (
    gamma_quantile,
    lognormal_quantile,
    lognormal_sf,
    reg_lower_incomplete_gamma,
    reg_upper_incomplete_gamma,
    std_normal_cdf,
    std_normal_ppf,
)

# Frozen with mpmath at 30 digits: bisection on 1 - exp(-x)(1 + x) = 0.95,
# -log(0.05), Phi(1.959964), 1 - Phi(1).
SHAPE2_Q95 = 4.74386451839057730044508648791
EXP_Q95 = 2.99573227355399099343522357614
PHI_1959964 = 0.975000000903557595697504894747
SF_ONE = 0.158655253931457051414767454368


class TestNormal:
    def test_center(self):
        assert std_normal_cdf(0.0) == 0.5

    def test_quantile_point(self):
        assert std_normal_cdf(1.959964) == pytest.approx(PHI_1959964, abs=1e-14)

    def test_symmetry(self, rng):
        for x in rng.normal(scale=4, size=200):
            assert abs(std_normal_cdf(-x) - (1 - std_normal_cdf(x))) <= 1e-12

    def test_tail(self):
        assert std_normal_cdf(-10.0) < 1e-20

    def test_ppf_round_trip(self):
        for p in (1e-9, 0.01, 0.5, 0.975):
            assert std_normal_cdf(std_normal_ppf(p)) == pytest.approx(p, rel=1e-9)


class TestIncompleteGamma:
    def test_exponential_case(self):
        for x in np.linspace(0, 40, 81):
            assert abs(reg_lower_incomplete_gamma(1.0, x) - (-math.expm1(-x))) <= 1e-12

    def test_shape_two_point(self):
        assert reg_lower_incomplete_gamma(2.0, SHAPE2_Q95) == pytest.approx(0.95, abs=1e-14)

    def test_zero(self):
        assert reg_lower_incomplete_gamma(3.3, 0.0) == 0.0

    def test_bad_shape(self):
        with pytest.raises(InvalidParameterError):
            reg_lower_incomplete_gamma(0.0, 1.0)

    def test_against_scipy(self, rng):
        for _ in range(500):
            a = 10 ** rng.uniform(-2, 3.5)
            x = a * 10 ** rng.uniform(-2, 1)
            assert reg_lower_incomplete_gamma(a, x) == pytest.approx(sp.gammainc(a, x), abs=1e-12, rel=1e-10)
            assert reg_upper_incomplete_gamma(a, x) == pytest.approx(sp.gammaincc(a, x), abs=1e-300, rel=1e-9)

    def test_monotone(self):
        for a in (0.3, 1.0, 7.0, 150.0):
            vals = [reg_lower_incomplete_gamma(a, x) for x in np.linspace(0, 3 * a + 10, 400)]
            assert all(b >= c for b, c in zip(vals[1:], vals[:-1]))


class TestGammaQuantile:
    def test_exponential(self):
        assert gamma_quantile(GammaParams(1.0, 1.0), 0.95) == pytest.approx(EXP_Q95, abs=1e-12)

    def test_shape_two(self):
        assert gamma_quantile(GammaParams(2.0, 1.0), 0.95) == pytest.approx(SHAPE2_Q95, abs=1e-12)

    def test_scale_family(self):
        for v in (0.01, 3.0, 250.0):
            q1 = gamma_quantile(GammaParams(4.5, 1.0), 0.9)
            assert gamma_quantile(GammaParams(4.5, v), 0.9) == pytest.approx(v * q1, rel=1e-12)

    def test_monotone_in_p(self):
        qs = [gamma_quantile(GammaParams(3.0, 2.0), p) for p in np.linspace(0.001, 0.999, 200)]
        assert all(b > a for a, b in zip(qs, qs[1:]))

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_bad_p(self, p):
        with pytest.raises(InvalidParameterError):
            gamma_quantile(GammaParams(1.0, 1.0), p)

    def test_bad_params(self):
        with pytest.raises(InvalidParameterError):
            GammaParams(-1.0, 1.0)


class TestLogNormal:
    def test_median(self):
        assert lognormal_sf(LogNormalParams(0.0, 1.0), 1.0) == 0.5

    def test_at_e(self):
        assert lognormal_sf(LogNormalParams(0.0, 1.0), math.e) == pytest.approx(SF_ONE, abs=1e-14)

    def test_left_tail(self):
        assert lognormal_sf(LogNormalParams(0.0, 1.0), 1e-300) == pytest.approx(1.0)

    def test_nonpositive(self):
        with pytest.raises(InvalidParameterError):
            lognormal_sf(LogNormalParams(0.0, 1.0), 0.0)

    def test_quantile_consistent(self):
        par = LogNormalParams(-0.3, 0.2)
        assert lognormal_sf(par, lognormal_quantile(par, 0.95)) == pytest.approx(0.05, rel=1e-10)

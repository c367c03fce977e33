"""Special-function accuracy against closed forms and independent oracles."""
import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from extreme_fpt.errors import DomainError
from extreme_fpt.specialfn import (
    BesselOrder,
    bessel_i,
    bessel_k,
    erfc,
    gamma_fn,
    lambert_w0,
    regularized_upper_gamma,
    upper_incomplete_gamma,
)


class TestGamma:
    def test_integer_factorials(self):
        assert gamma_fn(1.0) == 1.0
        assert gamma_fn(5.0) == 24.0

    def test_half(self):
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_recurrence(self):
        for x in np.linspace(0.1, 20.0, 57):
            assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_fn(0.0)
        with pytest.raises(DomainError):
            gamma_fn(-1.5)


class TestUpperIncompleteGamma:
    def test_at_zero_matches_gamma(self):
        for k in (1, 2, 5, 12):
            assert upper_incomplete_gamma(k, 0.0) == pytest.approx(gamma_fn(float(k)), rel=1e-14)

    def test_trivial_values(self):
        assert upper_incomplete_gamma(1, 0.0) == pytest.approx(1.0)
        assert upper_incomplete_gamma(2, 0.0) == pytest.approx(1.0)

    def test_against_quadrature(self):
        # independent oracle: numerical quadrature of the defining integral
        for k, z in [(2, 1.0), (3, 0.5), (5, 4.0), (1, 2.5)]:
            oracle, err = scipy.integrate.quad(lambda u, k=k: u ** (k - 1) * math.exp(-u), z, np.inf)
            assert err < 1e-8
            assert upper_incomplete_gamma(k, z) == pytest.approx(oracle, rel=1e-9)

    def test_k2_closed_form(self):
        # Gamma(2, z) = (1 + z) e^{-z}
        for z in (0.1, 1.0, 3.0, 10.0):
            assert upper_incomplete_gamma(2, z) == pytest.approx((1 + z) * math.exp(-z), rel=1e-13)

    def test_monotone_decreasing_in_z(self):
        zs = np.linspace(0.0, 30.0, 200)
        vals = [upper_incomplete_gamma(4, z) for z in zs]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_regularized_bounds(self):
        for k in (1, 3, 7):
            for z in (0.0, 0.3, 2.0, 40.0):
                q = regularized_upper_gamma(k, z)
                assert 0.0 <= q <= 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            upper_incomplete_gamma(0, 1.0)
        with pytest.raises(DomainError):
            upper_incomplete_gamma(2, -0.1)


class TestLambertW:
    def test_trivial(self):
        assert lambert_w0(0.0) == 0.0
        assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-13)

    def test_fixed_point_oracle(self):
        # independent oracle: the contraction w <- (w^2 + z e^{-w})/(w + 1)
        z = 1.0
        w = 0.5
        for _ in range(200):
            w = (w * w + z * math.exp(-w)) / (w + 1.0)
        assert lambert_w0(1.0) == pytest.approx(w, abs=1e-12)

    def test_round_trip_log_grid(self):
        for z in np.logspace(-6, 6, 100):
            w = lambert_w0(z)
            assert abs(w * math.exp(w) - z) <= 1e-12 * max(1.0, z)

    def test_negative_branch_region(self):
        for z in (-0.35, -0.2, -0.05, -1 / math.e + 1e-9):
            w = lambert_w0(z)
            assert w >= -1.0
            assert abs(w * math.exp(w) - z) <= 1e-12

    def test_branch_point(self):
        assert lambert_w0(-1.0 / math.e) == pytest.approx(-1.0, abs=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            lambert_w0(-0.5)


class TestBessel:
    def test_order_validation(self):
        with pytest.raises(DomainError):
            BesselOrder(2, 3)
        with pytest.raises(DomainError):
            BesselOrder(0, 4)

    def test_dim1_closed_forms(self):
        assert bessel_i(BesselOrder(0, 1), 1.0) == pytest.approx(math.e, rel=1e-15)
        assert bessel_k(BesselOrder(1, 1), 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)

    def test_dim3_closed_forms(self):
        assert bessel_i(BesselOrder(0, 3), 1.0) == pytest.approx(math.sinh(1.0), rel=1e-14)
        assert bessel_k(BesselOrder(1, 3), 2.0) == pytest.approx(math.exp(-2.0) * 3.0 / 4.0, rel=1e-14)

    @pytest.mark.parametrize("alpha", [0, 1])
    def test_dim2_against_scipy(self, alpha):
        order = BesselOrder(alpha, 2)
        for x in np.logspace(-3, math.log10(50.0), 60):
            assert bessel_i(order, x) == pytest.approx(scipy.special.iv(alpha, x), rel=1e-10)
            assert bessel_k(order, x) == pytest.approx(scipy.special.kv(alpha, x), rel=1e-10)

    def test_i13_small_argument_series(self):
        # scipy oracle: I_{1,3}(x) = sqrt(pi/(2x)) I_{3/2}(x)
        for x in (1e-3, 1e-2, 0.1, 0.4):
            oracle = math.sqrt(math.pi / (2 * x)) * scipy.special.iv(1.5, x)
            assert bessel_i(BesselOrder(1, 3), x) == pytest.approx(oracle, rel=1e-12)

    @pytest.mark.parametrize("dim,const", [(1, 2.0), (2, 1.0), (3, 1.0)])
    def test_wronskian_family(self, dim, const):
        for x in np.linspace(0.1, 20.0, 40):
            lhs = bessel_i(BesselOrder(0, dim), x) * bessel_k(BesselOrder(1, dim), x) + bessel_i(
                BesselOrder(1, dim), x
            ) * bessel_k(BesselOrder(0, dim), x)
            assert lhs == pytest.approx(const * x ** -(dim - 1), rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            bessel_i(BesselOrder(0, 2), 0.0)
        with pytest.raises(DomainError):
            bessel_k(BesselOrder(0, 3), -1.0)


class TestErfc:
    def test_trivial(self):
        assert erfc(0.0) == 1.0
        assert erfc(10.0) < 1e-40

    def test_against_quadrature(self):
        oracle, err = scipy.integrate.quad(lambda u: 2.0 / math.sqrt(math.pi) * math.exp(-u * u), 1.0, np.inf)
        assert err < 1e-8
        assert erfc(1.0) == pytest.approx(oracle, rel=1e-9)
        assert erfc(1.0) == pytest.approx(0.15729920705028513, rel=1e-12)
